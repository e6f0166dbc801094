//! Exact reduced row echelon form over `Q`, with rows indexed by words.
//!
//! Each row is a [`Poly`]; its pivot is its smallest word. The basis is kept
//! fully reduced: no row mentions another row's pivot, and every pivot
//! coefficient is 1. Every row also records how it was obtained from the
//! inserted generators, so membership answers can be expressed in terms of
//! the original generators.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Q;
use crate::words::{Poly, Word};

/// Sparse combination of generator ids.
pub type Expansion = BTreeMap<usize, Q>;

#[derive(Clone, Debug, Default)]
pub struct ReducedBasis {
    rows: Vec<Poly>,
    expansions: Vec<Expansion>,
    pivots: BTreeMap<Word, usize>,
}

/// Outcome of reducing a vector against the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// `(row index, coefficient)` for each basis row used.
    pub coefficients: Vec<(usize, Q)>,
    /// What is left after subtracting the basis combination.
    pub residual: Poly,
}

fn add_expansion(into: &mut Expansion, from: &Expansion, c: &Q) {
    for (k, v) in from {
        let e = into.entry(*k).or_insert_with(Q::zero);
        *e += v * c;
        if e.is_zero() {
            into.remove(k);
        }
    }
}

impl ReducedBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Poly] {
        &self.rows
    }

    pub fn pivot_words(&self) -> impl Iterator<Item = &Word> {
        self.pivots.keys()
    }

    pub fn expansion(&self, row: usize) -> &Expansion {
        &self.expansions[row]
    }

    /// Writes `v = Σ c_i row_i + residual` where the residual has no pivot words.
    pub fn reduce(&self, v: &Poly) -> Reduction {
        let mut coefficients = Vec::new();
        let mut residual = v.clone();
        // rows are fully reduced, so v's pivot coefficients are the answer
        for (word, &row) in &self.pivots {
            if let Some(c) = v.get(word) {
                coefficients.push((row, c.clone()));
                residual.add_scaled(&self.rows[row], &-c);
            }
        }
        coefficients.sort_by_key(|(r, _)| *r);
        Reduction { coefficients, residual }
    }

    /// Inserts generator `id` with vector `v`. Returns `true` if the rank grew.
    pub fn insert(&mut self, id: usize, v: &Poly) -> bool {
        let red = self.reduce(v);
        let mut residual = red.residual;
        if residual.is_zero() {
            return false;
        }
        let mut expansion = Expansion::new();
        expansion.insert(id, Q::one());
        for (row, c) in &red.coefficients {
            add_expansion(&mut expansion, &self.expansions[*row], &-c);
        }
        let (pivot, lead) = {
            let (w, c) = residual.leading().expect("nonzero");
            (*w, c.clone())
        };
        let inv = lead.recip();
        residual = residual.scale(&inv);
        let mut scaled = Expansion::new();
        add_expansion(&mut scaled, &expansion, &inv);
        // clear the new pivot from existing rows
        for r in 0..self.rows.len() {
            if let Some(c) = self.rows[r].get(&pivot).cloned() {
                let neg = -c;
                self.rows[r].add_scaled(&residual, &neg);
                add_expansion(&mut self.expansions[r], &scaled, &neg);
            }
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(residual);
        self.expansions.push(scaled);
        true
    }

    /// Expresses a combination of rows in terms of generators.
    pub fn to_generators(&self, coefficients: &[(usize, Q)]) -> Expansion {
        let mut out = Expansion::new();
        for (row, c) in coefficients {
            add_expansion(&mut out, &self.expansions[*row], c);
        }
        out
    }
}
