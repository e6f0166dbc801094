//! Rooted tree maps: the linear operator on `𝔥` attached to each forest.
//!
//! For a forest `f ≠ 𝕀` the operator is fixed by its letter images and a
//! coproduct rule on longer words:
//!
//! * `•(x) = xy`, `•(y) = -xy`;
//! * `B₊(g)(u) = R_y R_{x+2y} R_y^{-1} g(u)` for a tree `B₊(g)`, `g ≠ 𝕀`;
//! * `(gh)(u) = g(h(u))` for a forest split into two nonempty parts;
//! * `f(wu) = Σ a(w) b(u)` over the Sweedler terms `a ⊗ b` of `Δ(f)`.
//!
//! `f(1) = 0` for `f ≠ 𝕀`, and `𝕀` acts as the identity.
//!
//! Alongside each `f` live `ψ_f = [f, R_x]` and the operator `φ_f` with
//! `ψ_f = R_y φ_f R_x`. `φ_f` is kept symbolically as a polynomial in `R_z`
//! and forest maps (they all commute), see [`PhiOp`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::forest::Forest;
use crate::hopf::coproduct;
use crate::rational::{coeff_prefix, Q};
use crate::words::{r_y_inverse, Letter, Poly, Word, WordOperator};

type Sweedler = Arc<Vec<(Forest, Forest, Q)>>;

/// Memoizing evaluator for forest maps. Safe to share between threads.
#[derive(Default)]
pub struct TreeMaps {
    coproducts: RwLock<HashMap<Forest, Sweedler>>,
    letters: RwLock<HashMap<(Forest, Letter), Poly>>,
    words: RwLock<HashMap<(Forest, Word), Poly>>,
    phis: RwLock<HashMap<Forest, PhiOp>>,
}

impl TreeMaps {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide instance used by the free functions of this module.
    pub fn global() -> &'static TreeMaps {
        static GLOBAL: OnceLock<TreeMaps> = OnceLock::new();
        GLOBAL.get_or_init(TreeMaps::new)
    }

    fn sweedler(&self, f: &Forest) -> Sweedler {
        if let Some(s) = self.coproducts.read().unwrap().get(f) {
            return s.clone();
        }
        let terms: Vec<_> = coproduct(f).iter().map(|(a, b, c)| (a.clone(), b.clone(), c.clone())).collect();
        let terms = Arc::new(terms);
        self.coproducts.write().unwrap().insert(f.clone(), terms.clone());
        terms
    }

    /// `f(u)` for a single letter `u`.
    pub fn letter_image(&self, f: &Forest, u: Letter) -> Poly {
        if f.is_unit() {
            return Poly::from_word(Word::letter(u));
        }
        let key = (f.clone(), u);
        if let Some(p) = self.letters.read().unwrap().get(&key) {
            return p.clone();
        }
        let image = match f.as_tree() {
            Some(t) if t.is_leaf() => match u {
                Letter::X => Poly::from_terms([(1, "xy")]),
                Letter::Y => Poly::from_terms([(-1, "xy")]),
            },
            Some(t) => {
                let inner = self.letter_image(&t.b_minus(), u);
                let stripped = r_y_inverse(&inner).expect("g(u) lies in x𝔥y for every forest g ≠ 𝕀");
                let y_plus_z = Poly::from_terms([(1, "x"), (2, "y")]);
                stripped.concat(&y_plus_z).concat(&Poly::y())
            }
            None => {
                let (rest, smallest) = f.split_smallest().expect("nonempty forest");
                let inner = self.letter_image(&Forest::single(smallest), u);
                self.apply(&rest, &inner)
            }
        };
        self.letters.write().unwrap().insert(key, image.clone());
        image
    }

    /// `f(w)` for a word `w`.
    pub fn apply_word(&self, f: &Forest, w: &Word) -> Poly {
        if f.is_unit() {
            return Poly::from_word(*w);
        }
        let Some((prefix, last)) = w.split_last() else {
            return Poly::zero();
        };
        if prefix.is_empty() {
            return self.letter_image(f, last);
        }
        let key = (f.clone(), *w);
        if let Some(p) = self.words.read().unwrap().get(&key) {
            return p.clone();
        }
        let mut out = Poly::zero();
        for (a, b, c) in self.sweedler(f).iter() {
            let left = self.apply_word(a, &prefix);
            if left.is_zero() {
                continue;
            }
            let right = self.letter_image(b, last);
            out.add_scaled(&left.concat(&right), c);
        }
        self.words.write().unwrap().insert(key, out.clone());
        out
    }

    /// `f(p)`, extended linearly.
    pub fn apply(&self, f: &Forest, p: &Poly) -> Poly {
        p.map_words(|w| self.apply_word(f, w))
    }

    /// `ψ_f(w) = f(wx) - f(w)x`.
    pub fn psi_word(&self, f: &Forest, w: &Word) -> Poly {
        let fwx = self.apply_word(f, &w.push(Letter::X));
        let fw_x = self.apply_word(f, w).concat(&Poly::x());
        fwx - fw_x
    }

    /// The symbolic form of `φ_f`.
    pub fn phi(&self, f: &Forest) -> PhiOp {
        if let Some(p) = self.phis.read().unwrap().get(f) {
            return p.clone();
        }
        let op = if f.is_unit() {
            PhiOp::zero()
        } else if let Some(t) = f.as_tree() {
            // φ_{B₊(g)} = g + R_z φ_g
            let g = t.b_minus();
            PhiOp::forest(g.clone()).add(&PhiOp::rz().compose(&self.phi(&g)))
        } else {
            // φ_{gh} = g φ_h + φ_g h - φ_g R_z φ_h
            let (g, h) = f.split_smallest().expect("nonempty forest");
            let h = Forest::single(h);
            let (phi_g, phi_h) = (self.phi(&g), self.phi(&h));
            PhiOp::forest(g)
                .compose(&phi_h)
                .add(&phi_g.compose(&PhiOp::forest(h)))
                .sub(&phi_g.compose(&PhiOp::rz()).compose(&phi_h))
        };
        self.phis.write().unwrap().insert(f.clone(), op.clone());
        op
    }

    /// Evaluates a [`PhiOp`] on a polynomial.
    pub fn apply_phi(&self, op: &PhiOp, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for ((k, g), c) in op.terms.iter() {
            let mut v = self.apply(g, p);
            for _ in 0..*k {
                v = v.concat(&Poly::z());
            }
            out.add_scaled(&v, c);
        }
        out
    }

    /// Checks `f(g(w)) = g(f(w))` on every word of weight ≤ `max_weight`.
    pub fn commutator_test(&self, f: &Forest, g: &Forest, max_weight: usize) -> bool {
        (0..=max_weight).flat_map(Word::all_of_weight).all(|w| {
            let fg = self.apply(f, &self.apply_word(g, &w));
            let gf = self.apply(g, &self.apply_word(f, &w));
            fg == gf
        })
    }

    /// Checks `f(vw) = Σ a(v) b(w)` over the Sweedler terms of `Δ(f)`.
    pub fn comultiplicativity_test(&self, f: &Forest, v: &Word, w: &Word) -> bool {
        let lhs = self.apply_word(f, &v.concat(*w));
        let mut rhs = Poly::zero();
        for (a, b, c) in self.sweedler(f).iter() {
            rhs.add_scaled(&self.apply_word(a, v).concat(&self.apply_word(b, w)), c);
        }
        lhs == rhs
    }
}

/// `f(u)` for a letter, using the shared evaluator.
pub fn letter_image(f: &Forest, u: Letter) -> Poly {
    TreeMaps::global().letter_image(f, u)
}

/// `f(p)`, using the shared evaluator.
pub fn apply(f: &Forest, p: &Poly) -> Poly {
    TreeMaps::global().apply(f, p)
}

pub fn psi(f: &Forest) -> Psi {
    Psi { forest: f.clone() }
}

pub fn phi(f: &Forest) -> PhiOp {
    TreeMaps::global().phi(f)
}

pub fn commutator_test(f: &Forest, g: &Forest, max_weight: usize) -> bool {
    TreeMaps::global().commutator_test(f, g, max_weight)
}

pub fn comultiplicativity_test(f: &Forest, v: &Word, w: &Word) -> bool {
    TreeMaps::global().comultiplicativity_test(f, v, w)
}

/// A forest together with its letter images `f(x)`, `f(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeMap {
    forest: Forest,
    x_image: Poly,
    y_image: Poly,
}

impl TreeMap {
    pub fn new(forest: Forest) -> Self {
        let engine = TreeMaps::global();
        let x_image = engine.letter_image(&forest, Letter::X);
        let y_image = engine.letter_image(&forest, Letter::Y);
        TreeMap { forest, x_image, y_image }
    }

    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    pub fn x_image(&self) -> &Poly {
        &self.x_image
    }

    pub fn y_image(&self) -> &Poly {
        &self.y_image
    }
}

impl WordOperator for TreeMap {
    fn apply_word(&self, w: &Word) -> Poly {
        TreeMaps::global().apply_word(&self.forest, w)
    }
}

/// `ψ_f = [f, R_x]`.
#[derive(Clone, Debug)]
pub struct Psi {
    forest: Forest,
}

impl WordOperator for Psi {
    fn apply_word(&self, w: &Word) -> Poly {
        TreeMaps::global().psi_word(&self.forest, w)
    }
}

/// A `Q`-combination of monomials `R_z^k ∘ g`, with `g` a forest map.
///
/// Tree maps commute with each other and with `R_z`, and the map of a
/// forest is the composite of its trees' maps, so a monomial is determined
/// by the power of `R_z` and a forest. The degree of `R_z^k ∘ g` is
/// `k + deg g`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhiOp {
    terms: BTreeMap<(u32, Forest), Q>,
}

impl PhiOp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::forest(Forest::unit())
    }

    pub fn rz() -> Self {
        PhiOp::monomial(1, Forest::unit(), Q::one())
    }

    pub fn forest(f: Forest) -> Self {
        PhiOp::monomial(0, f, Q::one())
    }

    pub fn monomial(rz_power: u32, f: Forest, c: Q) -> Self {
        let mut op = PhiOp::zero();
        op.add_term(rz_power, f, c);
        op
    }

    fn add_term(&mut self, k: u32, f: Forest, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (k, f);
        let e = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &PhiOp) -> PhiOp {
        let mut out = self.clone();
        for ((k, f), c) in &other.terms {
            out.add_term(*k, f.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PhiOp) -> PhiOp {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> PhiOp {
        let mut out = PhiOp::zero();
        for ((k, f), d) in &self.terms {
            out.add_term(*k, f.clone(), d * c);
        }
        out
    }

    /// Operator composition `self ∘ other`.
    pub fn compose(&self, other: &PhiOp) -> PhiOp {
        let mut out = PhiOp::zero();
        for ((k1, f1), c1) in &self.terms {
            for ((k2, f2), c2) in &other.terms {
                out.add_term(k1 + k2, f1.product(f2), c1 * c2);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Forest, &Q)> {
        self.terms.iter().map(|((k, f), c)| (*k, f, c))
    }

    /// Common degree of all monomials; `None` if mixed or zero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|(k, f)| *k as usize + f.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

impl WordOperator for PhiOp {
    fn apply_word(&self, w: &Word) -> Poly {
        TreeMaps::global().apply_phi(self, &Poly::from_word(*w))
    }
}

impl fmt::Display for PhiOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, ((k, g), c)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = if neg { -c } else { c.clone() };
            let mut factors = Vec::new();
            match k {
                0 => {}
                1 => factors.push("Rz".to_string()),
                _ => factors.push(format!("Rz^{k}")),
            }
            if !g.is_unit() {
                factors.push(g.to_string());
            }
            let body = if factors.is_empty() { "id".to_string() } else { factors.join("·") };
            write!(f, "{}{}", coeff_prefix(&abs), body)?;
        }
        Ok(())
    }
}
