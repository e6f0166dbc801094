//! The harmonic (stuffle) product on `𝔥¹`, the operators `ℋ_w`, and exact
//! membership in the linear Kawashima space `L_xφ(𝔥y ∗ 𝔥y)`.
//!
//! Words of `𝔥y` factor uniquely as `z_{k₁}⋯z_{k_r}`; the product is
//!
//! ```text
//! 1 ∗ w = w ∗ 1 = w
//! z_k w ∗ z_l w' = z_k (w ∗ z_l w') + z_l (z_k w ∗ w') + z_{k+l} (w ∗ w')
//! ```

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::linalg::ReducedBasis;
use crate::rational::{to_pq, Q};
use crate::treemap::TreeMaps;
use crate::words::{chi_x, chi_x_inverse, phi_auto, tau_anti, Letter, Poly, Word, WordOperator};

/// Word-level products are cached up to this combined weight.
const CACHE_WEIGHT: usize = 14;

type Counts = Arc<Vec<(Word, u128)>>;

fn stuffle_cache() -> &'static RwLock<HashMap<(Word, Word), Counts>> {
    static CACHE: OnceLock<RwLock<HashMap<(Word, Word), Counts>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn z_parts(w: &Word) -> Vec<u32> {
    let mut parts = Vec::new();
    let mut rest = *w;
    while let Some((k, r)) = rest.split_first_z() {
        parts.push(k);
        rest = r;
    }
    parts
}

fn merge(mut terms: Vec<(Word, u128)>) -> Vec<(Word, u128)> {
    terms.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(Word, u128)> = Vec::with_capacity(terms.len());
    for (w, n) in terms {
        match out.last_mut() {
            Some((last, m)) if *last == w => *m = m.checked_add(n).expect("stuffle coefficient overflow"),
            _ => out.push((w, n)),
        }
    }
    out
}

/// `u ∗ v` with multiplicities, by dynamic programming over suffix pairs.
///
/// Coefficients of a product of two words count lattice paths, so they are
/// positive integers; for total weight ≤ 63 they fit in `u128`.
fn stuffle_counts(u: &Word, v: &Word) -> Counts {
    let key = if u <= v { (*u, *v) } else { (*v, *u) };
    let cacheable = u.weight() + v.weight() <= CACHE_WEIGHT;
    if cacheable {
        if let Some(c) = stuffle_cache().read().unwrap().get(&key) {
            return c.clone();
        }
    }
    let (a, b) = (z_parts(&key.0), z_parts(&key.1));
    let suffix = |parts: &[u32]| parts.iter().fold(Word::empty(), |w, &k| w.concat(Word::z(k)));
    // row[j] = a[i..] ∗ b[j..], filled from i = |a| down to 0
    let mut row: Vec<Vec<(Word, u128)>> = (0..=b.len()).map(|j| vec![(suffix(&b[j..]), 1)]).collect();
    for i in (0..a.len()).rev() {
        let mut next = vec![Vec::new(); b.len() + 1];
        next[b.len()] = vec![(suffix(&a[i..]), 1)];
        for j in (0..b.len()).rev() {
            let mut terms = Vec::with_capacity(row[j].len() + next[j + 1].len() + row[j + 1].len());
            let pre = |k: u32, src: &[(Word, u128)], out: &mut Vec<(Word, u128)>| {
                let z = Word::z(k);
                out.extend(src.iter().map(|(w, n)| (z.concat(*w), *n)));
            };
            pre(a[i], &row[j], &mut terms);
            pre(b[j], &next[j + 1], &mut terms);
            pre(a[i] + b[j], &row[j + 1], &mut terms);
            next[j] = if a[i] == b[j] { merge(terms) } else { terms };
        }
        row = next;
    }
    let out: Counts = Arc::new(std::mem::take(&mut row[0]));
    if cacheable {
        stuffle_cache().write().unwrap().insert(key, out.clone());
    }
    out
}

/// `u ∗ v` for words of `𝔥¹`.
pub fn stuffle_words(u: &Word, v: &Word) -> Poly {
    let mut out = Poly::zero();
    for (w, n) in stuffle_counts(u, v).iter() {
        out.add_term(*w, Q::from_integer((*n).into()));
    }
    out
}

fn check_h1(p: &Poly) -> Result<()> {
    match p.words().find(|w| !w.in_h1()) {
        Some(w) => Err(Error::domain(format!("stuffle: word {w} is not in 𝔥¹"))),
        None => Ok(()),
    }
}

/// `u ∗ v`, bilinear, for `u, v ∈ 𝔥¹`.
pub fn stuffle(u: &Poly, v: &Poly) -> Result<Poly> {
    check_h1(u)?;
    check_h1(v)?;
    Ok(stuffle_unchecked(u, v))
}

fn stuffle_unchecked(u: &Poly, v: &Poly) -> Poly {
    // integer numerators over the common denominator of the pair coefficients
    let pairs: Vec<(&Word, &Word, Q)> = u.iter().flat_map(|(a, c)| v.iter().map(move |(b, d)| (a, b, c * d))).collect();
    let denom = pairs.iter().fold(BigInt::one(), |l, (_, _, c)| l.lcm(c.denom()));
    let numers: Vec<BigInt> = pairs.iter().map(|(_, _, c)| c.numer() * (&denom / c.denom())).collect();
    let small = accumulate_i128(&pairs, &numers);
    let mut out = Poly::zero();
    match small {
        Some(acc) => {
            for (w, n) in acc {
                out.add_term(w, Q::new(BigInt::from(n), denom.clone()));
            }
        }
        None => {
            let mut acc: HashMap<Word, BigInt> = HashMap::new();
            for ((a, b, _), k) in pairs.iter().zip(&numers) {
                for (w, n) in stuffle_counts(a, b).iter() {
                    *acc.entry(*w).or_default() += k * BigInt::from(*n);
                }
            }
            for (w, n) in acc {
                out.add_term(w, Q::new(n, denom.clone()));
            }
        }
    }
    out
}

/// The fast path of [`stuffle_unchecked`]; `None` on overflow.
fn accumulate_i128(pairs: &[(&Word, &Word, Q)], numers: &[BigInt]) -> Option<HashMap<Word, i128>> {
    let mut acc: HashMap<Word, i128> = HashMap::new();
    for ((a, b, _), k) in pairs.iter().zip(numers) {
        let k = k.to_i128()?;
        for (w, n) in stuffle_counts(a, b).iter() {
            let t = k.checked_mul(i128::try_from(*n).ok()?)?;
            let e = acc.entry(*w).or_insert(0);
            *e = e.checked_add(t)?;
        }
    }
    Some(acc)
}

/// The left stuffle operator `ℋ_w(v) = w ∗ v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StuffleOp {
    w: Poly,
}

pub fn h_w(w: &Poly) -> Result<StuffleOp> {
    check_h1(w)?;
    Ok(StuffleOp { w: w.clone() })
}

impl StuffleOp {
    pub fn word(&self) -> &Poly {
        &self.w
    }

    pub fn try_apply(&self, v: &Poly) -> Result<Poly> {
        stuffle(&self.w, v)
    }
}

impl WordOperator for StuffleOp {
    /// Panics if `v` is not in `𝔥¹`; use [`StuffleOp::try_apply`] to get an error instead.
    fn apply_word(&self, v: &Word) -> Poly {
        assert!(v.in_h1(), "ℋ_w is defined on 𝔥¹ only, got {v}");
        stuffle_unchecked(&self.w, &Poly::from_word(*v))
    }
}

/// `L_x φ(p)`.
pub fn kawashima_image(p: &Poly) -> Poly {
    Poly::x().concat(&phi_auto(p))
}

/// The weight-`n` part of `L_xφ(𝔥y ∗ 𝔥y)` in reduced echelon form.
#[derive(Clone, Debug)]
pub struct KawashimaSpace {
    weight: usize,
    generators: Vec<(Word, Word)>,
    basis: ReducedBasis,
}

/// Proof that a polynomial lies in a [`KawashimaSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// Coefficients on the reduced basis rows.
    pub basis_coefficients: Vec<(usize, Q)>,
    /// The same element as a combination of generators `L_xφ(u ∗ v)`.
    pub generator_coefficients: Vec<((Word, Word), Q)>,
}

impl Certificate {
    /// `("(u,v)", "p/q")` pairs, one per generator used.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        self.generator_coefficients
            .iter()
            .map(|((u, v), c)| (format!("({u},{v})"), to_pq(c)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member(Certificate),
    NotMember { residual: Poly },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

impl KawashimaSpace {
    pub fn build(weight: usize) -> Self {
        assert!(weight >= 2, "Kawashima spaces start at weight 2");
        let mut generators = Vec::new();
        // |u| + |v| = weight - 1, both nonempty, u ≤ v
        for a in 1..weight - 1 {
            let b = weight - 1 - a;
            if a > b {
                break;
            }
            for u in Word::ending_in_y_of_weight(a) {
                for v in Word::ending_in_y_of_weight(b) {
                    if a == b && v < u {
                        continue;
                    }
                    generators.push((u, v));
                }
            }
        }
        let mut basis = ReducedBasis::new();
        for (id, (u, v)) in generators.iter().enumerate() {
            let g = kawashima_image(&stuffle_words(u, v));
            basis.insert(id, &g);
        }
        KawashimaSpace { weight, generators, basis }
    }

    /// Shared, lazily built space for each weight.
    pub fn cached(weight: usize) -> Arc<KawashimaSpace> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<KawashimaSpace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(s) = cache.lock().unwrap().get(&weight) {
            return s.clone();
        }
        // built outside the lock; a concurrent duplicate build is harmless
        let space = Arc::new(KawashimaSpace::build(weight));
        cache.lock().unwrap().entry(weight).or_insert(space).clone()
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn dimension(&self) -> usize {
        self.basis.rank()
    }

    pub fn basis(&self) -> &[Poly] {
        self.basis.rows()
    }

    pub fn generators(&self) -> &[(Word, Word)] {
        &self.generators
    }

    /// The polynomial `L_xφ(u ∗ v)` of generator `id`.
    pub fn generator(&self, id: usize) -> Poly {
        let (u, v) = self.generators[id];
        kawashima_image(&stuffle_words(&u, &v))
    }

    /// Decides whether `p` lies in the space.
    pub fn member(&self, p: &Poly) -> Result<Membership> {
        if let Some(w) = p.words().find(|w| w.weight() != self.weight) {
            return Err(Error::WeightMismatch { expected: self.weight, found: w.weight() });
        }
        let red = self.basis.reduce(p);
        if !red.residual.is_zero() {
            return Ok(Membership::NotMember { residual: red.residual });
        }
        let gens = self.basis.to_generators(&red.coefficients);
        let generator_coefficients = gens.into_iter().map(|(id, c)| (self.generators[id], c)).collect();
        Ok(Membership::Member(Certificate { basis_coefficients: red.coefficients, generator_coefficients }))
    }
}

pub fn kawashima_basis(weight: usize) -> Arc<KawashimaSpace> {
    KawashimaSpace::cached(weight)
}

pub fn member(p: &Poly, space: &KawashimaSpace) -> Result<Membership> {
    space.member(p)
}

/// `(1 - τ)(w)` lies in the space for every admissible word of this weight.
pub fn duality_containment_test(weight: usize) -> bool {
    let space = KawashimaSpace::cached(weight);
    Word::admissible_of_weight(weight).all(|w| {
        let p = Poly::from_word(w);
        let d = &p - &tau_anti(&p);
        space.member(&d).map(|m| m.is_member()).unwrap_or(false)
    })
}

/// The word `w = χ_x^{-1} f(y)` with `f χ_x = χ_x ℋ_w`.
pub fn conjugating_word(engine: &TreeMaps, f: &Forest) -> Result<Poly> {
    chi_x_inverse(&engine.letter_image(f, Letter::Y))
}

/// Checks `f(χ_x(v)) = χ_x(ℋ_w(v))` for `v = 1` and every word of `𝔥y`
/// of weight ≤ `max_weight`.
pub fn corollary_check(engine: &TreeMaps, f: &Forest, max_weight: usize) -> Result<bool> {
    if f.is_unit() {
        return Err(Error::domain("the conjugation identity needs a nonempty forest"));
    }
    let w = conjugating_word(engine, f)?;
    let h = h_w(&w)?;
    let words = std::iter::once(Word::empty()).chain((1..=max_weight).flat_map(Word::ending_in_y_of_weight));
    for v in words {
        let pv = Poly::from_word(v);
        let lhs = engine.apply(f, &chi_x(&pv));
        let rhs = chi_x(&h.try_apply(&pv)?);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-word membership summary for a forest image, keyed by source word.
pub fn image_memberships(engine: &TreeMaps, f: &Forest, words: &[Word]) -> Result<BTreeMap<Word, bool>> {
    let mut out = BTreeMap::new();
    for w in words {
        let img = engine.apply(f, &Poly::from_word(*w));
        if img.is_zero() {
            out.insert(*w, true);
            continue;
        }
        let space = KawashimaSpace::cached(w.weight() + f.degree());
        out.insert(*w, space.member(&img)?.is_member());
    }
    Ok(out)
}

/// Convenience: is the zero polynomial or has a certificate.
pub fn is_member(p: &Poly) -> Result<bool> {
    match p.homogeneous_weight() {
        None if p.is_zero() => Ok(true),
        None => Err(Error::domain("polynomial is not homogeneous")),
        Some(n) if n < 2 => Ok(p.is_zero()),
        Some(n) => Ok(KawashimaSpace::cached(n).member(p)?.is_member()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::forests_up_to;
    use num_traits::Zero;
    use crate::rational::q;
    use proptest::prelude::*;

    fn p(terms: &[(i64, &str)]) -> Poly {
        Poly::from_terms(terms.iter().copied())
    }

    fn z(k: u32) -> Poly {
        Poly::from_word(Word::z(k))
    }

    #[test]
    fn stuffle_examples() {
        let w = p(&[(1, "xyxxy")]);
        assert_eq!(stuffle(&Poly::one(), &w).unwrap(), w);
        assert_eq!(stuffle(&w, &Poly::one()).unwrap(), w);
        assert_eq!(stuffle(&z(1), &z(1)).unwrap(), z(1).concat(&z(1)).scale(&q(2)) + z(2));
        assert_eq!(
            stuffle(&z(2), &z(1)).unwrap(),
            z(2).concat(&z(1)) + z(1).concat(&z(2)) + z(3)
        );
        assert!(matches!(stuffle(&Poly::x(), &z(1)), Err(Error::Domain(_))));
    }

    #[test]
    fn h_w_operator() {
        let h = h_w(&z(1)).unwrap();
        assert_eq!(h.apply(&z(1)), p(&[(2, "yy"), (1, "xy")]));
        let w = p(&[(3, "xy"), (-1, "yy")]);
        assert_eq!(h_w(&w).unwrap().apply(&Poly::one()), w);
        let id = h_w(&Poly::one()).unwrap();
        assert_eq!(id.apply(&w), w);
        assert!(h_w(&Poly::x()).is_err());
    }

    #[test]
    fn kawashima_small_weights() {
        assert_eq!(KawashimaSpace::build(2).dimension(), 0);
        let k3 = KawashimaSpace::build(3);
        assert_eq!(k3.generators(), &[(Word::y(), Word::y())]);
        assert_eq!(k3.generator(0), p(&[(1, "xyy"), (-1, "xxy")]));
        assert_eq!(k3.dimension(), 1);
        for row in k3.basis() {
            assert!(row.in_x_h_y());
        }
    }

    /// Rank via an independent dense elimination over the generator matrix.
    fn dense_rank(rows: Vec<Poly>, weight: usize) -> usize {
        let cols: Vec<Word> = Word::all_of_weight(weight).collect();
        let mut m: Vec<Vec<Q>> = rows.iter().map(|r| cols.iter().map(|w| r.coeff(w)).collect()).collect();
        let mut rank = 0;
        for c in 0..cols.len() {
            let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
            m.swap(rank, piv);
            for r in 0..m.len() {
                if r != rank && !m[r][c].is_zero() {
                    let f = &m[r][c] / &m[rank][c];
                    let pivot_row = m[rank].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn dimension_matches_dense_rank() {
        for n in 2..=7 {
            let space = KawashimaSpace::build(n);
            let gens = (0..space.generators().len()).map(|i| space.generator(i)).collect();
            assert_eq!(space.dimension(), dense_rank(gens, n), "weight {n}");
        }
    }

    #[test]
    fn membership_examples() {
        let k3 = KawashimaSpace::cached(3);
        let euler = p(&[(1, "xyy"), (-1, "xxy")]);
        let m = k3.member(&euler).unwrap();
        let Membership::Member(cert) = m else { panic!("Euler relation must be a member") };
        assert_eq!(cert.to_pairs(), vec![("(y,y)".to_string(), "1/1".to_string())]);
        assert!(k3.member(&Poly::zero()).unwrap().is_member());
        if let Membership::Member(c) = k3.member(&Poly::zero()).unwrap() {
            assert!(c.generator_coefficients.is_empty());
        }
        match k3.member(&p(&[(1, "xxy")])).unwrap() {
            Membership::NotMember { residual } => assert!(!residual.is_zero()),
            _ => panic!("ζ(3) is not zero"),
        }
        assert!(matches!(k3.member(&p(&[(1, "xy")])), Err(Error::WeightMismatch { expected: 3, found: 2 })));
    }

    #[test]
    fn certificates_rebuild_the_element() {
        let space = KawashimaSpace::cached(5);
        let target = space.generator(2).scale(&q(2)) - space.generator(6);
        let Membership::Member(cert) = space.member(&target).unwrap() else { panic!() };
        let mut rebuilt = Poly::zero();
        for ((u, v), c) in &cert.generator_coefficients {
            rebuilt.add_scaled(&kawashima_image(&stuffle_words(u, v)), c);
        }
        assert_eq!(rebuilt, target);
    }

    #[test]
    fn duality_examples() {
        let space = KawashimaSpace::cached(3);
        let d = p(&[(1, "xxy"), (-1, "xyy")]);
        assert!(space.member(&d).unwrap().is_member());
        let xy = p(&[(1, "xy")]);
        assert!((&xy - &tau_anti(&xy)).is_zero());
        for n in 2..=6 {
            assert!(duality_containment_test(n), "weight {n}");
        }
    }

    #[test]
    fn corollary_examples() {
        let engine = TreeMaps::global();
        let dot: Forest = "[]".parse().unwrap();
        assert_eq!(conjugating_word(engine, &dot).unwrap(), Poly::y());
        let y = Poly::y();
        assert_eq!(engine.apply(&dot, &chi_x(&y)), p(&[(1, "xxy"), (-1, "xyy")]));
        assert_eq!(chi_x(&stuffle(&y, &y).unwrap()), p(&[(1, "xxy"), (-1, "xyy")]));
        for g in forests_up_to(3) {
            assert!(corollary_check(engine, &g, 4).unwrap(), "{g}");
        }
        assert!(corollary_check(engine, &Forest::unit(), 3).is_err());
    }

    #[test]
    fn chi_of_generator_splits_through_duality() {
        // χ_x(u∗v) = L_xφ(u∗v) − (1−τ)L_xφ(u∗v), with both pieces in the space
        for n in 3..=6 {
            let space = KawashimaSpace::cached(n);
            for id in 0..space.generators().len() {
                let (u, v) = space.generators()[id];
                let s = stuffle_words(&u, &v);
                let g = kawashima_image(&s);
                let dual_part = &g - &tau_anti(&g);
                assert_eq!(chi_x(&s), &g - &dual_part);
                assert!(space.member(&g).unwrap().is_member());
                assert!(space.member(&dual_part).unwrap().is_member());
            }
        }
    }

    fn arb_h1(max: usize) -> impl Strategy<Value = Poly> {
        let word = prop::collection::vec(1u32..=3, 0..=3).prop_map(|ks| ks.into_iter().fold(Word::empty(), |w, k| w.concat(Word::z(k))));
        prop::collection::vec((-3i64..=3, word), 1..3).prop_map(move |terms| {
            let mut p = Poly::zero();
            for (c, w) in terms {
                if w.weight() <= max {
                    p.add_term(w, q(c));
                }
            }
            p
        })
    }

    proptest! {
        #[test]
        fn stuffle_commutative_associative(a in arb_h1(6), b in arb_h1(6), c in arb_h1(6)) {
            let ab = stuffle(&a, &b).unwrap();
            prop_assert_eq!(&ab, &stuffle(&b, &a).unwrap());
            prop_assert_eq!(stuffle(&ab, &c).unwrap(), stuffle(&a, &stuffle(&b, &c).unwrap()).unwrap());
        }
    }
}
