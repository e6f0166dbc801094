//! The Connes–Kreimer Hopf algebra `H` of rooted forests over `Q`.
//!
//! The coproduct is defined through grafting,
//! `Δ(B₊(f)) = B₊(f) ⊗ 𝕀 + (id ⊗ B₊)Δ(f)`, and extended multiplicatively,
//! with `Δ(𝕀) = 𝕀 ⊗ 𝕀`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::forest::{b_plus, Forest, Tree};
use crate::rational::{coeff_prefix, to_pq, Q};

/// A finite `Q`-linear combination of forests.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ForestSum {
    terms: BTreeMap<Forest, Q>,
}

/// A finite `Q`-linear combination of ordered forest pairs, an element of `H ⊗ H`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorSum {
    terms: BTreeMap<(Forest, Forest), Q>,
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Q>, key: K, c: Q) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl ForestSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_forest(f: Forest) -> Self {
        Self::term(Q::one(), f)
    }

    pub fn term(c: Q, f: Forest) -> Self {
        let mut s = Self::zero();
        s.add_term(f, c);
        s
    }

    pub fn add_term(&mut self, f: Forest, c: Q) {
        add_into(&mut self.terms, f, c);
    }

    pub fn add_assign(&mut self, other: &ForestSum) {
        for (f, c) in &other.terms {
            self.add_term(f.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Q) -> ForestSum {
        let mut out = ForestSum::zero();
        for (f, d) in &self.terms {
            out.add_term(f.clone(), d * c);
        }
        out
    }

    /// Bilinear extension of the forest product.
    pub fn mul(&self, other: &ForestSum) -> ForestSum {
        let mut out = ForestSum::zero();
        for (f, c) in &self.terms {
            for (g, d) in &other.terms {
                out.add_term(f.product(g), c * d);
            }
        }
        out
    }

    pub fn coeff(&self, f: &Forest) -> Q {
        self.terms.get(f).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Forest, &Q)> {
        self.terms.iter()
    }

    /// The degree-`n` homogeneous component.
    pub fn homogeneous(&self, n: usize) -> ForestSum {
        ForestSum {
            terms: self.terms.iter().filter(|(f, _)| f.degree() == n).map(|(f, c)| (f.clone(), c.clone())).collect(),
        }
    }

    /// `(coefficient "p/q", forest encoding)` pairs in ascending forest order.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        self.terms.iter().map(|(f, c)| (to_pq(c), f.to_string())).collect()
    }
}

impl fmt::Display for ForestSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (forest, c)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write!(f, "{}{}", coeff_prefix(&if neg { -c } else { c.clone() }), forest)?;
        }
        Ok(())
    }
}

impl TensorSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, a: Forest, b: Forest, c: Q) {
        add_into(&mut self.terms, (a, b), c);
    }

    pub fn add_assign(&mut self, other: &TensorSum) {
        for ((a, b), c) in &other.terms {
            self.add_term(a.clone(), b.clone(), c.clone());
        }
    }

    /// Componentwise product `(a⊗b)(c⊗d) = ac ⊗ bd`.
    pub fn mul(&self, other: &TensorSum) -> TensorSum {
        let mut out = TensorSum::zero();
        for ((a, b), c) in &self.terms {
            for ((x, y), d) in &other.terms {
                out.add_term(a.product(x), b.product(y), c * d);
            }
        }
        out
    }

    pub fn coeff(&self, a: &Forest, b: &Forest) -> Q {
        self.terms.get(&(a.clone(), b.clone())).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Forest, &Forest, &Q)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn to_triples(&self) -> Vec<(String, String, String)> {
        self.terms.iter().map(|((a, b), c)| (to_pq(c), a.to_string(), b.to_string())).collect()
    }
}

impl fmt::Display for TensorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, ((a, b), c)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = if neg { -c } else { c.clone() };
            write!(f, "{}{} (x) {}", coeff_prefix(&abs), a, b)?;
        }
        Ok(())
    }
}

fn tree_coproduct(t: &Tree) -> TensorSum {
    let g = t.b_minus();
    let mut out = TensorSum::zero();
    out.add_term(Forest::single(t.clone()), Forest::unit(), Q::one());
    for (a, b, c) in coproduct(&g).iter() {
        out.add_term(a.clone(), Forest::single(b_plus(b)), c.clone());
    }
    out
}

/// `Δ(f)`.
pub fn coproduct(f: &Forest) -> TensorSum {
    let mut out = TensorSum::zero();
    out.add_term(Forest::unit(), Forest::unit(), Q::one());
    for t in f.trees() {
        out = out.mul(&tree_coproduct(t));
    }
    out
}

/// Linear extension of [`coproduct`].
pub fn coproduct_sum(v: &ForestSum) -> TensorSum {
    let mut out = TensorSum::zero();
    for (f, c) in v.iter() {
        for (a, b, d) in coproduct(f).iter() {
            out.add_term(a.clone(), b.clone(), c * d);
        }
    }
    out
}

/// The counit: the coefficient of `𝕀`.
pub fn counit(v: &ForestSum) -> Q {
    v.coeff(&Forest::unit())
}

/// `m`: multiply the two tensor factors.
pub fn multiply(t: &TensorSum) -> ForestSum {
    let mut out = ForestSum::zero();
    for (a, b, c) in t.iter() {
        out.add_term(a.product(b), c.clone());
    }
    out
}

/// The antipode, from `S(𝕀) = 𝕀` and `S(f) = -f - Σ' S(a)·b` over the
/// Sweedler terms of `Δ(f)` other than `f⊗𝕀` and `𝕀⊗f`.
pub fn antipode(f: &Forest) -> ForestSum {
    antipode_memo(f, &mut HashMap::new())
}

fn antipode_memo(f: &Forest, memo: &mut HashMap<Forest, ForestSum>) -> ForestSum {
    if f.is_unit() {
        return ForestSum::from_forest(Forest::unit());
    }
    if let Some(s) = memo.get(f) {
        return s.clone();
    }
    let mut s = ForestSum::term(-Q::one(), f.clone());
    for (a, b, c) in coproduct(f).iter() {
        if a.is_unit() || b.is_unit() {
            continue;
        }
        let sa = antipode_memo(a, memo);
        s.add_assign(&sa.mul(&ForestSum::from_forest(b.clone())).scale(&-c));
    }
    memo.insert(f.clone(), s.clone());
    s
}

pub fn antipode_sum(v: &ForestSum) -> ForestSum {
    let mut out = ForestSum::zero();
    for (f, c) in v.iter() {
        out.add_assign(&antipode(f).scale(c));
    }
    out
}

/// All ways of grafting one new leaf onto a node of `t`.
pub fn grow_tree(t: &Tree) -> ForestSum {
    let mut out = ForestSum::zero();
    let children = t.children();
    let mut with_leaf = children.to_vec();
    with_leaf.push(Tree::leaf());
    out.add_term(Forest::single(Tree::new(with_leaf)), Q::one());
    for (i, c) in children.iter().enumerate() {
        for (grown, k) in grow_tree(c).iter() {
            let grown = grown.as_tree().expect("growth of a tree is a tree").clone();
            let mut kids = children.to_vec();
            kids[i] = grown;
            out.add_term(Forest::single(Tree::new(kids)), k.clone());
        }
    }
    out
}

fn grow_forest(f: &Forest) -> ForestSum {
    if f.is_unit() {
        return ForestSum::from_forest(Forest::single(Tree::leaf()));
    }
    // Leibniz rule over the trees of f.
    let trees = f.trees();
    let mut out = ForestSum::zero();
    for i in 0..trees.len() {
        let rest = Forest::from_trees(trees.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, t)| t.clone()));
        for (g, c) in grow_tree(&trees[i]).iter() {
            out.add_term(g.product(&rest), c.clone());
        }
    }
    out
}

/// The natural growth operator `N`.
pub fn natural_growth(v: &ForestSum) -> ForestSum {
    let mut out = ForestSum::zero();
    for (f, c) in v.iter() {
        out.add_assign(&grow_forest(f).scale(c));
    }
    out
}

/// `δ_k = N^k(𝕀)`.
pub fn delta_k(k: usize) -> ForestSum {
    let mut v = ForestSum::from_forest(Forest::unit());
    for _ in 0..k {
        v = natural_growth(&v);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::enumerate_forests;
    use crate::rational::q;

    fn f(s: &str) -> Forest {
        s.parse().unwrap()
    }

    fn tensor(terms: &[(i64, &str, &str)]) -> TensorSum {
        let mut t = TensorSum::zero();
        for &(c, a, b) in terms {
            t.add_term(f(a), f(b), q(c));
        }
        t
    }

    fn sum(terms: &[(i64, &str)]) -> ForestSum {
        let mut s = ForestSum::zero();
        for &(c, a) in terms {
            s.add_term(f(a), q(c));
        }
        s
    }

    #[test]
    fn coproduct_examples() {
        assert_eq!(coproduct(&f("[]")), tensor(&[(1, "[]", "I"), (1, "I", "[]")]));
        assert_eq!(
            coproduct(&f("[]*[]")),
            tensor(&[(1, "[]*[]", "I"), (2, "[]", "[]"), (1, "I", "[]*[]")])
        );
        assert_eq!(
            coproduct(&f("[[]]")),
            tensor(&[(1, "[[]]", "I"), (1, "[]", "[]"), (1, "I", "[[]]")])
        );
        assert_eq!(
            coproduct(&f("[[][]]")),
            tensor(&[(1, "[[][]]", "I"), (1, "[]*[]", "[]"), (2, "[]", "[[]]"), (1, "I", "[[][]]")])
        );
        assert_eq!(coproduct(&Forest::unit()), tensor(&[(1, "I", "I")]));
    }

    #[test]
    fn coproduct_grading() {
        for n in 0..=5 {
            for g in enumerate_forests(n) {
                let d = coproduct(&g);
                for (a, b, _) in d.iter() {
                    assert_eq!(a.degree() + b.degree(), n);
                }
                if n > 0 {
                    assert!(d.coeff(&g, &Forest::unit()) >= q(1));
                    assert!(d.coeff(&Forest::unit(), &g) >= q(1));
                }
            }
        }
    }

    #[test]
    fn counit_examples() {
        assert_eq!(counit(&sum(&[(1, "I")])), q(1));
        assert_eq!(counit(&sum(&[(1, "[]")])), q(0));
        assert_eq!(counit(&sum(&[(3, "I"), (-2, "[]*[]")])), q(3));
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(antipode(&Forest::unit()), sum(&[(1, "I")]));
        assert_eq!(antipode(&f("[]")), sum(&[(-1, "[]")]));
        assert_eq!(antipode(&f("[[]]")), sum(&[(-1, "[[]]"), (1, "[]*[]")]));
        assert_eq!(antipode(&f("[]*[]")), sum(&[(1, "[]*[]")]));
    }

    #[test]
    fn antipode_is_multiplicative() {
        for n in 1..=4 {
            for g in enumerate_forests(n) {
                let mut prod = ForestSum::from_forest(Forest::unit());
                for t in g.trees() {
                    prod = prod.mul(&antipode(&Forest::single(t.clone())));
                }
                assert_eq!(antipode(&g), prod, "{g}");
            }
        }
    }

    #[test]
    fn natural_growth_examples() {
        assert_eq!(natural_growth(&sum(&[(1, "I")])), sum(&[(1, "[]")]));
        assert_eq!(natural_growth(&sum(&[(1, "[[]]")])), sum(&[(1, "[[][]]"), (1, "[[[]]]")]));
        // Leibniz on a product of two leaves
        assert_eq!(natural_growth(&sum(&[(1, "[]*[]")])), sum(&[(2, "[]*[[]]")]));
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta_k(0), sum(&[(1, "I")]));
        assert_eq!(delta_k(1), sum(&[(1, "[]")]));
        assert_eq!(delta_k(2), sum(&[(1, "[[]]")]));
        assert_eq!(delta_k(3), sum(&[(1, "[[[]]]"), (1, "[[][]]")]));
        let d4 = delta_k(4);
        assert_eq!(
            d4,
            sum(&[(3, "[[][[]]]"), (1, "[[][][]]"), (1, "[[[][]]]"), (1, "[[[[]]]]")])
        );
        let mut fact = 1i64;
        for k in 1..=6 {
            if k > 1 {
                fact *= k as i64 - 1;
            }
            let d = delta_k(k);
            let total: Q = d.iter().map(|(_, c)| c.clone()).sum();
            assert_eq!(total, q(fact), "k = {k}");
            assert_eq!(d.homogeneous(k), d);
        }
    }

    #[test]
    fn serialization_is_deterministic() {
        let s = sum(&[(1, "[[]]"), (-1, "[]*[]")]);
        assert_eq!(
            s.to_pairs(),
            vec![("-1/1".to_string(), "[]*[]".to_string()), ("1/1".to_string(), "[[]]".to_string())]
        );
        assert_eq!(s.to_string(), "-[]*[] + [[]]");
    }

    fn up_to(n: usize) -> Vec<Forest> {
        (0..=n).flat_map(enumerate_forests).collect()
    }

    #[test]
    fn coproduct_is_multiplicative() {
        let all = up_to(4);
        for a in &all {
            for b in all.iter().filter(|b| a.degree() + b.degree() <= 5) {
                assert_eq!(coproduct(&a.product(b)), coproduct(a).mul(&coproduct(b)), "{a} {b}");
            }
        }
    }

    #[test]
    fn coassociative() {
        type Triple = BTreeMap<(Forest, Forest, Forest), Q>;
        for g in up_to(4) {
            let (mut left, mut right) = (Triple::new(), Triple::new());
            for (a, b, c) in coproduct(&g).iter() {
                for (a1, a2, d) in coproduct(a).iter() {
                    add_into(&mut left, (a1.clone(), a2.clone(), b.clone()), c * d);
                }
                for (b1, b2, d) in coproduct(b).iter() {
                    add_into(&mut right, (a.clone(), b1.clone(), b2.clone()), c * d);
                }
            }
            assert_eq!(left, right, "{g}");
        }
    }

    #[test]
    fn counit_and_antipode_axioms() {
        for g in up_to(4) {
            let d = coproduct(&g);
            let id = ForestSum::from_forest(g.clone());
            let mut left = ForestSum::zero();
            let mut right = ForestSum::zero();
            for (a, b, c) in d.iter() {
                left.add_assign(&ForestSum::from_forest(b.clone()).scale(&(c * counit(&ForestSum::from_forest(a.clone())))));
                right.add_assign(&ForestSum::from_forest(a.clone()).scale(&(c * counit(&ForestSum::from_forest(b.clone())))));
            }
            assert_eq!(left, id);
            assert_eq!(right, id);

            let unit = if g.is_unit() { ForestSum::from_forest(Forest::unit()) } else { ForestSum::zero() };
            let mut s_id = ForestSum::zero();
            let mut id_s = ForestSum::zero();
            for (a, b, c) in d.iter() {
                s_id.add_assign(&antipode(a).mul(&ForestSum::from_forest(b.clone())).scale(c));
                id_s.add_assign(&ForestSum::from_forest(a.clone()).mul(&antipode(b)).scale(c));
            }
            assert_eq!(s_id, unit, "{g}");
            assert_eq!(id_s, unit, "{g}");
        }
    }
}
