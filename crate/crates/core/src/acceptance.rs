//! The end-to-end acceptance criteria, each with a wall-clock budget.
//!
//! Shared by the `acceptance` test target and the `selftest` subcommand.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::forest::{b_plus, enumerate_forests, forests_up_to, Forest, Tree};
use crate::hopf::{antipode, counit, delta_k, multiply, ForestSum, TensorSum};
use crate::mzvnum::{zeta_index_direct, Fixed, MzvEvaluator, PrecisionContext};
use crate::rational::{q, Q};
use crate::stuffle::{corollary_check, duality_containment_test, stuffle, KawashimaSpace};
use crate::treemap::{PhiOp, TreeMaps};
use crate::words::{Letter, MzvIndex, Poly, Word};

pub type CoproductFn = fn(&Forest) -> TensorSum;

/// Knobs for a run of the suite.
#[derive(Clone, Copy)]
pub struct Options {
    /// The coproduct under test; swapped out for fault injection.
    pub coproduct: CoproductFn,
    pub ctx: PrecisionContext,
    pub tolerance: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options { coproduct: crate::hopf::coproduct, ctx: PrecisionContext::default(), tolerance: 1e-25 }
    }
}

/// `(id, name, budget in seconds)`.
pub const CRITERIA: [(u8, &str, u64); 13] = [
    (1, "forest enumeration counts", 1),
    (2, "coproduct examples and axioms", 5),
    (3, "antipode examples and axiom", 5),
    (4, "natural growth", 2),
    (5, "letter images, f(z) = f(1) = 0", 5),
    (6, "tree map properties (a) (b) (e) (f)", 60),
    (7, "phi recursion anchors", 5),
    (8, "stuffle product", 10),
    (9, "Kawashima membership of tree-map images", 600),
    (10, "conjugation f chi_x = chi_x H_w", 60),
    (11, "duality containment", 60),
    (12, "numeric kernel", 300),
    (13, "numeric sanity", 60),
];

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionResult {
    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    pub fn ok(&self) -> bool {
        self.passed && self.within_budget()
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok() { "PASS" } else { "FAIL" };
        let over = if self.within_budget() { "" } else { " OVER BUDGET" };
        write!(
            f,
            "{status} {:>2} {:<42} {:>8.2}s / {}s{over}  {}",
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn forest(s: &str) -> Forest {
    s.parse().expect("valid forest literal")
}

fn poly(terms: &[(i64, &str)]) -> Poly {
    Poly::from_terms(terms.iter().copied())
}

pub fn run(id: u8, opts: &Options) -> CriterionResult {
    let (_, name, budget) = CRITERIA[(id - 1) as usize];
    let start = Instant::now();
    let outcome = match id {
        1 => enumeration(),
        2 => coproduct_checks(opts.coproduct),
        3 => antipode_checks(),
        4 => growth(),
        5 => base_cases(),
        6 => theorem_two(),
        7 => phi_anchors(),
        8 => stuffle_checks(),
        9 => kawashima_images(),
        10 => conjugation(),
        11 => duality(),
        12 => numeric_kernel(opts),
        13 => numeric_sanity(opts),
        _ => Err(format!("no criterion {id}")),
    };
    let elapsed = start.elapsed();
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult { id, name, passed, detail, elapsed, budget: Duration::from_secs(budget) }
}

pub fn run_all(opts: &Options) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|(id, _, _)| run(*id, opts)).collect()
}

// ---------------------------------------------------------------- 1

/// Distinct unlabeled rooted trees on `n` nodes, by brute force over
/// parent arrays and AHU canonical strings.
pub fn count_trees_by_parent_arrays(n: usize) -> usize {
    fn ahu(v: usize, kids: &[Vec<usize>]) -> String {
        let mut parts: Vec<String> = kids[v].iter().map(|&c| ahu(c, kids)).collect();
        parts.sort();
        format!("({})", parts.concat())
    }
    if n == 0 {
        return 0;
    }
    let mut seen = BTreeSet::new();
    let mut parent = vec![0usize; n];
    loop {
        let mut kids = vec![Vec::new(); n];
        for i in 1..n {
            kids[parent[i]].push(i);
        }
        seen.insert(ahu(0, &kids));
        // odometer over parent[i] ∈ 0..i
        let mut i = n - 1;
        loop {
            if i == 0 {
                return seen.len();
            }
            parent[i] += 1;
            if parent[i] < i {
                break;
            }
            parent[i] = 0;
            i -= 1;
        }
    }
}

fn enumeration() -> Check {
    let expected = [1usize, 2, 4, 9, 20, 48];
    let mut counts = Vec::new();
    for (n, &want) in (1..=6).zip(&expected) {
        let forests = enumerate_forests(n);
        let oracle = count_trees_by_parent_arrays(n + 1);
        let grafted: BTreeSet<Tree> = forests.iter().map(b_plus).collect();
        ensure(forests.len() == want && oracle == want && grafted.len() == want, || {
            format!("degree {n}: {} forests, {} grafted, oracle {oracle}, want {want}", forests.len(), grafted.len())
        })?;
        counts.push(forests.len().to_string());
    }
    Ok(format!("counts {}", counts.join(",")))
}

// ---------------------------------------------------------------- 2

fn tensor(terms: &[(i64, &str, &str)]) -> TensorSum {
    let mut t = TensorSum::zero();
    for &(c, a, b) in terms {
        t.add_term(forest(a), forest(b), q(c));
    }
    t
}

type Triple = BTreeMap<(Forest, Forest, Forest), Q>;

fn add3(m: &mut Triple, k: (Forest, Forest, Forest), c: Q) {
    let e = m.entry(k.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        m.remove(&k);
    }
}

/// `(Δ ⊗ id)Δ(f)` and `(id ⊗ Δ)Δ(f)`.
pub fn coassociativity_sides(cop: CoproductFn, f: &Forest) -> (Triple, Triple) {
    let mut left = Triple::new();
    let mut right = Triple::new();
    for (a, b, c) in cop(f).iter() {
        for (a1, a2, d) in cop(a).iter() {
            add3(&mut left, (a1.clone(), a2.clone(), b.clone()), c * d);
        }
        for (b1, b2, d) in cop(b).iter() {
            add3(&mut right, (a.clone(), b1.clone(), b2.clone()), c * d);
        }
    }
    (left, right)
}

pub fn coassociative(cop: CoproductFn, max_degree: usize) -> bool {
    (0..=max_degree).flat_map(enumerate_forests).all(|f| {
        let (l, r) = coassociativity_sides(cop, &f);
        l == r
    })
}

/// `(ε ⊗ id)Δ = id = (id ⊗ ε)Δ`.
pub fn counital(cop: CoproductFn, max_degree: usize) -> bool {
    (0..=max_degree).flat_map(enumerate_forests).all(|f| {
        let mut left = ForestSum::zero();
        let mut right = ForestSum::zero();
        for (a, b, c) in cop(&f).iter() {
            if a.is_unit() {
                left.add_term(b.clone(), c.clone());
            }
            if b.is_unit() {
                right.add_term(a.clone(), c.clone());
            }
        }
        let id = ForestSum::from_forest(f.clone());
        left == id && right == id
    })
}

/// The coproduct with the sign of the `t ⊗ 𝕀` term flipped in the
/// grafting recursion. Used to check that the suite catches a broken Δ.
pub fn corrupted_coproduct(f: &Forest) -> TensorSum {
    let mut out = TensorSum::zero();
    out.add_term(Forest::unit(), Forest::unit(), Q::one());
    for t in f.trees() {
        let mut tc = TensorSum::zero();
        tc.add_term(Forest::single(t.clone()), Forest::unit(), -Q::one());
        for (a, b, c) in corrupted_coproduct(&t.b_minus()).iter() {
            tc.add_term(a.clone(), Forest::single(b_plus(b)), c.clone());
        }
        out = out.mul(&tc);
    }
    out
}

fn coproduct_checks(cop: CoproductFn) -> Check {
    let examples = [
        ("[]", tensor(&[(1, "[]", "I"), (1, "I", "[]")])),
        ("[]*[]", tensor(&[(1, "[]*[]", "I"), (2, "[]", "[]"), (1, "I", "[]*[]")])),
        ("[[]]", tensor(&[(1, "[[]]", "I"), (1, "[]", "[]"), (1, "I", "[[]]")])),
        ("[[][]]", tensor(&[(1, "[[][]]", "I"), (1, "[]*[]", "[]"), (2, "[]", "[[]]"), (1, "I", "[[][]]")])),
    ];
    for (f, want) in &examples {
        let got = cop(&forest(f));
        ensure(&got == want, || format!("Δ({f}) = {got}, want {want}"))?;
    }
    ensure(coassociative(cop, 4), || "coassociativity fails on degree ≤ 4".into())?;
    ensure(counital(cop, 4), || "counit axioms fail on degree ≤ 4".into())?;
    let n: usize = (0..=4).map(|d| enumerate_forests(d).len()).sum();
    Ok(format!("4 examples; coassociative and counital on {n} forests"))
}

// ---------------------------------------------------------------- 3

fn fsum(terms: &[(i64, &str)]) -> ForestSum {
    let mut s = ForestSum::zero();
    for &(c, f) in terms {
        s.add_term(forest(f), q(c));
    }
    s
}

fn antipode_checks() -> Check {
    let examples = [
        ("I", fsum(&[(1, "I")])),
        ("[]", fsum(&[(-1, "[]")])),
        ("[[]]", fsum(&[(-1, "[[]]"), (1, "[]*[]")])),
        ("[]*[]", fsum(&[(1, "[]*[]")])),
    ];
    for (f, want) in &examples {
        let got = antipode(&forest(f));
        ensure(&got == want, || format!("S({f}) = {got}, want {want}"))?;
    }
    let mut n = 0;
    for f in (0..=4).flat_map(enumerate_forests) {
        let cop = crate::hopf::coproduct(&f);
        let unit = ForestSum::term(counit(&ForestSum::from_forest(f.clone())), Forest::unit());
        let mut left = TensorSum::zero();
        let mut right = TensorSum::zero();
        for (a, b, c) in cop.iter() {
            for (sa, d) in antipode(a).iter() {
                left.add_term(sa.clone(), b.clone(), c * d);
            }
            for (sb, d) in antipode(b).iter() {
                right.add_term(a.clone(), sb.clone(), c * d);
            }
        }
        ensure(multiply(&left) == unit && multiply(&right) == unit, || format!("antipode axiom fails on {f}"))?;
        n += 1;
    }
    Ok(format!("4 examples; m(S⊗id)Δ = m(id⊗S)Δ = 𝕀ε on {n} forests"))
}

// ---------------------------------------------------------------- 4

fn growth() -> Check {
    let want = [
        (1, fsum(&[(1, "[]")])),
        (2, fsum(&[(1, "[[]]")])),
        (3, fsum(&[(1, "[[][]]"), (1, "[[[]]]")])),
        (4, fsum(&[(3, "[[][[]]]"), (1, "[[][][]]"), (1, "[[[][]]]"), (1, "[[[[]]]]")])),
    ];
    for (k, w) in &want {
        let got = delta_k(*k);
        ensure(&got == w, || format!("δ_{k} = {got}, want {w}"))?;
    }
    let mut coeffs: Vec<Q> = delta_k(4).iter().map(|(_, c)| c.clone()).collect();
    coeffs.sort();
    ensure(coeffs == [q(1), q(1), q(1), q(3)], || "δ_4 coefficient multiset".into())?;
    let mut factorial = 1i64;
    for k in 1..=6usize {
        if k > 1 {
            factorial *= k as i64 - 1;
        }
        let s: Q = delta_k(k).iter().map(|(_, c)| c.clone()).sum();
        ensure(s == q(factorial), || format!("Σ coeffs δ_{k} = {s}, want {factorial}"))?;
    }
    Ok("δ_1..δ_4 exact; Σ coeffs δ_k = (k-1)! for k ≤ 6".into())
}

// ---------------------------------------------------------------- 5

fn base_cases() -> Check {
    let e = TreeMaps::global();
    let dot = forest("[]");
    ensure(e.letter_image(&dot, Letter::X) == poly(&[(1, "xy")]), || "•(x)".into())?;
    ensure(e.letter_image(&dot, Letter::Y) == poly(&[(-1, "xy")]), || "•(y)".into())?;
    let l2 = e.letter_image(&forest("[[]]"), Letter::X);
    ensure(l2 == poly(&[(1, "xxy"), (2, "xyy")]), || format!("ladder2(x) = {l2}"))?;
    let forests = forests_up_to(4);
    for f in &forests {
        let fz = e.apply(f, &Poly::z());
        let f1 = e.apply(f, &Poly::one());
        ensure(fz.is_zero() && f1.is_zero(), || format!("{f}(z) = {fz}, {f}(1) = {f1}"))?;
    }
    Ok(format!("letter images exact; f(z) = f(1) = 0 on {} forests", forests.len()))
}

// ---------------------------------------------------------------- 6

fn words_up_to(n: usize) -> Vec<Word> {
    (0..=n).flat_map(Word::all_of_weight).collect()
}

fn theorem_two() -> Check {
    let e = TreeMaps::global();
    let forests = forests_up_to(3);
    let words = words_up_to(5);
    for f in &forests {
        let phi = e.phi(f);
        for w in &words {
            // (a) ψ_f = R_y φ_f R_x
            let lhs = e.psi_word(f, w);
            let rhs = e.apply_phi(&phi, &Poly::from_word(w.push(Letter::X))).concat(&Poly::y());
            ensure(lhs == rhs, || format!("(a) fails for {f} at {w}"))?;
        }
        // (b) f(x), f(y), f(𝔥⁰) ⊂ x𝔥y
        let sources = [Word::x(), Word::y()].into_iter().chain((2..=5).flat_map(Word::admissible_of_weight));
        for w in sources {
            let img = e.apply_word(f, &w);
            ensure(img.in_x_h_y(), || format!("(b) fails: {f}({w}) = {img}"))?;
        }
        // (f) comultiplicativity on pairs of total weight ≤ 5
        for v in &words {
            for w in words.iter().filter(|w| w.weight() + v.weight() <= 5) {
                ensure(e.comultiplicativity_test(f, v, w), || format!("(f) fails for {f} at ({v}, {w})"))?;
            }
        }
    }
    // (e) all pairs of total degree ≤ 5
    let mut pairs = 0;
    let all = forests_up_to(4);
    for (i, f) in all.iter().enumerate() {
        for g in all[i + 1..].iter().filter(|g| g.degree() + f.degree() <= 5) {
            ensure(e.commutator_test(f, g, 5), || format!("(e) fails for [{f}, {g}]"))?;
            pairs += 1;
        }
    }
    Ok(format!("{} forests × {} words; {pairs} commuting pairs", forests.len(), words.len()))
}

// ---------------------------------------------------------------- 7

fn phi_anchors() -> Check {
    let e = TreeMaps::global();
    let dot = forest("[]");
    let two_dots = PhiOp::forest(dot.clone()).scale(&q(2)).sub(&PhiOp::rz());
    let ladder = PhiOp::forest(dot.clone()).add(&PhiOp::rz());
    let cases = [("[]*[]", two_dots, 2i64, -1i64), ("[[]]", ladder, 1, 1)];
    let words = words_up_to(6);
    for (f, want, a, b) in &cases {
        let got = e.phi(&forest(f));
        ensure(&got == want, || format!("φ_{f} = {got}, want {want}"))?;
        for w in &words {
            let p = Poly::from_word(*w);
            let lhs = e.apply_phi(&got, &p);
            let rhs = e.apply(&dot, &p).scale(&q(*a)) + p.concat(&Poly::z()).scale(&q(*b));
            ensure(lhs == rhs, || format!("φ_{f}({w}) = {lhs}, want {rhs}"))?;
        }
    }
    Ok(format!("φ_•• = 2• - R_z and φ_ladder2 = • + R_z on {} words", words.len()))
}

// ---------------------------------------------------------------- 8

fn random_h1(rng: &mut StdRng, max_weight: usize) -> Poly {
    let mut p = Poly::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let n = rng.gen_range(0..=max_weight);
        let w = if n == 0 {
            Word::empty()
        } else {
            let mut w = Word::empty();
            for _ in 0..n - 1 {
                w = w.push(if rng.gen_bool(0.5) { Letter::X } else { Letter::Y });
            }
            w.push(Letter::Y)
        };
        let c = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        p.add_term(w, q(c));
    }
    p
}

fn stuffle_checks() -> Check {
    let z1 = Poly::y();
    let sq = stuffle(&z1, &z1).map_err(|e| e.to_string())?;
    ensure(sq == poly(&[(2, "yy"), (1, "xy")]), || format!("z1*z1 = {sq}"))?;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for i in 0..200 {
        let (a, b, c) = (random_h1(&mut rng, 6), random_h1(&mut rng, 6), random_h1(&mut rng, 6));
        let st = |u: &Poly, v: &Poly| stuffle(u, v).map_err(|e| e.to_string());
        ensure(st(&a, &b)? == st(&b, &a)?, || format!("triple {i}: not commutative for {a}, {b}"))?;
        let left = st(&st(&a, &b)?, &c)?;
        let right = st(&a, &st(&b, &c)?)?;
        ensure(left == right, || format!("triple {i}: not associative"))?;
    }
    Ok("z1*z1 = 2z1z1 + z2; 200 random triples commutative and associative".into())
}

// ---------------------------------------------------------------- 9

fn kawashima_images() -> Check {
    let e = TreeMaps::global();
    let mut checked = 0;
    let mut dims = Vec::new();
    for n in 3..=10 {
        dims.push(format!("{n}:{}", KawashimaSpace::cached(n).dimension()));
    }
    for f in forests_up_to(3) {
        for w in (2..=7).flat_map(Word::admissible_of_weight) {
            let img = e.apply_word(&f, &w);
            let space = KawashimaSpace::cached(w.weight() + f.degree());
            let m = space.member(&img).map_err(|err| err.to_string())?;
            ensure(m.is_member(), || format!("{f}({w}) is not in the Kawashima space"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} images certified; dimensions {}", dims.join(" ")))
}

// ---------------------------------------------------------------- 10

fn conjugation() -> Check {
    let e = TreeMaps::global();
    let forests = forests_up_to(3);
    for f in &forests {
        let ok = corollary_check(e, f, 5).map_err(|err| err.to_string())?;
        ensure(ok, || format!("f χ_x ≠ χ_x H_w for {f}"))?;
    }
    Ok(format!("{} forests, words of 𝔥y up to weight 5", forests.len()))
}

// ---------------------------------------------------------------- 11

fn duality() -> Check {
    for n in 2..=8 {
        ensure(duality_containment_test(n), || format!("(1-τ)(w) not contained at weight {n}"))?;
    }
    let count: usize = (2..=8).map(|n| Word::admissible_of_weight(n).count()).sum();
    Ok(format!("{count} admissible words up to weight 8"))
}

// ---------------------------------------------------------------- 12

fn numeric_kernel(opts: &Options) -> Check {
    let e = TreeMaps::global();
    let ev = MzvEvaluator::new(opts.ctx);
    let mut worst = 0.0f64;
    let mut worst_bound = 0.0f64;
    let mut n = 0;
    for f in forests_up_to(3) {
        for w in (2..=6).flat_map(Word::admissible_of_weight) {
            let chk = ev.verify_kernel(e, &f, &w, opts.tolerance).map_err(|err| err.to_string())?;
            ensure(chk.passed(), || {
                format!("Z({f}({w})) = {} ± {:.1e}: {:?}", chk.residual.to_sci(), chk.residual.error_bound, chk.verdict)
            })?;
            worst = worst.max(chk.residual.value.abs_f64());
            worst_bound = worst_bound.max(chk.residual.error_bound);
            n += 1;
        }
    }
    let euler = ev.zeta_poly(&poly(&[(1, "xyy"), (-1, "xxy")])).map_err(|err| err.to_string())?;
    let ladder = ev
        .zeta_poly(&poly(&[(-1, "xxxy"), (-1, "xxyy"), (2, "xyyy"), (-1, "xyxy")]))
        .map_err(|err| err.to_string())?;
    for (name, z) in [("ζ(2,1) - ζ(3)", &euler), ("ladder2(xy)", &ladder)] {
        ensure(z.value.abs_f64() < opts.tolerance && z.error_bound < opts.tolerance, || {
            format!("{name} = {} ± {:.1e}", z.to_sci(), z.error_bound)
        })?;
    }
    Ok(format!("{n} relations; max |residual| {worst:.1e}, max bound {worst_bound:.1e}"))
}

// ---------------------------------------------------------------- 13

/// π to 50 decimal places.
pub const PI_50: &str = "3.14159265358979323846264338327950288419716939937510";

fn numeric_sanity(opts: &Options) -> Check {
    let ev = MzvEvaluator::new(opts.ctx);
    let z2 = ev.zeta_index(&"2".parse().expect("index")).map_err(|err| err.to_string())?;
    let bits = z2.value.bits();
    let pi = Fixed::from_decimal(PI_50, bits).map_err(|err| err.to_string())?;
    let pi2_6 = Fixed::from_raw(((pi.raw() * pi.raw()) >> bits) / 6, bits);
    let z2_30 = z2.value.to_decimal(30);
    let closed_30 = pi2_6.to_decimal(30);
    ensure(z2_30 == closed_30, || format!("ζ(2) = {z2_30}, π²/6 = {closed_30}"))?;
    let terms = 1_000_000;
    let mut n = 0;
    let mut widest = 0.0f64;
    for k in 2..=6 {
        for i in MzvIndex::admissible_of_weight(k) {
            let a = ev.zeta_index(&i).map_err(|err| err.to_string())?;
            let b = zeta_index_direct(&i, terms).map_err(|err| err.to_string())?;
            ensure(b.agrees_with(&a), || format!("ζ({i}): {} vs {} ± {:.1e}", a.value, b.value, b.error_bound))?;
            widest = widest.max(b.error_bound);
            n += 1;
        }
    }
    Ok(format!("ζ(2) = {z2_30}; {n} indices agree (direct-sum bound ≤ {widest:.1e})"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parent_array_oracle() {
        let counts: Vec<usize> = (1..=7).map(count_trees_by_parent_arrays).collect();
        assert_eq!(counts, [1, 1, 2, 4, 9, 20, 48]);
    }

    #[test]
    fn fault_is_detected() {
        assert!(coassociative(crate::hopf::coproduct, 3));
        assert!(!coassociative(corrupted_coproduct, 3));
        let opts = Options { coproduct: corrupted_coproduct, ..Options::default() };
        let r = run(2, &opts);
        assert!(!r.passed);
        assert!(r.to_string().starts_with("FAIL  2"));
    }

    #[test]
    fn fast_criteria_pass() {
        let opts = Options::default();
        for id in [1, 2, 3, 4, 5, 7] {
            let r = run(id, &opts);
            assert!(r.passed, "{r}");
        }
    }
}
