//! Rigorous numerical evaluation of the map `Z : 𝔥⁰ → ℝ`.
//!
//! # Primary path
//!
//! For an admissible word `w = a₁⋯a_n`, `ζ(w)` is the iterated integral of
//! `ω_{a₁}⋯ω_{a_n}` over `1 > t₁ > ⋯ > t_n > 0` with `ω_x = dt/t` and
//! `ω_y = dt/(1-t)`. Splitting the simplex by how many variables exceed
//! `1/2` and substituting `t ↦ 1 - t` on the upper block gives
//!
//! ```text
//! ζ(w) = Σ_j J(τ(a₁⋯a_j)) · J(a_{j+1}⋯a_n)
//! ```
//!
//! where `J(z_{k₁}⋯z_{k_r}) = Σ_{m₁>⋯>m_r>0} 2^{-m₁} / (m₁^{k₁}⋯m_r^{k_r})`
//! is a multiple polylogarithm at `1/2`. Each `J` converges geometrically
//! and is summed in binary fixed point with every rounding counted.
//!
//! # Oracle path
//!
//! [`zeta_index_direct`] sums the defining series directly in `f64` with an
//! integral-comparison tail bound. It converges only polynomially, so its
//! error bars are wide, but it shares no algorithm with the primary path.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::treemap::TreeMaps;
use crate::words::{MzvIndex, Poly, Word};

/// Extra binary digits carried beyond the requested decimal precision.
pub const GUARD_BITS: u32 = 40;

/// Working precision and truncation depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    pub working_digits: u32,
    pub series_terms: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { working_digits: 40, series_terms: 160 }
    }
}

impl PrecisionContext {
    pub fn new(working_digits: u32, series_terms: u32) -> Self {
        assert!(working_digits > 0 && series_terms > 0);
        PrecisionContext { working_digits, series_terms }
    }

    /// Enough terms for the truncation error to sit below the working precision.
    pub fn for_digits(working_digits: u32) -> Self {
        PrecisionContext::new(working_digits, (4 * working_digits).max(32))
    }

    /// Fractional bits of the fixed-point representation.
    pub fn bits(&self) -> u32 {
        (self.working_digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }
}

/// A binary fixed-point number `raw / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    raw: BigInt,
    bits: u32,
}

impl Fixed {
    pub fn zero(bits: u32) -> Self {
        Fixed { raw: BigInt::zero(), bits }
    }

    pub fn one(bits: u32) -> Self {
        Fixed { raw: BigInt::one() << bits, bits }
    }

    pub fn from_raw(raw: BigInt, bits: u32) -> Self {
        Fixed { raw, bits }
    }

    pub fn raw(&self) -> &BigInt {
        &self.raw
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Parses a plain decimal literal such as `"-3.1415"`; rounds toward −∞.
    pub fn from_decimal(s: &str, bits: u32) -> Result<Self> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        let digits = format!("{int}{frac}");
        let n: BigInt = digits.parse().map_err(|_| Error::parse(0, format!("bad decimal {s:?}")))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let mut raw = (n << bits).div_floor(&scale);
        if neg {
            raw = -raw;
        }
        Ok(Fixed { raw, bits })
    }

    pub fn to_f64(&self) -> f64 {
        // split to keep the conversion finite for large `bits`
        let shift = self.bits.saturating_sub(900);
        let reduced = &self.raw >> shift;
        reduced.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-((self.bits - shift) as i32))
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Decimal expansion rounded to `digits` places after the point.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = &self.raw * scale;
        let half = BigInt::one() << (self.bits.max(1) - 1);
        let q = (scaled.abs() + half) >> self.bits;
        let s = q.to_string();
        let s = if s.len() <= digits as usize { format!("{}{}", "0".repeat(digits as usize + 1 - s.len()), s) } else { s };
        let (i, f) = s.split_at(s.len() - digits as usize);
        let sign = if self.raw.sign() == Sign::Minus && q.sign() != Sign::NoSign { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{i}")
        } else {
            format!("{sign}{i}.{f}")
        }
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.bits.saturating_sub(GUARD_BITS)) as f64 / std::f64::consts::LOG2_10).floor() as u32;
        f.write_str(&self.to_decimal(digits))
    }
}

/// A value with a rigorous absolute error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct ZValue {
    pub value: Fixed,
    pub error_bound: f64,
}

impl ZValue {
    pub fn exact_one(bits: u32) -> Self {
        ZValue { value: Fixed::one(bits), error_bound: 0.0 }
    }

    /// Whether `|self - other|` is within the sum of both error bounds.
    pub fn agrees_with(&self, other: &ZValue) -> bool {
        let diff = Fixed { raw: &self.value.raw - &other.value.raw, bits: self.value.bits };
        diff.abs_f64() <= up(self.error_bound + other.error_bound)
    }

    /// Short scientific rendering of the value, for residual reporting.
    pub fn to_sci(&self) -> String {
        format!("{:.3e}", self.value.to_f64())
    }
}

// Nudges a nonnegative f64 bound upward to absorb its own rounding.
fn up(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    x * (1.0 + 1e-12) + f64::MIN_POSITIVE
}

fn ulp(bits: u32) -> f64 {
    2f64.powi(-(bits as i32))
}

/// `Σ_{m>N} 2^{-m} (1 + ln m)^p`, bounded by a geometric series.
fn half_power_tail(n: u32, p: usize) -> f64 {
    let term = |m: f64| 0.5f64.powf(m) * (1.0 + m.ln()).powi(p as i32);
    let first = term(n as f64 + 1.0);
    // ratio of consecutive terms is decreasing in m
    let ratio = 0.5 * ((1.0 + (n as f64 + 2.0).ln()) / (1.0 + (n as f64 + 1.0).ln())).powi(p as i32);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    up(first / (1.0 - ratio))
}

#[derive(Clone, Debug)]
struct Approx {
    raw: BigInt,
    /// Error in units of `2^-bits`, excluding truncation.
    ulps: f64,
    tail: f64,
}

impl Approx {
    fn error(&self, bits: u32) -> f64 {
        up(self.ulps * ulp(bits) + self.tail)
    }
}

/// Evaluator for `Z` with a shared memo; safe to use from several threads.
pub struct MzvEvaluator {
    ctx: PrecisionContext,
    bits: u32,
    polylog_half: RwLock<HashMap<Word, Approx>>,
    zetas: RwLock<HashMap<Word, ZValue>>,
}

impl MzvEvaluator {
    pub fn new(ctx: PrecisionContext) -> Self {
        MzvEvaluator { ctx, bits: ctx.bits(), polylog_half: Default::default(), zetas: Default::default() }
    }

    pub fn context(&self) -> PrecisionContext {
        self.ctx
    }

    /// `J(u)`: the multiple polylogarithm of the word `u ∈ 𝔥¹` at `1/2`.
    fn polylog_half(&self, u: &Word) -> Approx {
        if u.is_empty() {
            return Approx { raw: BigInt::one() << self.bits, ulps: 0.0, tail: 0.0 };
        }
        if let Some(a) = self.polylog_half.read().unwrap().get(u) {
            return a.clone();
        }
        let ks: Vec<u32> = MzvIndex::from_word(u).expect("word ends in y").parts().to_vec();
        let r = ks.len();
        let n = self.ctx.series_terms;
        let one = BigInt::one() << self.bits;
        // partial[i] = Σ_{M ≥ m_i > m_{i+1} > …} over the inner levels i..r
        let mut partial = vec![BigInt::zero(); r];
        for m in 1..=n {
            let mb = BigInt::from(m);
            for i in 0..r {
                let inner = if i + 1 == r { &one } else { &partial[i + 1] };
                if inner.is_zero() {
                    continue;
                }
                let mut term = inner.div_floor(&mb.pow(ks[i]));
                if i == 0 {
                    term >>= m;
                }
                partial[i] += term;
            }
        }
        // error bookkeeping in ulps, innermost level first
        let mut ulps = 0.0f64;
        for i in (0..r).rev() {
            let harmonic: f64 = (1..=n).map(|m| (m as f64).powi(-(ks[i] as i32))).sum();
            let rounding = if i == 0 { 2.0 * n as f64 } else { n as f64 };
            let propagated = if i == 0 { ulps * 0.5 * harmonic } else { ulps * harmonic };
            ulps = up(propagated + rounding);
        }
        let tail = half_power_tail(n, r - 1);
        let a = Approx { raw: partial.swap_remove(0), ulps, tail };
        self.polylog_half.write().unwrap().insert(*u, a.clone());
        a
    }

    /// `ζ` of an admissible word, by the split integral.
    pub fn zeta_word(&self, w: &Word) -> Result<ZValue> {
        if w.is_empty() {
            return Ok(ZValue::exact_one(self.bits));
        }
        if !w.is_admissible() {
            return Err(Error::domain(format!("word {w} is not in 𝔥⁰")));
        }
        if let Some(z) = self.zetas.read().unwrap().get(w) {
            return Ok(z.clone());
        }
        let bits = self.bits;
        let u = ulp(bits);
        let mut raw = BigInt::zero();
        let mut err = 0.0f64;
        for j in 0..=w.weight() {
            let (upper, lower) = w.split_at(j);
            let a = self.polylog_half(&upper.dual());
            let b = self.polylog_half(&lower);
            let prod = (&a.raw * &b.raw) >> bits;
            let (ea, eb) = (a.error(bits), b.error(bits));
            let (va, vb) = (a.raw.to_f64().unwrap_or(f64::INFINITY) * u, b.raw.to_f64().unwrap_or(f64::INFINITY) * u);
            err += (va.abs() + ea) * eb + (vb.abs() + eb) * ea + u;
            raw += prod;
        }
        let z = ZValue { value: Fixed { raw, bits }, error_bound: up(err) };
        self.zetas.write().unwrap().insert(*w, z.clone());
        Ok(z)
    }

    pub fn zeta_index(&self, i: &MzvIndex) -> Result<ZValue> {
        if !i.is_admissible() {
            return Err(Error::NotAdmissible(i.to_string()));
        }
        self.zeta_word(&i.to_word())
    }

    /// `Z(p)` for `p ∈ 𝔥⁰`.
    pub fn zeta_poly(&self, p: &Poly) -> Result<ZValue> {
        if let Some(w) = p.words().find(|w| !w.in_h0()) {
            return Err(Error::domain(format!("word {w} is not in 𝔥⁰")));
        }
        let bits = self.bits;
        let mut raw = BigInt::zero();
        let mut err = 0.0f64;
        for (w, c) in p.iter() {
            let z = self.zeta_word(w)?;
            let scaled = (&z.value.raw * c.numer()).div_floor(c.denom());
            let mag = c.abs().to_f64().unwrap_or(f64::INFINITY);
            err += up(mag * z.error_bound) + if c.is_integer() { 0.0 } else { ulp(bits) };
            raw += scaled;
        }
        Ok(ZValue { value: Fixed { raw, bits }, error_bound: up(err) })
    }

    /// Evaluates `Z(f(w))` and compares it with `tolerance`.
    pub fn verify_kernel(&self, engine: &TreeMaps, f: &Forest, w: &Word, tolerance: f64) -> Result<KernelCheck> {
        if f.is_unit() {
            return Err(Error::domain("kernel check needs a nonempty forest"));
        }
        if !w.is_admissible() {
            return Err(Error::domain(format!("word {w} is not admissible")));
        }
        let image = engine.apply(f, &Poly::from_word(*w));
        let residual = self.zeta_poly(&image)?;
        let verdict = if residual.error_bound >= tolerance {
            Verdict::Inconclusive
        } else if residual.value.abs_f64() < tolerance {
            Verdict::Vanishes
        } else {
            Verdict::NonZero
        };
        Ok(KernelCheck { verdict, residual })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Vanishes,
    NonZero,
    /// The error bound does not resolve the tolerance.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct KernelCheck {
    pub verdict: Verdict,
    pub residual: ZValue,
}

impl KernelCheck {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Vanishes
    }
}

pub fn zeta_index(i: &MzvIndex, ctx: PrecisionContext) -> Result<ZValue> {
    MzvEvaluator::new(ctx).zeta_index(i)
}

pub fn zeta_poly(p: &Poly, ctx: PrecisionContext) -> Result<ZValue> {
    MzvEvaluator::new(ctx).zeta_poly(p)
}

pub fn verify_kernel(f: &Forest, w: &Word, ctx: PrecisionContext, tolerance: f64) -> Result<KernelCheck> {
    MzvEvaluator::new(ctx).verify_kernel(TreeMaps::global(), f, w, tolerance)
}

/// Result of the direct nested summation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectValue {
    pub value: f64,
    pub error_bound: f64,
}

impl DirectValue {
    /// Whether the interval `value ± error_bound` meets `z`'s interval.
    pub fn agrees_with(&self, z: &ZValue) -> bool {
        (self.value - z.value.to_f64()).abs() <= up(self.error_bound + z.error_bound + 4.0 * f64::EPSILON * self.value.abs())
    }
}

/// `ζ(k₁,…,k_r)` by summing `m₁ ≤ terms` directly.
///
/// The tail is bounded by `∫_N^∞ (1 + ln t)^{r-1} t^{-k₁} dt / (r-1)!`,
/// using `Σ_{m>m₂>⋯} Π m_i^{-k_i} ≤ H_{m-1}^{r-1} / (r-1)!` for the inner sums.
pub fn zeta_index_direct(i: &MzvIndex, terms: u32) -> Result<DirectValue> {
    if !i.is_admissible() {
        return Err(Error::NotAdmissible(i.to_string()));
    }
    let ks = i.parts();
    let r = ks.len();
    let nf = terms as f64;
    assert!(nf.ln() + 1.0 > (r as f64 - 1.0) / ks[0] as f64, "too few terms for a monotone tail");
    let mut partial = vec![0.0f64; r];
    for m in 1..=terms {
        let mf = m as f64;
        for idx in 0..r {
            let inner = if idx + 1 == r { 1.0 } else { partial[idx + 1] };
            partial[idx] += inner / mf.powi(ks[idx] as i32);
        }
    }
    let value = partial[0];
    // tail: e^{-aL} Σ_j n!/(n-j)! (1+L)^{n-j} / a^{j+1}
    let a = ks[0] as f64 - 1.0;
    let l = nf.ln();
    let n = r - 1;
    let mut falling = 1.0;
    let mut tail = 0.0;
    for j in 0..=n {
        if j > 0 {
            falling *= (n - j + 1) as f64;
        }
        tail += falling * (1.0 + l).powi((n - j) as i32) / a.powi(j as i32 + 1);
    }
    tail *= (-a * l).exp() / (1..=n).map(|j| j as f64).product::<f64>();
    // every operation has relative error ≤ u on nonnegative data
    let ops = nf * (i.weight() as f64 + 3.0 * r as f64);
    let gamma = ops * f64::EPSILON / (1.0 - ops * f64::EPSILON);
    let rounding = gamma * (value + tail);
    Ok(DirectValue { value, error_bound: up(tail + rounding) })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI_50: &str = "3.14159265358979323846264338327950288419716939937510";
    const ZETA3_50: &str = "1.20205690315959428539973816151144999076498629234049";

    fn idx(s: &str) -> MzvIndex {
        s.parse().unwrap()
    }

    fn ev() -> MzvEvaluator {
        MzvEvaluator::new(PrecisionContext::default())
    }

    #[test]
    fn fixed_decimal_roundtrip() {
        let bits = 200;
        let x = Fixed::from_decimal("-1.25", bits).unwrap();
        assert_eq!(x.to_decimal(3), "-1.250");
        assert_eq!(Fixed::one(bits).to_decimal(0), "1");
        assert_eq!(Fixed::from_decimal("0.004", bits).unwrap().to_decimal(2), "0.00");
        assert!((x.to_f64() + 1.25).abs() < 1e-15);
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let e = ev();
        let z2 = e.zeta_index(&idx("2")).unwrap();
        let bits = z2.value.bits();
        let pi = Fixed::from_decimal(PI_50, bits).unwrap();
        let target = (pi.raw() * pi.raw()) >> bits;
        let target = target / BigInt::from(6);
        let diff = Fixed { raw: z2.value.raw() - target, bits };
        assert!(diff.abs_f64() < 1e-30, "{}", diff.to_f64());
        assert!(z2.to_sci().starts_with("1.645"));
        assert!(z2.value.to_decimal(10) == "1.6449340668");
    }

    #[test]
    fn zeta_three() {
        let z3 = ev().zeta_index(&idx("3")).unwrap();
        let want = Fixed::from_decimal(ZETA3_50, z3.value.bits()).unwrap();
        let diff = Fixed { raw: z3.value.raw() - want.raw(), bits: want.bits() };
        assert!(diff.abs_f64() < 1e-35);
        assert_eq!(z3.value.to_decimal(10), "1.2020569032");
    }

    #[test]
    fn euler_identity() {
        let e = ev();
        let a = e.zeta_index(&idx("2,1")).unwrap();
        let b = e.zeta_index(&idx("3")).unwrap();
        assert!(a.agrees_with(&b));
        let rel = e.zeta_poly(&Poly::from_terms([(1, "xyy"), (-1, "xxy")])).unwrap();
        assert!(rel.value.abs_f64() <= rel.error_bound);
        assert!(rel.error_bound < 1e-35);
    }

    #[test]
    fn z_of_one_is_exact() {
        let z = ev().zeta_poly(&Poly::one()).unwrap();
        assert_eq!(z.error_bound, 0.0);
        assert_eq!(z.value, Fixed::one(z.value.bits()));
    }

    #[test]
    fn domain_errors() {
        let e = ev();
        assert!(matches!(e.zeta_index(&idx("1,2")), Err(Error::NotAdmissible(_))));
        assert!(matches!(e.zeta_poly(&Poly::y()), Err(Error::Domain(_))));
        assert!(matches!(zeta_index_direct(&idx("1"), 1000), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn ladder_relation_vanishes() {
        // −ζ(4) − ζ(3,1) + 2ζ(2,1,1) − ζ(2,2)
        let p = Poly::from_terms([(-1, "xxxy"), (-1, "xxyy"), (2, "xyyy"), (-1, "xyxy")]);
        let z = ev().zeta_poly(&p).unwrap();
        assert!(z.value.abs_f64() < 1e-30);
    }

    #[test]
    fn kernel_checks() {
        let ctx = PrecisionContext::default();
        for (f, w) in [("[]", "xy"), ("[]*[]", "xy"), ("[[][]]", "xxy")] {
            let chk = verify_kernel(&f.parse().unwrap(), &w.parse().unwrap(), ctx, 1e-25).unwrap();
            assert!(chk.passed(), "{f} {w}: {:?}", chk.residual);
        }
        // a bound that cannot resolve the tolerance is reported as such
        let coarse = PrecisionContext::new(10, 40);
        let chk = verify_kernel(&"[]".parse().unwrap(), &"xy".parse().unwrap(), coarse, 1e-25).unwrap();
        assert_eq!(chk.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn error_bound_shrinks_with_terms() {
        let w: Word = "xxyxy".parse().unwrap();
        let mut last = f64::INFINITY;
        for terms in [40, 80, 120, 160, 200] {
            let e = MzvEvaluator::new(PrecisionContext::new(40, terms));
            let z = e.zeta_word(&w).unwrap();
            assert!(z.error_bound <= last);
            last = z.error_bound;
        }
        let digits = 40;
        assert!(last <= 10f64.powi(-(digits - 5)));
    }

    #[test]
    fn paths_agree_at_low_weight() {
        let e = ev();
        for n in 2..=5 {
            for i in MzvIndex::admissible_of_weight(n) {
                let a = e.zeta_index(&i).unwrap();
                let b = zeta_index_direct(&i, 20_000).unwrap();
                assert!(b.agrees_with(&a), "{i}: {} vs {} ± {}", a.value, b.value, b.error_bound);
            }
        }
    }

    #[test]
    fn duality_vanishes_numerically() {
        use crate::words::tau_anti;
        let e = ev();
        for n in 2..=6 {
            for w in Word::admissible_of_weight(n) {
                let p = Poly::from_word(w);
                let z = e.zeta_poly(&(&p - &tau_anti(&p))).unwrap();
                assert!(z.value.abs_f64() < 1e-25 && z.error_bound < 1e-25, "{w}");
            }
        }
    }
}
