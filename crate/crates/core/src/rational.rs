//! Exact rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Serializes as `"p/q"`, always with an explicit denominator.
pub fn to_pq(c: &Q) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

/// Accepts `"p/q"` or a bare integer `"p"`.
pub fn parse_pq(s: &str) -> Result<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| Error::parse(0, format!("bad numerator in {s:?}")))?;
    let pos = s.find('/').map_or(0, |p| p + 1);
    let d: BigInt = d
        .parse()
        .map_err(|_| Error::parse(pos, format!("bad denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::parse(pos, "zero denominator"));
    }
    Ok(Q::new(n, d))
}

/// Human-readable coefficient prefix used by the polynomial printers:
/// `""` for 1, `"2"`, `"(1/2)"`.
pub(crate) fn coeff_prefix(c: &Q) -> String {
    if c.is_one() {
        String::new()
    } else if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("({}/{})", c.numer(), c.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pq_roundtrip() {
        for c in [q(0), q(3), q(-7), q_frac(2, 6), q_frac(-5, 4)] {
            assert_eq!(parse_pq(&to_pq(&c)).unwrap(), c);
        }
        assert_eq!(to_pq(&q(3)), "3/1");
        assert_eq!(parse_pq("4").unwrap(), q(4));
        assert!(matches!(parse_pq("1/0"), Err(Error::Parse { pos: 2, .. })));
    }
}
