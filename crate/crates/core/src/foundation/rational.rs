//! Exact rational scalars.
//!
//! Every coefficient in the crate is a [`Rational`]: an arbitrary precision
//! fraction kept in lowest terms with a positive denominator. The textual form
//! is `p/q`, or just `p` when the denominator is one.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}` (expected `p` or `p/q`)")]
pub struct ParseRationalError(pub String);

/// `n / 1`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`, reduced. Panics on a zero denominator.
pub fn frac(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `(-1)^e`.
pub fn sign_power(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        one()
    } else {
        -one()
    }
}

/// Parse `p` or `p/q` (surrounding whitespace allowed). The result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    let err = || ParseRationalError(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (t, None),
    };
    let n = BigInt::from_str(num).map_err(|_| err())?;
    let d = match den {
        Some(b) => BigInt::from_str(b).map_err(|_| err())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Canonical text: lowest terms, `p` when `q = 1`.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_is_lowest_terms() {
        assert_eq!(format_rational(&frac(6, 4)), "3/2");
        assert_eq!(format_rational(&frac(4, 2)), "2");
        assert_eq!(format_rational(&frac(3, -6)), "-1/2");
        assert_eq!(format_rational(&int(0)), "0");
    }

    #[test]
    fn parse_accepts_both_forms() {
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(" -10/4 ").unwrap(), frac(-5, 2));
        assert_eq!(parse_rational("1/-3").unwrap(), frac(-1, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn denominator_positive() {
        let q = parse_rational("3/-9").unwrap();
        assert!(q.denom().is_positive());
    }
}
