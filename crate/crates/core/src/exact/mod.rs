//! Exact arithmetic over real quadratic fields.
//!
//! Every slope and every crossing height handled by this crate lives in
//! `Q(√d)` for a single square-free `d`, so comparisons and floors are
//! decided exactly with integer arithmetic.

mod quad;

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use quad::QuadraticIrrational;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// `n / d` as a [`Rational`].
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn rational_from_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.125`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let int = int.trim_start_matches(['-', '+']);
        if frac.is_empty() && int.is_empty() {
            return Err(bad());
        }
        if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let numer: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let denom = BigInt::from(10u32).pow(frac.len() as u32);
        let value = Rational::new(numer, denom);
        return Ok(if negative { -value } else { value });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

impl FromStr for QuadraticIrrational {
    type Err = Error;

    /// Accepts `phi`, `sqrt2`, `sqrt3` (and `sqrtN` generally),
    /// `quad:a,b,c,d` for `(a + b√d)/c`, or anything [`parse_rational`]
    /// accepts.
    fn from_str(text: &str) -> Result<Self> {
        let s = text.trim();
        let bad = || Error::InvalidArgument(format!("not a quadratic number: {text:?}"));
        if s.eq_ignore_ascii_case("phi") {
            return Ok(Self::phi());
        }
        if let Some(d) = s.strip_prefix("sqrt") {
            let d: u64 = d.parse().map_err(|_| bad())?;
            return Self::sqrt(d);
        }
        if let Some(body) = s.strip_prefix("quad:") {
            let parts: Vec<&str> = body.split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(bad());
            }
            let a: BigInt = parts[0].parse().map_err(|_| bad())?;
            let b: BigInt = parts[1].parse().map_err(|_| bad())?;
            let c: BigInt = parts[2].parse().map_err(|_| bad())?;
            let d: u64 = parts[3].parse().map_err(|_| bad())?;
            return Self::new(a, b, c, d);
        }
        parse_rational(s).map(|r| Self::from_rational(&r))
    }
}

/// Serde adapter for fields whose JSON form is their `Display` string.
pub fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// Serde adapter rendering a rational as `p/q`.
pub fn serialize_rational<S: serde::Serializer>(
    value: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_rational(value))
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("0.5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn parses_named_and_tagged_quadratics() {
        let phi: QuadraticIrrational = "phi".parse().unwrap();
        assert_eq!(phi, "quad:1,1,2,5".parse().unwrap());
        assert_eq!("sqrt2".parse::<QuadraticIrrational>().unwrap().d(), 2);
        assert_eq!("sqrt3".parse::<QuadraticIrrational>().unwrap().d(), 3);
        assert!("quad:1,2,3".parse::<QuadraticIrrational>().is_err());
        assert!("quad:1,1,0,5".parse::<QuadraticIrrational>().is_err());
        assert!("1/3".parse::<QuadraticIrrational>().unwrap().is_rational());
    }

    #[test]
    fn formats_rationals() {
        assert_eq!(format_rational(&ratio(4, 2)), "2");
        assert_eq!(format_rational(&ratio(-1, 3)), "-1/3");
    }
}
