use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::Rational;
use crate::error::{Error, Result};

/// Radicand stored for rational values, so that equal rationals have
/// identical canonical forms.
const RATIONAL_D: u64 = 2;

/// An exact element `(a + b·√d) / c` of a real quadratic field.
///
/// Values are kept in canonical form: `c > 0`, `gcd(a, b, c) = 1`, `d`
/// square-free and at least 2 whenever `b ≠ 0`, and `d = 2` for rationals.
/// Two values are equal iff their canonical forms are identical, so the
/// derived `Eq` and `Hash` are structural.
///
/// Arithmetic between two irrational values with different radicands is
/// undefined; the `checked_*` methods report it as
/// [`Error::MixedRadicand`] while the operator impls panic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticIrrational {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: u64,
}

/// Splits `d` into `(outer, core)` with `d = outer² · core` and `core`
/// square-free.
fn square_free(d: u64) -> (u64, u64) {
    let mut outer = 1u64;
    let mut core = 1u64;
    let mut rest = d;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        let mut e = 0u32;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        outer *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (outer, core * rest)
}

/// Sign of `a + b·√d` for square-free `d ≥ 2` (or `b = 0`), if it can be
/// decided without leaving 128-bit integers.
fn sign_small(a: i128, b: i128, d: u64) -> Option<Ordering> {
    let sa = a.cmp(&0);
    let sb = b.cmp(&0);
    if sb == Ordering::Equal || sa == sb {
        return Some(if sa == Ordering::Equal { sb } else { sa });
    }
    if sa == Ordering::Equal {
        return Some(sb);
    }
    let a2 = a.unsigned_abs().checked_mul(a.unsigned_abs())?;
    let b2d = b
        .unsigned_abs()
        .checked_mul(b.unsigned_abs())?
        .checked_mul(d as u128)?;
    // a² = b²d is impossible for square-free d and b ≠ 0.
    Some(if a2 > b2d { sa } else { sb })
}

fn sign_big(a: &BigInt, b: &BigInt, d: u64) -> Ordering {
    let sa = a.sign_ordering();
    let sb = b.sign_ordering();
    if sb == Ordering::Equal || sa == sb {
        return if sa == Ordering::Equal { sb } else { sa };
    }
    if sa == Ordering::Equal {
        return sb;
    }
    let a2 = a * a;
    let b2d = b * b * BigInt::from(d);
    if a2 > b2d {
        sa
    } else {
        sb
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        if self.is_zero() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl QuadraticIrrational {
    /// Builds `(a + b·√d) / c`, extracting square factors of `d`.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: u64,
    ) -> Result<Self> {
        let (a, b, c) = (a.into(), b.into(), c.into());
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if d == 0 {
            return Err(Error::InvalidArgument("radicand must be positive".into()));
        }
        let (outer, core) = square_free(d);
        let b = b * BigInt::from(outer);
        if core == 1 {
            return Ok(Self::canonical(a + b, BigInt::zero(), c, RATIONAL_D));
        }
        Ok(Self::canonical(a, b, c, core))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self {
            a: n.into(),
            b: BigInt::zero(),
            c: BigInt::one(),
            d: RATIONAL_D,
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        Self::canonical(r.numer().clone(), BigInt::zero(), r.denom().clone(), RATIONAL_D)
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// `√d` for a positive integer `d`.
    pub fn sqrt(d: u64) -> Result<Self> {
        Self::new(0, 1, 1, d)
    }

    /// The golden ratio `(1 + √5) / 2`.
    pub fn phi() -> Self {
        Self::new(1, 1, 2, 5).expect("valid literal")
    }

    // `d` must already be square-free when `b ≠ 0`.
    fn canonical(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: u64) -> Self {
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        let d = if b.is_zero() { RATIONAL_D } else { d };
        Self { a, b, c, d }
    }

    fn canonical_i128(mut a: i128, mut b: i128, mut c: i128, d: u64) -> Self {
        if c < 0 {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if g > 1 {
            a /= g;
            b /= g;
            c /= g;
        }
        let d = if b == 0 { RATIONAL_D } else { d };
        Self {
            a: BigInt::from(a),
            b: BigInt::from(b),
            c: BigInt::from(c),
            d,
        }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// Radicand. Normalized to 2 for rational values.
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.c.is_one()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational()
            .then(|| Rational::new(self.a.clone(), self.c.clone()))
    }

    #[inline]
    fn small(&self) -> Option<(i64, i64, i64)> {
        Some((self.a.to_i64()?, self.b.to_i64()?, self.c.to_i64()?))
    }

    /// Common radicand of two operands, or `MixedRadicand`.
    fn field(&self, other: &Self) -> Result<u64> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Ok(RATIONAL_D),
            (true, false) => Ok(other.d),
            (false, true) => Ok(self.d),
            (false, false) if self.d == other.d => Ok(self.d),
            (false, false) => Err(Error::MixedRadicand(self.d, other.d)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.field(other)?;
        if let (Some((a1, b1, c1)), Some((a2, b2, c2))) = (self.small(), other.small()) {
            let (a1, b1, c1, a2, b2, c2) = (
                a1 as i128, b1 as i128, c1 as i128, a2 as i128, b2 as i128, c2 as i128,
            );
            if c1 == c2 {
                if let (Some(a), Some(b)) = (a1.checked_add(a2), b1.checked_add(b2)) {
                    return Ok(Self::canonical_i128(a, b, c1, d));
                }
            }
            if let (Some(a), Some(b)) = ((a1 * c2).checked_add(a2 * c1), (b1 * c2).checked_add(b2 * c1))
            {
                return Ok(Self::canonical_i128(a, b, c1 * c2, d));
            }
        }
        if self.c == other.c {
            return Ok(Self::canonical(
                &self.a + &other.a,
                &self.b + &other.b,
                self.c.clone(),
                d,
            ));
        }
        Ok(Self::canonical(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            &self.c * &other.c,
            d,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.field(other)?;
        if let (Some((a1, b1, c1)), Some((a2, b2, c2))) = (self.small(), other.small()) {
            let (a1, b1, c1, a2, b2, c2) = (
                a1 as i128, b1 as i128, c1 as i128, a2 as i128, b2 as i128, c2 as i128,
            );
            let a = (b1 * b2)
                .checked_mul(d as i128)
                .and_then(|t| t.checked_add(a1 * a2));
            let b = (a1 * b2).checked_add(a2 * b1);
            if let (Some(a), Some(b)) = (a, b) {
                return Ok(Self::canonical_i128(a, b, c1 * c2, d));
            }
        }
        let dd = BigInt::from(d);
        Ok(Self::canonical(
            &self.a * &other.a + &self.b * &other.b * dd,
            &self.a * &other.b + &other.a * &self.b,
            &self.c * &other.c,
            d,
        ))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1 / ((a + b√d)/c) = c(a − b√d) / (a² − b²d)
        let norm = &self.a * &self.a - &self.b * &self.b * BigInt::from(self.d);
        Ok(Self::canonical(
            &self.a * &self.c,
            -(&self.b * &self.c),
            norm,
            self.d,
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.recip()?)
    }

    pub fn mul_integer(&self, k: &BigInt) -> Self {
        Self::canonical(&self.a * k, &self.b * k, self.c.clone(), self.d)
    }

    pub fn div_integer(&self, k: &BigInt) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(
            self.a.clone(),
            self.b.clone(),
            &self.c * k,
            self.d,
        ))
    }

    /// Sign of the value, decided with integer arithmetic only.
    pub fn signum(&self) -> Ordering {
        if let (Some(a), Some(b)) = (self.a.to_i64(), self.b.to_i64()) {
            if let Some(s) = sign_small(a as i128, b as i128, self.d) {
                return s;
            }
        }
        sign_big(&self.a, &self.b, self.d)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Exact comparison. Never approximates.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        let d = self.field(other)?;
        if let (Some((a1, b1, c1)), Some((a2, b2, c2))) = (self.small(), other.small()) {
            let (a1, b1, c1, a2, b2, c2) = (
                a1 as i128, b1 as i128, c1 as i128, a2 as i128, b2 as i128, c2 as i128,
            );
            let a = (a1 * c2).checked_sub(a2 * c1);
            let b = (b1 * c2).checked_sub(b2 * c1);
            if let (Some(a), Some(b)) = (a, b) {
                if let Some(s) = sign_small(a, b, d) {
                    return Ok(s);
                }
            }
        }
        let a = &self.a * &other.c - &other.a * &self.c;
        let b = &self.b * &other.c - &other.b * &self.c;
        Ok(sign_big(&a, &b, d))
    }

    /// `try_cmp` for operands known to share a field.
    ///
    /// # Panics
    /// On mixed radicands.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        self.try_cmp(other).expect("comparison across quadratic fields")
    }

    /// Largest integer `≤ self`.
    pub fn floor(&self) -> BigInt {
        if let Some((a, b, c)) = self.small() {
            let b2d = (b.unsigned_abs() as u128)
                .checked_mul(b.unsigned_abs() as u128)
                .and_then(|t| t.checked_mul(self.d as u128));
            if let Some(b2d) = b2d {
                let s = b2d.isqrt() as i128;
                // b√d is irrational when b ≠ 0, so it lies strictly between s and s+1.
                let fb = match b.cmp(&0) {
                    Ordering::Equal => 0,
                    Ordering::Greater => s,
                    Ordering::Less => -s - 1,
                };
                return BigInt::from((a as i128 + fb).div_euclid(c as i128));
            }
        }
        let fb = match self.b.sign_ordering() {
            Ordering::Equal => BigInt::zero(),
            Ordering::Greater => (&self.b * &self.b * BigInt::from(self.d)).sqrt(),
            Ordering::Less => -(&self.b * &self.b * BigInt::from(self.d)).sqrt() - 1,
        };
        (&self.a + fb).div_floor(&self.c)
    }

    /// Smallest integer `≥ self`.
    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// `self − floor(self)`, always in `[0, 1)`.
    pub fn frac(&self) -> Self {
        let f = self.floor();
        if f.is_zero() {
            return self.clone();
        }
        Self::canonical(&self.a - f * &self.c, self.b.clone(), self.c.clone(), self.d)
    }

    pub fn midpoint(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)?.div_integer(&BigInt::from(2))
    }

    /// Approximation accurate to about 2⁻⁶⁰ absolute error for moderate
    /// magnitudes. For presentation and geometry estimates only.
    pub fn to_f64(&self) -> f64 {
        let scale = BigInt::one() << 60u32;
        let scaled = self.mul_integer(&scale).floor();
        scaled.to_f64().unwrap_or(f64::NAN) / 2f64.powi(60)
    }

    /// Decimal rendering truncated toward zero after `digits` fractional
    /// digits. Inexact renderings carry a leading `~`.
    pub fn to_decimal(&self, digits: u32) -> String {
        let negative = self.is_negative();
        let magnitude = if negative { -self } else { self.clone() };
        let scaled = magnitude.mul_integer(&BigInt::from(10u32).pow(digits));
        let truncated = scaled.floor();
        let exact = scaled.is_integer();
        let mut body = truncated.to_string();
        let width = digits as usize + 1;
        if body.len() < width {
            body = format!("{}{}", "0".repeat(width - body.len()), body);
        }
        let split = body.len() - digits as usize;
        let mut out = String::new();
        if !exact {
            out.push('~');
        }
        if negative {
            out.push('-');
        }
        out.push_str(&body[..split]);
        if digits > 0 {
            out.push('.');
            out.push_str(&body[split..]);
        }
        out
    }
}

impl fmt::Display for QuadraticIrrational {
    /// Rationals print as `p/q` (or `p`); irrationals as `quad:a,b,c,d`.
    /// Both forms parse back through `FromStr`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            }
        } else {
            write!(f, "quad:{},{},{},{}", self.a, self.b, self.c, self.d)
        }
    }
}

impl fmt::Debug for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (~{:.6})", self.to_f64())
    }
}

impl Serialize for QuadraticIrrational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl PartialOrd for QuadraticIrrational {
    /// `None` when the operands live in different quadratic fields.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl From<i64> for QuadraticIrrational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<&Rational> for QuadraticIrrational {
    fn from(r: &Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<Rational> for QuadraticIrrational {
    fn from(r: Rational) -> Self {
        Self::from_rational(&r)
    }
}

impl Neg for &QuadraticIrrational {
    type Output = QuadraticIrrational;
    fn neg(self) -> QuadraticIrrational {
        QuadraticIrrational {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d,
        }
    }
}

impl Neg for QuadraticIrrational {
    type Output = QuadraticIrrational;
    fn neg(self) -> QuadraticIrrational {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadraticIrrational> for &QuadraticIrrational {
            type Output = QuadraticIrrational;
            fn $method(self, rhs: &QuadraticIrrational) -> QuadraticIrrational {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("{}: {e}", stringify!($method)))
            }
        }

        impl $trait<QuadraticIrrational> for QuadraticIrrational {
            type Output = QuadraticIrrational;
            fn $method(self, rhs: QuadraticIrrational) -> QuadraticIrrational {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&QuadraticIrrational> for QuadraticIrrational {
            type Output = QuadraticIrrational;
            fn $method(self, rhs: &QuadraticIrrational) -> QuadraticIrrational {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, c: i64, d: u64) -> QuadraticIrrational {
        QuadraticIrrational::new(a, b, c, d).unwrap()
    }

    fn r(n: i64, d: i64) -> QuadraticIrrational {
        QuadraticIrrational::from_rational(&Rational::new(n.into(), d.into()))
    }

    #[test]
    fn canonical_form() {
        assert_eq!(q(2, 2, 4, 5), q(1, 1, 2, 5));
        assert_eq!(q(-1, -1, -2, 5), q(1, 1, 2, 5));
        // √8 = 2√2
        assert_eq!(q(0, 1, 1, 8), q(0, 2, 1, 2));
        // √9 = 3, rational with normalized radicand
        let three = q(0, 1, 1, 9);
        assert!(three.is_rational());
        assert_eq!(three, QuadraticIrrational::from_integer(3));
        assert_eq!(three.d(), 2);
        assert_eq!(q(3, 0, 1, 7), three);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert_eq!(QuadraticIrrational::new(1, 1, 0, 5), Err(Error::DivisionByZero));
        assert!(QuadraticIrrational::new(1, 1, 1, 0).is_err());
        assert_eq!(QuadraticIrrational::zero().recip(), Err(Error::DivisionByZero));
    }

    #[test]
    fn conjugate_sum_and_doubling() {
        let phi = QuadraticIrrational::phi();
        let psi = q(1, -1, 2, 5);
        assert_eq!(&phi + &psi, QuadraticIrrational::one());
        assert_eq!(&phi + &QuadraticIrrational::zero(), phi);
        assert_eq!(&phi + &phi, q(1, 1, 1, 5));
    }

    #[test]
    fn products() {
        let phi = QuadraticIrrational::phi();
        assert_eq!(&phi * &QuadraticIrrational::one(), phi);
        assert_eq!(&phi * &phi, q(3, 1, 2, 5));
        let s2 = QuadraticIrrational::sqrt(2).unwrap();
        assert_eq!(&s2 * &s2, QuadraticIrrational::from_integer(2));
        assert_eq!(&phi * &phi.recip().unwrap(), QuadraticIrrational::one());
    }

    #[test]
    fn mixed_radicand_is_an_error() {
        let s2 = QuadraticIrrational::sqrt(2).unwrap();
        let s3 = QuadraticIrrational::sqrt(3).unwrap();
        assert_eq!(s2.checked_add(&s3), Err(Error::MixedRadicand(2, 3)));
        assert_eq!(s2.checked_mul(&s3), Err(Error::MixedRadicand(2, 3)));
        assert_eq!(s2.try_cmp(&s3), Err(Error::MixedRadicand(2, 3)));
        assert!(s2.partial_cmp(&s3).is_none());
        // rationals mix with any field
        assert!(s3.checked_add(&r(1, 2)).is_ok());
    }

    #[test]
    fn comparisons() {
        let phi = QuadraticIrrational::phi();
        assert_eq!(phi.try_cmp(&r(8, 5)), Ok(Ordering::Greater));
        assert_eq!(phi.try_cmp(&phi), Ok(Ordering::Equal));
        let s2 = QuadraticIrrational::sqrt(2).unwrap();
        assert_eq!(s2.try_cmp(&r(3, 2)), Ok(Ordering::Less));
        assert_eq!(q(0, -1, 1, 2).signum(), Ordering::Less);
        assert_eq!(q(-1, 1, 1, 2).signum(), Ordering::Greater);
        assert_eq!(q(-2, 1, 1, 2).signum(), Ordering::Less);
    }

    #[test]
    fn floor_and_frac() {
        let phi = QuadraticIrrational::phi();
        assert_eq!(phi.frac(), q(-1, 1, 2, 5));
        assert_eq!(r(3, 2).frac(), r(1, 2));
        assert_eq!(phi.mul_integer(&2.into()).floor(), BigInt::from(3));
        assert_eq!((-&phi).floor(), BigInt::from(-2));
        assert_eq!(r(-3, 2).floor(), BigInt::from(-2));
        assert_eq!(r(-3, 2).ceil(), BigInt::from(-1));
        assert_eq!(QuadraticIrrational::from_integer(4).frac(), QuadraticIrrational::zero());
    }

    #[test]
    fn big_path_matches_small_path() {
        let huge = BigInt::from(1u64) << 100u32;
        let x = QuadraticIrrational::new(huge.clone() + 1, huge.clone(), 3, 5).unwrap();
        let y = QuadraticIrrational::new(huge.clone(), huge.clone(), 3, 5).unwrap();
        assert_eq!(x.try_cmp(&y), Ok(Ordering::Greater));
        let diff = &x - &y;
        assert_eq!(diff, r(1, 3));
        let fl = x.floor();
        assert!(QuadraticIrrational::from_integer(fl.clone()) <= x);
        assert!(QuadraticIrrational::from_integer(fl + 1) > x);
    }

    #[test]
    fn decimal_rendering() {
        let phi = QuadraticIrrational::phi();
        assert_eq!(phi.to_decimal(10), "~1.6180339887");
        assert_eq!(r(1, 2).to_decimal(3), "0.500");
        assert_eq!(r(-1, 3).to_decimal(4), "~-0.3333");
        assert_eq!(r(1, 3).to_decimal(0), "~0");
        assert_eq!(
            phi.to_decimal(40),
            "~1.6180339887498948482045868343656381177203"
        );
    }

    #[test]
    fn display_round_trips_through_parse() {
        for x in [QuadraticIrrational::phi(), r(-7, 3), QuadraticIrrational::from_integer(5)] {
            let text = x.to_string();
            assert_eq!(text.parse::<QuadraticIrrational>().unwrap(), x);
        }
    }
}
