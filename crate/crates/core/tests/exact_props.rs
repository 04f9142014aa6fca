//! Exact arithmetic against a fixed-point oracle with 60 decimal digits.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use polygeo_core::exact::QuadraticIrrational as Quad;

const DIGITS: u32 = 60;

fn scale() -> BigInt {
    BigInt::from(10u32).pow(DIGITS)
}

/// `x · 10^60` truncated, computed from the parts alone.
fn oracle(a: i64, b: i64, c: i64, d: u64) -> BigInt {
    let s = scale();
    let root = (BigInt::from(d) * &s * &s).sqrt();
    let num = BigInt::from(a) * &s + BigInt::from(b) * root;
    num / BigInt::from(c)
}

fn oracle_of(x: &Quad) -> BigInt {
    let s = scale();
    let root = (BigInt::from(x.d()) * &s * &s).sqrt();
    (x.a() * &s + x.b() * root) / x.c()
}

/// Oracle slack: rounding of the square root, scaled by the coefficients.
fn tol() -> BigInt {
    BigInt::from(10u32).pow(20)
}

fn close(x: &BigInt, y: &BigInt) -> bool {
    (x - y).abs() <= tol()
}

fn parts() -> impl Strategy<Value = (i64, i64, i64)> {
    (-10_000i64..10_000, -10_000i64..10_000, 1i64..5_000)
}

fn radicand() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(3), Just(5), Just(7), Just(13)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn construction_matches_oracle((a, b, c) in parts(), d in radicand()) {
        let x = Quad::new(BigInt::from(a), BigInt::from(b), BigInt::from(c), d).unwrap();
        prop_assert!(close(&oracle_of(&x), &oracle(a, b, c, d)));
    }

    #[test]
    fn comparison_matches_oracle((a1, b1, c1) in parts(), (a2, b2, c2) in parts(), d in radicand()) {
        let x = Quad::new(BigInt::from(a1), BigInt::from(b1), BigInt::from(c1), d).unwrap();
        let y = Quad::new(BigInt::from(a2), BigInt::from(b2), BigInt::from(c2), d).unwrap();
        let diff = oracle(a1, b1, c1, d) - oracle(a2, b2, c2, d);
        if diff.abs() > tol() {
            let want = if diff.is_positive() { Ordering::Greater } else { Ordering::Less };
            prop_assert_eq!(x.cmp_exact(&y), want);
        }
        prop_assert_eq!(x.cmp_exact(&y), y.cmp_exact(&x).reverse());
        prop_assert_eq!(x.cmp_exact(&x), Ordering::Equal);
    }

    #[test]
    fn ring_operations_match_oracle((a1, b1, c1) in parts(), (a2, b2, c2) in parts(), d in radicand()) {
        let x = Quad::new(BigInt::from(a1), BigInt::from(b1), BigInt::from(c1), d).unwrap();
        let y = Quad::new(BigInt::from(a2), BigInt::from(b2), BigInt::from(c2), d).unwrap();
        let (ox, oy) = (oracle(a1, b1, c1, d), oracle(a2, b2, c2, d));
        prop_assert!(close(&oracle_of(&(&x + &y)), &(&ox + &oy)));
        prop_assert!(close(&oracle_of(&(&x - &y)), &(&ox - &oy)));
        // products carry the error of both factors, scaled by their size
        let prod = &ox * &oy / scale();
        let slack = (ox.abs() + oy.abs()) / BigInt::from(10u32).pow(30) + tol();
        prop_assert!((oracle_of(&(&x * &y)) - prod).abs() <= slack);
        if !y.is_zero() {
            prop_assert_eq!(&(&x / &y) * &y, x.clone());
        }
        prop_assert_eq!(&(&x + &y) - &y, x);
    }

    #[test]
    fn floor_brackets_the_value((a, b, c) in parts(), d in radicand()) {
        let x = Quad::new(BigInt::from(a), BigInt::from(b), BigInt::from(c), d).unwrap();
        let f = x.floor();
        let o = oracle(a, b, c, d);
        let s = scale();
        prop_assert!(&f * &s <= &o + tol());
        prop_assert!(o < (&f + 1) * &s + tol());
        prop_assert_eq!(Quad::from_integer(f.clone()).cmp_exact(&x) != Ordering::Greater, true);
        prop_assert_eq!(Quad::from_integer(&f + 1).cmp_exact(&x), Ordering::Greater);
    }

    #[test]
    fn frac_is_translation_invariant((a, b, c) in parts(), d in radicand(), n in -1000i64..1000) {
        let x = Quad::new(BigInt::from(a), BigInt::from(b), BigInt::from(c), d).unwrap();
        let shifted = &x + &Quad::from_integer(n);
        prop_assert_eq!(shifted.frac(), x.frac());
        let fr = x.frac();
        prop_assert!(!fr.is_negative());
        prop_assert_eq!(fr.cmp_exact(&Quad::one()), Ordering::Less);
    }

    #[test]
    fn display_round_trips((a, b, c) in parts(), d in radicand()) {
        let x = Quad::new(BigInt::from(a), BigInt::from(b), BigInt::from(c), d).unwrap();
        let back: Quad = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn decimal_rendering_truncates((a, b, c) in parts(), d in radicand()) {
        let x = Quad::new(BigInt::from(a), BigInt::from(b), BigInt::from(c), d).unwrap();
        let text = x.to_decimal(40);
        let body = text.trim_start_matches('~');
        prop_assert_eq!(text.starts_with('~'), !x.is_rational() || !body_is_exact(&x));
        let as_f = body.parse::<f64>().unwrap();
        prop_assert!((as_f - x.to_f64()).abs() <= 1e-9 * (1.0 + x.to_f64().abs()));
    }
}

/// Whether a rational value has a terminating expansion within 40 digits.
fn body_is_exact(x: &Quad) -> bool {
    let mut c = x.c().clone() / num_integer::gcd(x.a().clone(), x.c().clone());
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0;
    let mut fives = 0;
    while (&c % &two).is_zero() {
        c /= &two;
        twos += 1;
    }
    while (&c % &five).is_zero() {
        c /= &five;
        fives += 1;
    }
    c == BigInt::from(1) && twos <= 40 && fives <= 40
}

#[test]
fn mixed_radicands_are_rejected() {
    let r2 = Quad::sqrt(2).unwrap();
    let r3 = Quad::sqrt(3).unwrap();
    assert!(r2.checked_add(&r3).is_err());
    assert!(r2.try_cmp(&r3).is_err());
    // rationals mix with any field
    let half = Quad::new(BigInt::from(1), BigInt::from(0), BigInt::from(2), 7).unwrap();
    assert!(r3.checked_add(&half).is_ok());
}
