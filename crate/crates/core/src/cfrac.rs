//! Continued fractions of quadratic irrationals and the numeration of the
//! integers in the base of convergent denominators (Ostrowski numeration).
//!
//! Indexing: digits are `a₀, a₁, …` and convergents start at `m = 0` with
//! `p₀/q₀ = a₀/1`, so `q₀ = 1` and `q₁ = a₁`. Ostrowski digit `b_i` is the
//! coefficient of `q_i` under the same indexing.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::QuadraticIrrational;

/// Digit budget used when a caller does not supply one.
pub const DEFAULT_MAX_DIGITS: usize = 10_000;

/// An eventually periodic continued fraction `[a₀; a₁, a₂, …]`.
///
/// `preperiod` always starts with `a₀`; the period is detected on the
/// complete quotients from index 1 onward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuedFraction {
    preperiod: Vec<u64>,
    period: Vec<u64>,
    digit_bound: u64,
}

impl ContinuedFraction {
    pub fn new(preperiod: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if preperiod.is_empty() {
            return Err(Error::InvariantViolation("preperiod must contain a0".into()));
        }
        if period.is_empty() {
            return Err(Error::InvariantViolation("period must be nonempty".into()));
        }
        if preperiod[1..].iter().chain(&period).any(|&a| a == 0) {
            return Err(Error::InvariantViolation(
                "digits after a0 must be positive".into(),
            ));
        }
        let digit_bound = preperiod[1..]
            .iter()
            .chain(&period)
            .copied()
            .max()
            .unwrap_or(1);
        Ok(Self {
            preperiod,
            period,
            digit_bound,
        })
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    /// `A = max a_i` over `i ≥ 1`.
    pub fn digit_bound(&self) -> u64 {
        self.digit_bound
    }

    /// The digit `a_i`.
    pub fn digit(&self, i: usize) -> u64 {
        match i.checked_sub(self.preperiod.len()) {
            None => self.preperiod[i],
            Some(j) => self.period[j % self.period.len()],
        }
    }

    /// The first `count` digits `a₀ … a_{count-1}`.
    pub fn digits(&self, count: usize) -> Vec<u64> {
        (0..count).map(|i| self.digit(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub index: usize,
    #[serde(serialize_with = "crate::exact::serialize_display")]
    pub p: BigInt,
    #[serde(serialize_with = "crate::exact::serialize_display")]
    pub q: BigInt,
}

impl Convergent {
    pub fn value(&self) -> QuadraticIrrational {
        QuadraticIrrational::new(self.p.clone(), 0, self.q.clone(), 2)
            .expect("q is positive")
    }
}

/// Expands a positive irrational into its continued fraction.
///
/// The period is found by exact repetition of the complete quotient
/// `x_{i+1} = 1/(x_i − a_i)`, which for quadratic irrationals always
/// happens.
pub fn expand(alpha: &QuadraticIrrational, max_digits: usize) -> Result<ContinuedFraction> {
    if alpha.is_rational() {
        return Err(Error::InvalidArgument(format!("{alpha} is rational")));
    }
    if !alpha.is_positive() {
        return Err(Error::InvalidArgument(format!("{alpha} is not positive")));
    }
    let to_digit = |a: BigInt| {
        a.to_u64()
            .ok_or_else(|| Error::InvalidArgument("continued fraction digit exceeds u64".into()))
    };
    let a0 = alpha.floor();
    let mut x = (alpha - &QuadraticIrrational::from_integer(a0.clone())).recip()?;
    let a0 = to_digit(a0)?;
    let mut seen: HashMap<QuadraticIrrational, usize> = HashMap::new();
    let mut digits = Vec::new();
    for i in 0..max_digits {
        if let Some(&start) = seen.get(&x) {
            let mut preperiod = vec![a0];
            preperiod.extend_from_slice(&digits[..start]);
            return ContinuedFraction::new(preperiod, digits[start..].to_vec());
        }
        seen.insert(x.clone(), i);
        let a = x.floor();
        x = (&x - &QuadraticIrrational::from_integer(a.clone())).recip()?;
        digits.push(to_digit(a)?);
    }
    Err(Error::PeriodNotFound(max_digits))
}

/// The first `count` convergents `p_m/q_m`, `m = 0, 1, …`.
pub fn convergents(cf: &ContinuedFraction, count: usize) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(count);
    let (mut p2, mut q2) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    for m in 0..count {
        let a = BigInt::from(cf.digit(m));
        let p = &a * &p1 + &p2;
        let q = &a * &q1 + &q2;
        out.push(Convergent {
            index: m,
            p: p.clone(),
            q: q.clone(),
        });
        (p2, q2) = (std::mem::replace(&mut p1, p), std::mem::replace(&mut q1, q));
    }
    out
}

/// Convenience: expand `alpha` and return its first `count` convergents.
pub fn convergents_of(alpha: &QuadraticIrrational, count: usize) -> Result<Vec<Convergent>> {
    Ok(convergents(&expand(alpha, DEFAULT_MAX_DIGITS)?, count))
}

/// `|α − p_m/q_m|`, exactly. For every `m` this is below `1/(q_m q_{m+1})`.
pub fn approximation_gap(alpha: &QuadraticIrrational, m: usize) -> Result<QuadraticIrrational> {
    let conv = convergents_of(alpha, m + 1)?;
    Ok((alpha - &conv[m].value()).abs())
}

/// Digits `b₀ … b_n` of `n` in the numeration based on `q₀, q₁, …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OstrowskiDigits {
    pub n: u64,
    pub digits: Vec<u64>,
}

/// `q₀, q₁, …` up to and including the first denominator exceeding
/// `limit`; saturates instead of overflowing.
fn denominators_past(cf: &ContinuedFraction, limit: u64) -> Vec<u128> {
    let mut qs = vec![1u128];
    let (mut q2, mut q1) = (0u128, 1u128);
    let mut i = 1;
    while *qs.last().unwrap() <= limit as u128 || qs.len() < 2 {
        let q = (cf.digit(i) as u128).saturating_mul(q1).saturating_add(q2);
        qs.push(q);
        (q2, q1) = (q1, q);
        i += 1;
    }
    qs
}

/// Greedy decomposition, largest denominator first. For `n = 0` the digit
/// vector is empty.
pub fn ostrowski_decompose(n: u64, cf: &ContinuedFraction) -> OstrowskiDigits {
    if n == 0 {
        return OstrowskiDigits { n, digits: vec![] };
    }
    let qs = denominators_past(cf, n);
    // qs.last() > n; the top index is the largest i with q_i <= n.
    let top = qs.len() - 2;
    let mut digits = vec![0u64; top + 1];
    let mut rest = n as u128;
    for i in (0..=top).rev() {
        digits[i] = (rest / qs[i]) as u64;
        rest %= qs[i];
    }
    debug_assert_eq!(rest, 0);
    OstrowskiDigits { n, digits }
}

/// True iff the digits sum to `n`, the top index `n_top` satisfies
/// `q_{n_top} ≤ n < q_{n_top+1}`, and the digit constraints hold:
/// `b₀ < a₁`, `b_i ≤ a_{i+1}`, and `b_{i-1} = 0` whenever `b_i = a_{i+1}`.
pub fn ostrowski_validate(d: &OstrowskiDigits, cf: &ContinuedFraction) -> bool {
    let Some(top) = d.digits.len().checked_sub(1) else {
        return d.n == 0;
    };
    if d.n == 0 {
        return d.digits.iter().all(|&b| b == 0);
    }
    if d.digits[0] >= cf.digit(1) {
        return false;
    }
    for i in 1..=top {
        let cap = cf.digit(i + 1);
        if d.digits[i] > cap || (d.digits[i] == cap && d.digits[i - 1] != 0) {
            return false;
        }
    }
    let mut qs = vec![1u128, cf.digit(1) as u128];
    while qs.len() < top + 2 {
        let i = qs.len();
        let q = (cf.digit(i) as u128)
            .saturating_mul(qs[i - 1])
            .saturating_add(qs[i - 2]);
        qs.push(q);
    }
    let sum = d
        .digits
        .iter()
        .zip(&qs)
        .fold(0u128, |acc, (&b, &q)| acc.saturating_add((b as u128).saturating_mul(q)));
    let n = d.n as u128;
    sum == n && qs[top] <= n && n < qs[top + 1]
}

/// Checks `|kα − k·p_h/q_h| < 1/q_{h+1}` for every `k = 1, …, q_h`.
/// `conv` must hold at least `h + 2` convergents.
pub fn scaled_gap_bound_holds(
    alpha: &QuadraticIrrational,
    conv: &[Convergent],
    h: usize,
) -> bool {
    let ph = QuadraticIrrational::from_integer(conv[h].p.clone());
    let qh = conv[h].q.clone();
    let bound = QuadraticIrrational::new(1, 0, conv[h + 1].q.clone(), 2).expect("q > 0");
    let step = (&alpha.mul_integer(&qh) - &ph).div_integer(&qh).expect("q > 0");
    let qh = qh.to_u64().expect("denominator fits u64");
    let mut err = QuadraticIrrational::zero();
    for _ in 0..qh {
        err = &err + &step;
        if err.abs().cmp_exact(&bound).is_ge() {
            return false;
        }
    }
    true
}
