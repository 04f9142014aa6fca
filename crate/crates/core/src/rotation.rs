//! The rotation orbit `{kα}`, `k = 1, 2, …`, and the counting facts built
//! on the convergents of `α`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::cfrac::{self, Convergent};
use crate::error::{Error, Result};
use crate::exact::{format_rational, serialize_rational, QuadraticIrrational, Rational};
use crate::uniformity::{self, EdgeHeights, ThresholdBracket};

type Quad = QuadraticIrrational;

/// A half-open subinterval `[lower, upper)` of `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitInterval {
    lower: Quad,
    upper: Quad,
}

impl UnitInterval {
    pub fn new(lower: Quad, upper: Quad) -> Result<Self> {
        if lower.is_negative()
            || upper.try_cmp(&Quad::one())?.is_gt()
            || lower.try_cmp(&upper)?.is_ge()
        {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= lower < upper <= 1, got [{lower}, {upper})"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn from_rationals(lower: &Rational, upper: &Rational) -> Result<Self> {
        Self::new(lower.into(), upper.into())
    }

    pub fn lower(&self) -> &Quad {
        &self.lower
    }

    pub fn upper(&self) -> &Quad {
        &self.upper
    }

    pub fn length(&self) -> Quad {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &Quad) -> bool {
        self.lower.cmp_exact(x).is_le() && x.cmp_exact(&self.upper).is_lt()
    }
}

/// The first `n` points `{kα}` of the orbit, in order of `k`.
#[derive(Clone, Debug)]
pub struct OrbitPrefix {
    alpha: Quad,
    points: Vec<Quad>,
}

impl OrbitPrefix {
    pub fn alpha(&self) -> &Quad {
        &self.alpha
    }

    pub fn n(&self) -> u64 {
        self.points.len() as u64
    }

    /// `points()[k - 1] = {kα}`.
    pub fn points(&self) -> &[Quad] {
        &self.points
    }

    /// The orbit as a single sorted edge.
    pub fn heights(&self) -> EdgeHeights {
        EdgeHeights::new(self.n(), vec![self.points.clone()]).expect("one edge")
    }
}

fn require_irrational(alpha: &Quad) -> Result<()> {
    if alpha.is_rational() {
        return Err(Error::InvalidArgument(format!("slope {alpha} is rational")));
    }
    Ok(())
}

/// `{kα}` for `k = 1 … n`, reduced modulo 1 after every step.
pub fn orbit(alpha: &Quad, n: u64) -> Result<OrbitPrefix> {
    require_irrational(alpha)?;
    let step = alpha.frac();
    let mut points = Vec::with_capacity(n as usize);
    let mut x = Quad::zero();
    for _ in 0..n {
        x = (&x + &step).frac();
        points.push(x.clone());
    }
    Ok(OrbitPrefix {
        alpha: alpha.clone(),
        points,
    })
}

/// `V_n(I) = |{k ≤ n : {kα} ∈ I}|`.
pub fn visiting_number(o: &OrbitPrefix, interval: &UnitInterval) -> u64 {
    o.points.iter().filter(|p| interval.contains(p)).count() as u64
}

/// An interval of length `C/n` whose visiting number misses the expected
/// count `C` by at least 1/2 whenever `2C` is an odd integer.
#[derive(Clone, Debug, Serialize)]
pub struct TrivialErrorWitness {
    pub interval: UnitInterval,
    pub visits: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub expected: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub deviation: Rational,
}

/// Witness at the scale `1/(2n)`.
pub fn trivial_error_witness(o: &OrbitPrefix) -> Result<TrivialErrorWitness> {
    trivial_error_witness_at(o, &Rational::new(1.into(), 2.into()))
}

/// The window of length `C/n` with the largest deviation `|V − C|`.
pub fn trivial_error_witness_at(o: &OrbitPrefix, c: &Rational) -> Result<TrivialErrorWitness> {
    if o.n() < 2 {
        return Err(Error::InvalidArgument("need n >= 2".into()));
    }
    let n = Rational::from_integer(o.n().into());
    let len = c / &n;
    let sorted = o.heights();
    let ex = uniformity::visiting_extremes(sorted.edge(0), &len)?;
    let above = Rational::from_integer(ex.max.into()) - c;
    let below = c - Rational::from_integer(ex.min.into());
    let (visits, start, deviation) = if above >= below {
        (ex.max, ex.max_start, above)
    } else {
        (ex.min, ex.min_start, below)
    };
    let upper = &start + &Quad::from(&len);
    Ok(TrivialErrorWitness {
        interval: UnitInterval::new(start, upper)?,
        visits,
        expected: c.clone(),
        deviation,
    })
}

/// Smallest `C` (to within a factor 1.05) such that every window of length
/// `2^j·C/n ≤ 1` has `|V_n(I) − n|I|| < ε·n|I|`. Requires `0 < ε < 1`.
pub fn theorem_a_threshold(alpha: &Quad, n: u64, eps: &Rational) -> Result<ThresholdBracket> {
    if !eps.is_positive() || *eps >= Rational::one() {
        return Err(Error::InvalidArgument(format!(
            "need 0 < eps < 1, got {}",
            format_rational(eps)
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("need n >= 2".into()));
    }
    uniformity::threshold_search(&orbit(alpha, n)?.heights(), eps)
}

/// The bijection `k ↦ ℓ(k) = k·p_h mod q_h` on `{1, …, q_h}` and the
/// windows `𝔍_ℓ` of half-width `1/q_{h+1}` around `ℓ/q_h`.
#[derive(Clone, Debug)]
pub struct ResidueMap {
    pub h: usize,
    pub p: BigInt,
    pub q: BigInt,
    pub q_next: BigInt,
}

impl ResidueMap {
    pub fn new(alpha: &Quad, h: usize) -> Result<Self> {
        require_irrational(alpha)?;
        let conv = cfrac::convergents_of(alpha, h + 2)?;
        Ok(Self::from_convergents(&conv, h))
    }

    pub fn from_convergents(conv: &[Convergent], h: usize) -> Self {
        Self {
            h,
            p: conv[h].p.clone(),
            q: conv[h].q.clone(),
            q_next: conv[h + 1].q.clone(),
        }
    }

    /// `ℓ(k)` for `1 ≤ k ≤ q_h`.
    pub fn index(&self, k: u64) -> Result<u64> {
        if k == 0 || BigInt::from(k) > self.q {
            return Err(Error::InvalidArgument(format!(
                "k = {k} outside 1..={}",
                self.q
            )));
        }
        Ok((BigInt::from(k) * &self.p)
            .mod_floor(&self.q)
            .to_u64()
            .expect("residue below q"))
    }

    /// Membership of `x ∈ [0, 1)` in `𝔍_ℓ`: within `1/q_{h+1}` of `ℓ/q_h`
    /// modulo 1, open except at the left end of `𝔍_0`.
    pub fn window_contains(&self, ell: u64, x: &Quad) -> bool {
        let radius = Quad::from(Rational::new(BigInt::one(), self.q_next.clone()));
        if ell == 0 {
            let one = Quad::one();
            return x.cmp_exact(&radius).is_lt() || (&one - &radius).cmp_exact(x).is_lt();
        }
        let centre = Quad::from(Rational::new(BigInt::from(ell), self.q.clone()));
        (x - &centre).abs().cmp_exact(&radius).is_lt()
    }
}

/// `ℓ(k) = k·p_h mod q_h`.
pub fn residue_index(alpha: &Quad, h: usize, k: u64) -> Result<u64> {
    ResidueMap::new(alpha, h)?.index(k)
}

/// Counts the solutions `(β, k)` of `{β + kα} = 0` with `β` in a closed
/// real interval and `1 ≤ k ≤ q_h`.
///
/// For each `k` the solutions are `β ∈ −kα + ℤ`, so the candidates
/// `{−kα}` are enumerated once, sorted, and each query becomes a pair of
/// binary searches per integer translate.
#[derive(Clone, Debug)]
pub struct Lemma1Counter {
    q: u64,
    roots: Vec<Quad>,
}

impl Lemma1Counter {
    pub fn new(alpha: &Quad, h: usize) -> Result<Self> {
        require_irrational(alpha)?;
        let conv = cfrac::convergents_of(alpha, h + 1)?;
        let q = conv[h]
            .q
            .to_u64()
            .ok_or_else(|| Error::InvalidArgument(format!("q_{h} too large")))?;
        let step = (-alpha).frac();
        let mut roots = Vec::with_capacity(q as usize);
        let mut x = Quad::zero();
        for _ in 0..q {
            x = (&x + &step).frac();
            roots.push(x.clone());
        }
        roots.par_sort_unstable_by(Quad::cmp_exact);
        Ok(Self { q, roots })
    }

    /// `q_h`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Number of solutions with `β ∈ [lower, upper]`.
    pub fn count(&self, lower: &Rational, upper: &Rational) -> u64 {
        if lower > upper {
            return 0;
        }
        let lo_shift = lower.floor().to_integer();
        let hi_shift = upper.floor().to_integer();
        let mut total = 0u64;
        let mut shift = lo_shift;
        while shift <= hi_shift {
            let s = Rational::from_integer(shift.clone());
            let lo = Quad::from(lower - &s);
            let hi = Quad::from(upper - &s);
            let a = self.roots.partition_point(|r| r.cmp_exact(&lo).is_lt());
            let b = self.roots.partition_point(|r| r.cmp_exact(&hi).is_le());
            total += b.saturating_sub(a) as u64;
            shift += 1;
        }
        total
    }
}

/// One-shot form of [`Lemma1Counter::count`].
pub fn lemma1_count(alpha: &Quad, h: usize, lower: &Rational, upper: &Rational) -> Result<u64> {
    Ok(Lemma1Counter::new(alpha, h)?.count(lower, upper))
}
