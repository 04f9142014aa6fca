//! Visiting numbers over the family of windows of a fixed microscopic
//! length on the vertical edges of a surface.
//!
//! Every edge is treated as the segment `[0, 1]`; windows are half-open
//! `[a, a + L)` with `0 ≤ a ≤ 1 − L` and never wrap around the top.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_rational, serialize_rational, QuadraticIrrational, Rational};

type Quad = QuadraticIrrational;

/// Sorted crossing heights on each vertical edge, together with the total
/// number `n` of crossings they came from.
#[derive(Clone, Debug)]
pub struct EdgeHeights {
    n: u64,
    edges: Vec<Vec<Quad>>,
}

impl EdgeHeights {
    /// Sorts each edge's heights. All heights must share one quadratic field.
    pub fn new(n: u64, mut edges: Vec<Vec<Quad>>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidArgument("at least one edge is required".into()));
        }
        let total: usize = edges.iter().map(Vec::len).sum();
        if total as u64 != n {
            return Err(Error::InvariantViolation(format!(
                "edges hold {total} heights but n = {n}"
            )));
        }
        edges
            .par_iter_mut()
            .for_each(|e| e.par_sort_unstable_by(Quad::cmp_exact));
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of edges `b`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, i: usize) -> &[Quad] {
        &self.edges[i]
    }

    /// `|[lower, upper) ∩ X_n|` on one edge.
    pub fn count(&self, interval: &EdgeInterval) -> u64 {
        let pts = &self.edges[interval.edge];
        let lo = pts.partition_point(|y| y.cmp_exact(&interval.lower).is_lt());
        let hi = pts.partition_point(|y| y.cmp_exact(&interval.upper).is_lt());
        hi.saturating_sub(lo) as u64
    }
}

/// A half-open subinterval `[lower, upper)` of one vertical edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeInterval {
    pub edge: usize,
    pub lower: Quad,
    pub upper: Quad,
}

impl EdgeInterval {
    pub fn new(edge: usize, lower: Quad, upper: Quad) -> Result<Self> {
        let zero = Quad::zero();
        if lower.try_cmp(&zero)?.is_lt() || upper.try_cmp(&Quad::one())?.is_gt() || lower.try_cmp(&upper)?.is_ge() {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= lower < upper <= 1, got [{lower}, {upper})"
            )));
        }
        Ok(Self { edge, lower, upper })
    }

    pub fn length(&self) -> Quad {
        &self.upper - &self.lower
    }
}

/// Extreme visiting numbers over all windows of one length on one edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extremes {
    pub min: u64,
    pub min_start: Quad,
    pub max: u64,
    pub max_start: Quad,
}

struct Candidate {
    start: Quad,
    end: Quad,
}

fn merge_candidates(points: &[Quad], len: &Quad, last_start: &Quad) -> Vec<Candidate> {
    let zero = Quad::zero();
    // starts at a point: window [y, y+L)
    let at_points = points
        .iter()
        .filter(|y| y.cmp_exact(last_start).is_le())
        .map(|y| Candidate { start: y.clone(), end: y + len });
    // starts where a point is about to enter: window [y−L, y)
    let entering = points.iter().filter_map(|y| {
        let s = y - len;
        (!s.is_negative()).then(|| Candidate { start: s, end: y.clone() })
    });
    let a: Vec<Candidate> = at_points.collect();
    let b: Vec<Candidate> = entering.collect();
    let mut merged = Vec::with_capacity(a.len() + b.len() + 2);
    merged.push(Candidate { start: zero, end: len.clone() });
    let mut a_iter = a.into_iter().peekable();
    let mut b_iter = b.into_iter().peekable();
    loop {
        let next = match (a_iter.peek(), b_iter.peek()) {
            (Some(x), Some(y)) => {
                if x.start.cmp_exact(&y.start).is_le() {
                    a_iter.next()
                } else {
                    b_iter.next()
                }
            }
            (Some(_), None) => a_iter.next(),
            (None, Some(_)) => b_iter.next(),
            (None, None) => break,
        };
        let c = next.expect("peeked");
        if merged.last().map_or(true, |p: &Candidate| p.start.cmp_exact(&c.start).is_lt()) {
            merged.push(c);
        }
    }
    if merged.last().map_or(true, |p| p.start.cmp_exact(last_start).is_lt()) {
        merged.push(Candidate {
            start: last_start.clone(),
            end: Quad::one(),
        });
    }
    merged
}

/// Exact minimum and maximum of `|[a, a + L) ∩ points|` over
/// `a ∈ [0, 1 − L]`.
///
/// The count is piecewise constant in `a` and changes only just after a
/// point leaves (`a` passes some `y`) or enters (`a` passes some `y − L`),
/// so it suffices to evaluate it at every such breakpoint and on the open
/// side immediately after it. `points` must be sorted and lie in `[0, 1)`.
pub fn visiting_extremes(points: &[Quad], len: &Rational) -> Result<Extremes> {
    if !len.is_positive() || *len > Rational::one() {
        return Err(Error::InvalidArgument(format!(
            "window length must be in (0, 1], got {}",
            format_rational(len)
        )));
    }
    let l = Quad::from(len);
    let last_start = Quad::from(Rational::one() - len);
    let candidates = merge_candidates(points, &l, &last_start);
    let m = points.len();

    // #{y < a}, #{y ≤ a}, #{y < a+L}, #{y ≤ a+L}; all four only move forward.
    let (mut lt_a, mut le_a, mut lt_b, mut le_b) = (0usize, 0usize, 0usize, 0usize);
    let mut best_min: Option<(u64, usize, bool)> = None;
    let mut best_max: Option<(u64, usize, bool)> = None;
    let mut record = |count: u64, idx: usize, after: bool| {
        if best_min.map_or(true, |(v, _, _)| count < v) {
            best_min = Some((count, idx, after));
        }
        if best_max.map_or(true, |(v, _, _)| count > v) {
            best_max = Some((count, idx, after));
        }
    };
    for (idx, cand) in candidates.iter().enumerate() {
        while lt_a < m && points[lt_a].cmp_exact(&cand.start).is_lt() {
            lt_a += 1;
        }
        le_a = le_a.max(lt_a);
        while le_a < m && points[le_a].cmp_exact(&cand.start).is_le() {
            le_a += 1;
        }
        while lt_b < m && points[lt_b].cmp_exact(&cand.end).is_lt() {
            lt_b += 1;
        }
        le_b = le_b.max(lt_b);
        while le_b < m && points[le_b].cmp_exact(&cand.end).is_le() {
            le_b += 1;
        }
        record((lt_b - lt_a) as u64, idx, false);
        if idx + 1 < candidates.len() {
            record((le_b - le_a) as u64, idx, true);
        }
    }
    let witness = |(_, idx, after): (u64, usize, bool)| -> Result<Quad> {
        let here = &candidates[idx].start;
        if after {
            here.midpoint(&candidates[idx + 1].start)
        } else {
            Ok(here.clone())
        }
    };
    let min = best_min.expect("at least one candidate");
    let max = best_max.expect("at least one candidate");
    Ok(Extremes {
        min: min.0,
        min_start: witness(min)?,
        max: max.0,
        max_start: witness(max)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    /// `min/max ≥ 1 − ε`
    A,
    /// `min/max < 1 − ε`
    B,
}

/// The window family `I_n(P; C)`: all windows of length `C/n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalFamilySpec {
    pub n: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub c: Rational,
}

impl IntervalFamilySpec {
    /// Requires `1 < C < n`.
    pub fn new(n: u64, c: Rational) -> Result<Self> {
        if c <= Rational::one() || c >= Rational::from_integer(n.into()) {
            return Err(Error::InvalidArgument(format!(
                "need 1 < C < n, got C = {} with n = {n}",
                format_rational(&c)
            )));
        }
        Ok(Self { n, c })
    }

    pub fn length(&self) -> Rational {
        &self.c / Rational::from_integer(self.n.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniformityReport {
    pub spec: IntervalFamilySpec,
    pub edges: usize,
    pub min_visit: u64,
    pub min_witness: EdgeInterval,
    pub max_visit: u64,
    pub max_witness: EdgeInterval,
    /// `n·L/b = C/b`
    #[serde(serialize_with = "serialize_rational")]
    pub expected: Rational,
    /// `min/max`, taken as 1 when both are zero.
    #[serde(serialize_with = "serialize_rational")]
    pub ratio: Rational,
    /// Whether `min ≤ C/b ≤ max` held for this run.
    pub sandwich_holds: bool,
    pub case_label: Option<CaseLabel>,
}

impl UniformityReport {
    pub fn classify(&mut self, eps: &Rational) -> Result<CaseLabel> {
        let label = classify_case(self, eps)?;
        self.case_label = Some(label);
        Ok(label)
    }
}

fn check_eps_half(eps: &Rational) -> Result<()> {
    if !eps.is_positive() || *eps >= Rational::new(1.into(), 2.into()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < eps < 1/2, got {}",
            format_rational(eps)
        )));
    }
    Ok(())
}

fn per_edge_extremes(h: &EdgeHeights, len: &Rational) -> Result<Vec<Extremes>> {
    h.edges
        .par_iter()
        .map(|pts| visiting_extremes(pts, len))
        .collect()
}

/// Smallest and largest visiting numbers over every window of length
/// `C/n` on every edge.
pub fn family_extremes(h: &EdgeHeights, c: &Rational) -> Result<UniformityReport> {
    let spec = IntervalFamilySpec::new(h.n, c.clone())?;
    let len = spec.length();
    let per_edge = per_edge_extremes(h, &len)?;
    let l = Quad::from(&len);
    let window = |edge: usize, start: &Quad| EdgeInterval {
        edge,
        lower: start.clone(),
        upper: start + &l,
    };
    let (min_edge, min_ex) = per_edge
        .iter()
        .enumerate()
        .min_by_key(|(_, e)| e.min)
        .expect("nonempty");
    let (max_edge, max_ex) = per_edge
        .iter()
        .enumerate()
        .max_by_key(|(_, e)| e.max)
        .expect("nonempty");
    let b = h.edge_count();
    let expected = c / Rational::from_integer(b.into());
    let (min_visit, max_visit) = (min_ex.min, max_ex.max);
    let ratio = if max_visit == 0 {
        Rational::one()
    } else {
        Rational::new(min_visit.into(), max_visit.into())
    };
    let sandwich_holds = Rational::from_integer(min_visit.into()) <= expected
        && expected <= Rational::from_integer(max_visit.into());
    Ok(UniformityReport {
        min_witness: window(min_edge, &min_ex.min_start),
        max_witness: window(max_edge, &max_ex.max_start),
        spec,
        edges: b,
        min_visit,
        max_visit,
        expected,
        ratio,
        sandwich_holds,
        case_label: None,
    })
}

/// Case A iff `min/max ≥ 1 − ε`. Requires `0 < ε < 1/2`.
pub fn classify_case(report: &UniformityReport, eps: &Rational) -> Result<CaseLabel> {
    check_eps_half(eps)?;
    Ok(if report.ratio >= Rational::one() - eps {
        CaseLabel::A
    } else {
        CaseLabel::B
    })
}

/// Whether every window of every length `2^j·C/n ≤ 1` on every edge has
/// visiting number within relative error `ε` of `n·L/b`.
pub fn ladder_passes(h: &EdgeHeights, c: &Rational, eps: &Rational) -> Result<bool> {
    let n = Rational::from_integer(h.n.into());
    let b = Rational::from_integer(h.edge_count().into());
    let mut len = c / &n;
    if !len.is_positive() {
        return Err(Error::InvalidArgument("C must be positive".into()));
    }
    while len <= Rational::one() {
        let per_edge = per_edge_extremes(h, &len)?;
        let expected = &n * &len / &b;
        let tolerance = eps * &expected;
        let min = per_edge.iter().map(|e| e.min).min().expect("nonempty");
        let max = per_edge.iter().map(|e| e.max).max().expect("nonempty");
        let over = Rational::from_integer(max.into()) - &expected;
        let under = &expected - Rational::from_integer(min.into());
        if over >= tolerance || under >= tolerance {
            return Ok(false);
        }
        len *= Rational::from_integer(2.into());
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Probe {
    #[serde(serialize_with = "serialize_rational")]
    pub c: Rational,
    pub passed: bool,
}

/// Result of a threshold search: `hi` passes the ladder check, `lo` (when
/// present) fails it, and `hi/lo ≤ 1.05`. `lo` is absent when `C = 1`
/// already passes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdBracket {
    pub n: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub eps: Rational,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub lo: Option<Rational>,
    #[serde(serialize_with = "serialize_rational")]
    pub hi: Rational,
    pub probes: Vec<Probe>,
}

fn serialize_opt_rational<S: serde::Serializer>(
    v: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => serialize_rational(r, s),
        None => s.serialize_none(),
    }
}

/// Bracket width for threshold bisection.
pub const BRACKET_FACTOR: (i64, i64) = (105, 100);

fn rational_to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// A rational close to `√(lo·hi)`, strictly inside `(lo, hi)`.
fn geometric_mid(lo: &Rational, hi: &Rational) -> Rational {
    let g = (rational_to_f64(lo) * rational_to_f64(hi)).sqrt();
    let scaled = (g * 1000.0).round();
    let mid = Rational::new(BigInt::from(scaled as i64), BigInt::from(1000));
    if &mid > lo && &mid < hi {
        mid
    } else {
        (lo + hi) / Rational::from_integer(2.into())
    }
}

/// Multiplicative bisection over `C ∈ [1, n]` for the smallest `C` passing
/// [`ladder_passes`].
pub fn threshold_search(h: &EdgeHeights, eps: &Rational) -> Result<ThresholdBracket> {
    let mut probes = Vec::new();
    let mut probe = |c: &Rational| -> Result<bool> {
        let passed = ladder_passes(h, c, eps)?;
        probes.push(Probe { c: c.clone(), passed });
        Ok(passed)
    };
    let one = Rational::one();
    if probe(&one)? {
        return Ok(ThresholdBracket {
            n: h.n,
            eps: eps.clone(),
            lo: None,
            hi: one,
            probes,
        });
    }
    let mut lo = one;
    let mut hi = Rational::from_integer(h.n.into());
    if !probe(&hi)? {
        return Err(Error::NoThresholdBelowN(h.n));
    }
    let factor = Rational::new(BRACKET_FACTOR.0.into(), BRACKET_FACTOR.1.into());
    while &hi / &lo > factor {
        let mid = geometric_mid(&lo, &hi);
        if probe(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdBracket {
        n: h.n,
        eps: eps.clone(),
        lo: Some(lo),
        hi,
        probes,
    })
}

/// Threshold search for the crossing set of a surface; `0 < ε < 1/2`.
pub fn theorem1_threshold(h: &EdgeHeights, eps: &Rational) -> Result<ThresholdBracket> {
    check_eps_half(eps)?;
    threshold_search(h, eps)
}

/// `|I ∩ X_n| ≤ A·n·|I| + 1`.
pub fn crossing_bound_holds(h: &EdgeHeights, interval: &EdgeInterval, digit_bound: u64) -> bool {
    let count = Quad::from_integer(h.count(interval));
    let bound = &interval
        .length()
        .mul_integer(&BigInt::from(digit_bound).checked_mul(&BigInt::from(h.n)).expect("mul"))
        + &Quad::one();
    count.cmp_exact(&bound) != Ordering::Greater
}

/// Outcome of the two-sided comparison between a long window `J` and the
/// maximal short window at scale `C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma3Outcome {
    pub visits: u64,
    pub lower_bound: Quad,
    pub upper_bound: Quad,
    pub holds: bool,
}

/// Precomputed scale-`C` data for checking many long windows.
pub struct Lemma3Context<'a> {
    heights: &'a EdgeHeights,
    report: UniformityReport,
    eps: Rational,
}

impl<'a> Lemma3Context<'a> {
    /// Fails with `PreconditionNotMet` unless Case A holds at scale `C`.
    pub fn new(heights: &'a EdgeHeights, c: &Rational, eps: &Rational) -> Result<Self> {
        let mut report = family_extremes(heights, c)?;
        if report.classify(eps)? != CaseLabel::A {
            return Err(Error::PreconditionNotMet(format!(
                "Case B at C = {}: min/max = {}",
                format_rational(c),
                format_rational(&report.ratio)
            )));
        }
        Ok(Self {
            heights,
            report,
            eps: eps.clone(),
        })
    }

    pub fn report(&self) -> &UniformityReport {
        &self.report
    }

    fn short_length(&self) -> Rational {
        self.report.spec.length()
    }

    /// `(1−ε)(|J|/|I₁| − 3)·V(I₁) ≤ V(J) ≤ (|J|/|I₁| + 3)·V(I₁)` for
    /// `|J| ≥ 3C/n`.
    pub fn check(&self, j: &EdgeInterval) -> Result<Lemma3Outcome> {
        let short = Quad::from(self.short_length());
        let three = Quad::from_integer(3);
        let len = j.length();
        if len.try_cmp(&(&three * &short))?.is_lt() {
            return Err(Error::PreconditionNotMet(format!(
                "|J| = {len} is below 3C/n"
            )));
        }
        let ratio = len.checked_div(&short)?;
        let v1 = Quad::from_integer(self.report.max_visit);
        let keep = Quad::from(Rational::one() - &self.eps);
        let lower_bound = &(&keep * &(&ratio - &three)) * &v1;
        let upper_bound = &(&ratio + &three) * &v1;
        let visits = self.heights.count(j);
        let v = Quad::from_integer(visits);
        let holds = lower_bound.cmp_exact(&v).is_le() && v.cmp_exact(&upper_bound).is_le();
        Ok(Lemma3Outcome {
            visits,
            lower_bound,
            upper_bound,
            holds,
        })
    }

    /// `|V(J) − n|J|/b| ≤ 3ε/(1−ε) · n|J|/b`.
    pub fn relative_error_bound_holds(&self, j: &EdgeInterval) -> bool {
        let h = self.heights;
        let expected = j
            .length()
            .mul_integer(&BigInt::from(h.n))
            .div_integer(&BigInt::from(h.edge_count()))
            .expect("b > 0");
        let factor = Rational::from_integer(3.into()) * &self.eps / (Rational::one() - &self.eps);
        let tolerance = &Quad::from(factor) * &expected;
        let deviation = (&Quad::from_integer(h.count(j)) - &expected).abs();
        deviation.cmp_exact(&tolerance).is_le()
    }
}

/// One-shot form of [`Lemma3Context::check`].
pub fn lemma3_check(
    h: &EdgeHeights,
    c: &Rational,
    j: &EdgeInterval,
    eps: &Rational,
) -> Result<Lemma3Outcome> {
    Lemma3Context::new(h, c, eps)?.check(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn pts(v: &[(i64, i64)]) -> Vec<Quad> {
        v.iter().map(|&(n, d)| Quad::from(ratio(n, d))).collect()
    }

    fn count_window(points: &[Quad], a: &Quad, len: &Quad) -> u64 {
        let b = a + len;
        points
            .iter()
            .filter(|y| y.cmp_exact(a).is_ge() && y.cmp_exact(&b).is_lt())
            .count() as u64
    }

    #[test]
    fn three_points_example() {
        // Dense scan at 1/200 resolution: windows of length 0.35 on
        // {0.2, 0.5, 0.8} see between 1 and 2 points; no window inside
        // [0, 1] avoids all three because the gaps are 0.3 < 0.35.
        let p = pts(&[(1, 5), (1, 2), (4, 5)]);
        let ex = visiting_extremes(&p, &ratio(7, 20)).unwrap();
        assert_eq!((ex.min, ex.max), (1, 2));
        let l = Quad::from(ratio(7, 20));
        assert_eq!(count_window(&p, &ex.min_start, &l), 1);
        assert_eq!(count_window(&p, &ex.max_start, &l), 2);
    }

    #[test]
    fn full_window_and_empty_points() {
        let p = pts(&[(1, 5), (1, 2), (4, 5)]);
        let ex = visiting_extremes(&p, &ratio(1, 1)).unwrap();
        assert_eq!((ex.min, ex.max), (3, 3));
        let ex = visiting_extremes(&[], &ratio(1, 4)).unwrap();
        assert_eq!((ex.min, ex.max), (0, 0));
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(visiting_extremes(&[], &ratio(0, 1)).is_err());
        assert!(visiting_extremes(&[], &ratio(5, 4)).is_err());
    }

    #[test]
    fn open_side_minimum() {
        // No window of length 1/4 holds both 1/4 and 1/2; windows starting
        // after 1/2 hold neither.
        let p = pts(&[(1, 4), (1, 2)]);
        let ex = visiting_extremes(&p, &ratio(1, 4)).unwrap();
        assert_eq!((ex.min, ex.max), (0, 1));
        let l = Quad::from(ratio(1, 4));
        assert_eq!(count_window(&p, &ex.min_start, &l), 0);
    }

    #[test]
    fn family_spec_bounds() {
        assert!(IntervalFamilySpec::new(10, ratio(1, 1)).is_err());
        assert!(IntervalFamilySpec::new(10, ratio(10, 1)).is_err());
        assert!(IntervalFamilySpec::new(10, ratio(3, 2)).is_ok());
    }

    #[test]
    fn classification() {
        let h4 = EdgeHeights::new(4, vec![pts(&[(1, 8), (3, 8), (5, 8), (7, 8)])]).unwrap();
        assert!(matches!(
            family_extremes(&h4, &ratio(1, 1)),
            Err(Error::InvalidArgument(_))
        ));
        let h8 = EdgeHeights::new(
            8,
            vec![pts(&[(1, 16), (3, 16), (5, 16), (7, 16), (9, 16), (11, 16), (13, 16), (15, 16)])],
        )
        .unwrap();
        let mut rep = family_extremes(&h8, &ratio(2, 1)).unwrap();
        assert_eq!((rep.min_visit, rep.max_visit), (2, 2));
        assert_eq!(rep.classify(&ratio(1, 10)).unwrap(), CaseLabel::A);
        assert!(rep.sandwich_holds);
        rep.min_visit = 0;
        rep.ratio = ratio(0, 1);
        assert_eq!(classify_case(&rep, &ratio(1, 10)).unwrap(), CaseLabel::B);
        assert!(classify_case(&rep, &ratio(1, 2)).is_err());
    }
}
