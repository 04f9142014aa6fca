//! Event-driven tracing of a straight line of irrational slope `α > 0` on a
//! square-tiled surface.
//!
//! Inside a square the line moves from `(x, y)` toward either the right
//! edge or the top edge; whichever it reaches first is decided exactly by
//! comparing `α·(1 − x)` with `1 − y`. A tie means the line runs into a
//! corner, which cannot happen for irrational `α` and a rational starting
//! height, so [`Error::CornerHit`] always signals an arithmetic bug.
//!
//! Lengths are tracked as horizontal extent. The arc length of a piece is
//! its horizontal extent times `√(1 + α²)`; that factor is only applied
//! when reporting, since it generally lies outside `Q(√d)`.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_rational, serialize_rational, QuadraticIrrational, Rational};
use crate::surface::PolysquareSurface;
use crate::uniformity::EdgeHeights;

type Quad = QuadraticIrrational;

/// Where a trajectory starts: on the left edge of `square` at height `y0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Start {
    pub square: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub y0: Rational,
}

impl Default for Start {
    fn default() -> Self {
        Self {
            square: 0,
            y0: Rational::new(1.into(), 2.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowState {
    pub square: usize,
    pub x: Quad,
    pub y: Quad,
    /// Horizontal extent travelled so far.
    pub extent: Quad,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Event {
    RightCross { from: usize, to: usize },
    TopCross { from: usize, to: usize },
}

/// A slope bound to a surface.
#[derive(Clone, Debug)]
pub struct Flow<'a> {
    surface: &'a PolysquareSurface,
    alpha: Quad,
    inv_alpha: Quad,
}

impl<'a> Flow<'a> {
    pub fn new(surface: &'a PolysquareSurface, alpha: &Quad) -> Result<Self> {
        if alpha.is_rational() || !alpha.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "slope must be a positive irrational, got {alpha}"
            )));
        }
        if let Some(v) = surface.validate().first() {
            return Err(Error::InvariantViolation(v.to_string()));
        }
        Ok(Self {
            surface,
            alpha: alpha.clone(),
            inv_alpha: alpha.recip()?,
        })
    }

    pub fn alpha(&self) -> &Quad {
        &self.alpha
    }

    /// Requires `0 < y0 < 1` and a valid square index.
    pub fn start_state(&self, start: &Start) -> Result<FlowState> {
        if start.square >= self.surface.squares() {
            return Err(Error::InvalidArgument(format!(
                "square {} out of range",
                start.square
            )));
        }
        if !start.y0.is_positive() || start.y0 >= Rational::one() {
            return Err(Error::InvalidArgument(format!(
                "need 0 < y0 < 1, got {}",
                format_rational(&start.y0)
            )));
        }
        Ok(FlowState {
            square: start.square,
            x: Quad::zero(),
            y: Quad::from(&start.y0),
            extent: Quad::zero(),
        })
    }

    /// Horizontal run and the event that ends the current piece.
    fn next_event(&self, st: &FlowState) -> Result<(Quad, Event)> {
        let run = &Quad::one() - &st.x;
        let rise = &Quad::one() - &st.y;
        let s = st.square;
        match (&self.alpha * &run).cmp_exact(&rise) {
            std::cmp::Ordering::Less => Ok((
                run,
                Event::RightCross {
                    from: s,
                    to: self.surface.right()[s],
                },
            )),
            std::cmp::Ordering::Greater => Ok((
                &rise * &self.inv_alpha,
                Event::TopCross {
                    from: s,
                    to: self.surface.top()[s],
                },
            )),
            std::cmp::Ordering::Equal => Err(Error::CornerHit { square: s }),
        }
    }

    /// Advances to the next edge crossing.
    pub fn step(&self, st: &FlowState) -> Result<(FlowState, Event)> {
        if st.x.is_zero() && st.y.is_zero() {
            return Err(Error::CornerHit { square: st.square });
        }
        let (dx, event) = self.next_event(st)?;
        let extent = &st.extent + &dx;
        let next = match event {
            Event::RightCross { to, .. } => FlowState {
                square: to,
                x: Quad::zero(),
                y: &st.y + &(&self.alpha * &dx),
                extent,
            },
            Event::TopCross { to, .. } => FlowState {
                square: to,
                x: &st.x + &dx,
                y: Quad::zero(),
                extent,
            },
        };
        Ok((next, event))
    }

    /// `√(1 + α²)`, the arc length per unit of horizontal extent.
    pub fn length_factor(&self) -> f64 {
        let a = self.alpha.to_f64();
        (1.0 + a * a).sqrt()
    }
}

/// One-shot form of [`Flow::step`].
pub fn step(
    st: &FlowState,
    surface: &PolysquareSurface,
    alpha: &Quad,
) -> Result<(FlowState, Event)> {
    Flow::new(surface, alpha)?.step(st)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    /// Ordinal, starting at 1.
    pub k: u64,
    pub edge: usize,
    pub height: Quad,
    /// Horizontal extent from the start to this crossing.
    pub extent: Quad,
}

/// The first `n` crossings of the trajectory with vertical edges.
#[derive(Clone, Debug)]
pub struct CrossingSet {
    pub alpha: Quad,
    pub surface: PolysquareSurface,
    pub start: Start,
    pub crossings: Vec<Crossing>,
}

impl CrossingSet {
    pub fn n(&self) -> u64 {
        self.crossings.len() as u64
    }

    /// Heights grouped per edge and sorted, ready for window analytics.
    pub fn edge_heights(&self) -> EdgeHeights {
        let mut edges = vec![Vec::new(); self.surface.squares()];
        for c in &self.crossings {
            edges[c.edge].push(c.height.clone());
        }
        EdgeHeights::new(self.n(), edges).expect("counts agree")
    }
}

/// Traces until `n` vertical-edge crossings have been recorded.
pub fn trace_crossings(
    surface: &PolysquareSurface,
    alpha: &Quad,
    start: &Start,
    n: u64,
) -> Result<CrossingSet> {
    let flow = Flow::new(surface, alpha)?;
    let mut st = flow.start_state(start)?;
    let mut crossings = Vec::with_capacity(n as usize);
    while (crossings.len() as u64) < n {
        let (next, event) = flow.step(&st)?;
        if let Event::RightCross { to, .. } = event {
            crossings.push(Crossing {
                k: crossings.len() as u64 + 1,
                edge: to,
                height: next.y.clone(),
                extent: next.extent.clone(),
            });
        }
        st = next;
    }
    Ok(CrossingSet {
        alpha: alpha.clone(),
        surface: surface.clone(),
        start: start.clone(),
        crossings,
    })
}

/// A straight piece of the trajectory inside one square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentPiece {
    pub square: usize,
    pub entry: (Quad, Quad),
    pub exit: (Quad, Quad),
}

/// The pieces covering horizontal extent `extent` from the start.
pub fn trace_segment(
    surface: &PolysquareSurface,
    alpha: &Quad,
    start: &Start,
    extent: &Quad,
) -> Result<Vec<SegmentPiece>> {
    let flow = Flow::new(surface, alpha)?;
    let mut st = flow.start_state(start)?;
    let mut pieces = Vec::new();
    loop {
        let remaining = extent - &st.extent;
        if !remaining.is_positive() {
            return Ok(pieces);
        }
        let (dx, _) = flow.next_event(&st)?;
        if dx.cmp_exact(&remaining).is_ge() {
            let exit = (&st.x + &remaining, &st.y + &(&flow.alpha * &remaining));
            pieces.push(SegmentPiece {
                square: st.square,
                entry: (st.x.clone(), st.y.clone()),
                exit,
            });
            return Ok(pieces);
        }
        let (next, event) = flow.step(&st)?;
        let exit = match event {
            Event::RightCross { .. } => (Quad::one(), next.y.clone()),
            Event::TopCross { .. } => (next.x.clone(), Quad::one()),
        };
        pieces.push(SegmentPiece {
            square: st.square,
            entry: (st.x.clone(), st.y.clone()),
            exit,
        });
        st = next;
    }
}

/// Coverage length for one `m`: the trajectory gets within `1/m` of every
/// grid centre at resolution `1/(2m)` once it has made `crossings`
/// vertical-edge crossings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageEstimate {
    pub m: u64,
    pub crossings: u64,
    /// Horizontal extent at which the last centre was first reached.
    pub first_cover_extent: f64,
    pub arc_length: f64,
    pub arc_length_per_m: f64,
}

/// Step budget for the coverage search; far above anything a badly
/// approximable slope needs at `m ≤ 2¹⁰`.
const COVERAGE_STEP_LIMIT: u64 = 50_000_000;

/// Smallest whole number of crossings `k ≥ 1` after which the trajectory
/// has come within `1/m` of every grid centre `((i+½)/2m, (j+½)/2m)` of
/// every square. Distances are measured inside each square's own chart,
/// which ignores shortcuts across gluings, so the result is an upper bound
/// for the true covering length. Reported as arc length `k·√(1+α²)`.
pub fn coverage_radius_estimate(
    surface: &PolysquareSurface,
    alpha: &Quad,
    start: &Start,
    m: u64,
) -> Result<CoverageEstimate> {
    if m == 0 {
        return Err(Error::InvalidArgument("need m >= 1".into()));
    }
    let flow = Flow::new(surface, alpha)?;
    let mut st = flow.start_state(start)?;
    let grid = 2 * m as usize;
    let radius = 1.0 / m as f64;
    let cell = 1.0 / grid as f64;
    let mut covered = vec![vec![false; grid * grid]; surface.squares()];
    let mut uncovered = surface.squares() * grid * grid;
    let mut last_hit = 0.0f64;
    let mut steps = 0u64;
    while uncovered > 0 {
        steps += 1;
        if steps > COVERAGE_STEP_LIMIT {
            return Err(Error::PreconditionNotMet(format!(
                "coverage at m = {m} not reached within {COVERAGE_STEP_LIMIT} steps"
            )));
        }
        let (next, event) = flow.step(&st)?;
        let (x0, y0) = (st.x.to_f64(), st.y.to_f64());
        let (x1, y1) = match event {
            Event::RightCross { .. } => (1.0, next.y.to_f64()),
            Event::TopCross { .. } => (next.x.to_f64(), 1.0),
        };
        let h0 = st.extent.to_f64();
        let (dx, dy) = (x1 - x0, y1 - y0);
        let len2 = dx * dx + dy * dy;
        let marks = &mut covered[st.square];
        let i_lo = (((x0 - radius) / cell - 0.5).floor().max(0.0)) as usize;
        let i_hi = (((x1 + radius) / cell - 0.5).ceil().max(0.0) as usize).min(grid - 1);
        let j_lo = (((y0 - radius) / cell - 0.5).floor().max(0.0)) as usize;
        let j_hi = (((y1 + radius) / cell - 0.5).ceil().max(0.0) as usize).min(grid - 1);
        for i in i_lo..=i_hi {
            let cx = (i as f64 + 0.5) * cell;
            for j in j_lo..=j_hi {
                let slot = i * grid + j;
                if marks[slot] {
                    continue;
                }
                let cy = (j as f64 + 0.5) * cell;
                if let Some(t) = first_within(x0, y0, dx, dy, len2, cx, cy, radius) {
                    marks[slot] = true;
                    uncovered -= 1;
                    last_hit = last_hit.max(h0 + t * dx);
                }
            }
        }
        st = next;
    }
    let crossings = (last_hit.ceil() as u64).max(1);
    let arc_length = crossings as f64 * flow.length_factor();
    Ok(CoverageEstimate {
        m,
        crossings,
        first_cover_extent: last_hit,
        arc_length,
        arc_length_per_m: arc_length / m as f64,
    })
}

/// Smallest `t ∈ [0, 1]` with `|P + t·D − C| ≤ r`, if any.
#[allow(clippy::too_many_arguments)]
fn first_within(px: f64, py: f64, dx: f64, dy: f64, len2: f64, cx: f64, cy: f64, r: f64) -> Option<f64> {
    let (fx, fy) = (px - cx, py - cy);
    let c = fx * fx + fy * fy - r * r;
    if c <= 0.0 {
        return Some(0.0);
    }
    if len2 == 0.0 {
        return None;
    }
    let b = fx * dx + fy * dy;
    let disc = b * b - len2 * c;
    if disc < 0.0 {
        return None;
    }
    let t = (-b - disc.sqrt()) / len2;
    (0.0..=1.0).contains(&t).then_some(t)
}

/// Coverage estimates for `m = 1, 2, 4, …, ≤ mmax`, computed in parallel.
pub fn superdensity_profile(
    surface: &PolysquareSurface,
    alpha: &Quad,
    start: &Start,
    mmax: u64,
) -> Result<Vec<CoverageEstimate>> {
    let ms: Vec<u64> = std::iter::successors(Some(1u64), |m| m.checked_mul(2))
        .take_while(|&m| m <= mmax)
        .collect();
    ms.par_iter()
        .map(|&m| coverage_radius_estimate(surface, alpha, start, m))
        .collect()
}

/// Horizontal extent as a rational multiple of `√(1+α²)`: an arc length
/// `t·√(1+α²)` corresponds to extent `t`.
pub fn extent_for_arc_multiple(t: &Rational) -> Quad {
    Quad::from(t)
}

/// Integer horizontal extent `k` as a quadratic value.
pub fn extent_of_crossings(k: u64) -> Quad {
    Quad::from_integer(BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn phi() -> Quad {
        Quad::phi()
    }

    #[test]
    fn torus_first_crossing() {
        let torus = PolysquareSurface::torus();
        let flow = Flow::new(&torus, &phi()).unwrap();
        let mut st = flow.start_state(&Start::default()).unwrap();
        let expected = (&Quad::from(ratio(1, 2)) + &phi()).frac();
        loop {
            let (next, ev) = flow.step(&st).unwrap();
            st = next;
            if let Event::RightCross { to, .. } = ev {
                assert_eq!(to, 0);
                assert_eq!(st.y, expected);
                assert_eq!(st.extent, Quad::one());
                break;
            }
        }
    }

    #[test]
    fn steep_slopes_cross_tops_between_verticals() {
        let l3 = PolysquareSurface::l3();
        let flow = Flow::new(&l3, &phi()).unwrap();
        let mut st = flow.start_state(&Start::default()).unwrap();
        let mut tops_since_right = 0;
        for _ in 0..200 {
            let (next, ev) = flow.step(&st).unwrap();
            match ev {
                Event::TopCross { .. } => tops_since_right += 1,
                Event::RightCross { .. } => {
                    assert!(tops_since_right >= 1);
                    tops_since_right = 0;
                }
            }
            st = next;
        }
    }

    #[test]
    fn corner_states_are_rejected() {
        let torus = PolysquareSurface::torus();
        let flow = Flow::new(&torus, &phi()).unwrap();
        let corner = FlowState {
            square: 0,
            x: Quad::zero(),
            y: Quad::zero(),
            extent: Quad::zero(),
        };
        assert_eq!(flow.step(&corner), Err(Error::CornerHit { square: 0 }));
        let bad = Start {
            square: 0,
            y0: ratio(0, 1),
        };
        assert!(flow.start_state(&bad).is_err());
        assert!(Flow::new(&torus, &Quad::from(ratio(3, 2))).is_err());
        assert!(Flow::new(&torus, &-phi()).is_err());
    }

    #[test]
    fn l3_first_ten_crossings() {
        let set = trace_crossings(&PolysquareSurface::l3(), &phi(), &Start::default(), 10).unwrap();
        let edges: Vec<usize> = set.crossings.iter().map(|c| c.edge).collect();
        assert_eq!(edges, vec![1, 0, 1, 0, 1, 0, 2, 2, 2, 1]);
        let half = Quad::from(ratio(1, 2));
        for c in &set.crossings {
            let expected = (&half + &phi().mul_integer(&BigInt::from(c.k))).frac();
            assert_eq!(c.height, expected);
            assert_eq!(c.extent, Quad::from_integer(c.k as i64));
        }
    }

    #[test]
    fn zero_crossings() {
        let set = trace_crossings(&PolysquareSurface::l3(), &phi(), &Start::default(), 0).unwrap();
        assert!(set.crossings.is_empty());
    }

    #[test]
    fn segments() {
        let torus = PolysquareSurface::torus();
        assert!(trace_segment(&torus, &phi(), &Start::default(), &Quad::zero())
            .unwrap()
            .is_empty());
        let pieces = trace_segment(&torus, &phi(), &Start::default(), &Quad::one()).unwrap();
        // 1/2 + φ ≈ 2.118: two top crossings, then the right edge.
        assert_eq!(pieces.len(), 3);
        assert_eq!(pieces.last().unwrap().exit.0, Quad::one());
        let total: Quad = pieces
            .iter()
            .fold(Quad::zero(), |acc, p| &acc + &(&p.exit.0 - &p.entry.0));
        assert_eq!(total, Quad::one());
        // a partial final piece
        let pieces = trace_segment(&torus, &phi(), &Start::default(), &Quad::from(ratio(1, 10))).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].exit.0, Quad::from(ratio(1, 10)));
    }

    #[test]
    fn segment_squares_match_crossing_edges() {
        let l3 = PolysquareSurface::l3();
        let set = trace_crossings(&l3, &phi(), &Start::default(), 25).unwrap();
        let pieces = trace_segment(&l3, &phi(), &Start::default(), &extent_of_crossings(25)).unwrap();
        let right_exits: Vec<usize> = pieces
            .iter()
            .filter(|p| p.exit.0 == Quad::one())
            .map(|p| l3.right()[p.square])
            .collect();
        let edges: Vec<usize> = set.crossings.iter().map(|c| c.edge).collect();
        assert_eq!(right_exits, edges);
    }

    #[test]
    fn coverage_on_torus_at_m1_is_one_crossing() {
        let est = coverage_radius_estimate(&PolysquareSurface::torus(), &phi(), &Start::default(), 1)
            .unwrap();
        assert_eq!(est.crossings, 1);
    }

    #[test]
    fn first_within_geometry() {
        // horizontal segment from (0,0) to (1,0); centre (0.5, 0.3), r = 0.5
        let t = first_within(0.0, 0.0, 1.0, 0.0, 1.0, 0.5, 0.3, 0.5).unwrap();
        assert!((t - 0.1).abs() < 1e-12);
        assert_eq!(first_within(0.0, 0.0, 1.0, 0.0, 1.0, 0.5, 0.8, 0.5), None);
        assert_eq!(first_within(0.0, 0.0, 1.0, 0.0, 1.0, 0.1, 0.1, 0.5), Some(0.0));
    }
}
