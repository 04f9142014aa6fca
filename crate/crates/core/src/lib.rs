//! Exact simulation of straight-line flow on square-tiled translation
//! surfaces and on the circle, with visiting-number analytics for
//! microscopic intervals.
//!
//! All positions are elements of a single real quadratic field, so every
//! comparison made along the way (event ordering, interval membership,
//! window extremes) is decided exactly.
//!
//! Module map:
//!
//! * [`exact`]: quadratic-field and rational arithmetic.
//! * [`cfrac`]: continued fractions, convergents, Ostrowski numeration.
//! * [`rotation`]: the orbit `{kα}`, visiting numbers, residue map and
//!   the three-solution counting lemma.
//! * [`surface`]: square-tiled surfaces as pairs of gluing permutations.
//! * [`flow`]: event-driven tracing of a geodesic of irrational slope.
//! * [`uniformity`]: sliding-window extremes, thresholds and case checks.
//! * [`sampling`]: seeded random windows for reproducible sweeps.

pub mod cfrac;
pub mod error;
pub mod exact;
pub mod flow;
pub mod rotation;
pub mod sampling;
pub mod surface;
pub mod uniformity;

pub use cfrac::{ContinuedFraction, Convergent, OstrowskiDigits};
pub use error::{Error, Result};
pub use exact::{QuadraticIrrational, Rational};
pub use flow::{Crossing, CrossingSet, FlowState, Start};
pub use rotation::{OrbitPrefix, UnitInterval};
pub use surface::PolysquareSurface;
pub use uniformity::{CaseLabel, ThresholdBracket, UniformityReport};
