//! Reproducible random windows for sweeps.
//!
//! Endpoints are drawn from the dyadic grid `k / 2^24`, so every sampled
//! window is an exact rational interval.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{format_rational, QuadraticIrrational, Rational};
use crate::uniformity::EdgeInterval;

pub const GRID_BITS: u32 = 24;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn grid() -> u64 {
    1u64 << GRID_BITS
}

/// A uniform grid point in `[0, max]`.
pub fn grid_point<R: Rng + ?Sized>(rng: &mut R, max: &Rational) -> Rational {
    let g = grid();
    let top = (max * Rational::from_integer(g.into()))
        .floor()
        .to_integer()
        .to_u64()
        .unwrap_or(0)
        .min(g);
    Rational::new(BigInt::from(rng.gen_range(0..=top)), BigInt::from(g))
}

/// A window `[a, a + len)` on a uniformly chosen edge, with `a` a grid
/// point in `[0, 1 − len]`.
pub fn random_window<R: Rng + ?Sized>(
    rng: &mut R,
    edges: usize,
    len: &Rational,
) -> Result<EdgeInterval> {
    if edges == 0 {
        return Err(Error::InvalidArgument("need at least one edge".into()));
    }
    if !len.is_positive() || *len > Rational::one() {
        return Err(Error::InvalidArgument(format!(
            "window length must be in (0, 1], got {}",
            format_rational(len)
        )));
    }
    let edge = rng.gen_range(0..edges);
    let lower = grid_point(rng, &(Rational::one() - len));
    let upper = &lower + len;
    EdgeInterval::new(
        edge,
        QuadraticIrrational::from(lower),
        QuadraticIrrational::from(upper),
    )
}
