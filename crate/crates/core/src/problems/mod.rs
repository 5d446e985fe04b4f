//! Test problems as entry oracles: RPY kernel matrices on the line, the
//! exterior Laplace double-layer equation, the exterior Helmholtz
//! combined-field equation, and random exactly-HODLR matrices.

pub mod bessel;
pub mod contour;
pub mod helmholtz;
pub mod laplace;
pub mod rpy;
pub mod synthetic;

pub use contour::{Contour, StarCurve};
pub use helmholtz::HelmholtzCombinedField;
pub use laplace::LaplaceDoubleLayer;
pub use rpy::{PointSet1D, RpyOracle, RpyParams};
pub use synthetic::random_hodlr;

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Seeded generator used by every problem.
pub fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Uniform sample from `[-1, 1)` using the top 53 bits.
pub fn uniform(rng: &mut Xoshiro256PlusPlus) -> f64 {
    (rng.next_u64() >> 11) as f64 * (2.0 / (1u64 << 53) as f64) - 1.0
}
