//! Exact distributions, characteristic functions, limit laws and absorption
//! probabilities for one-dimensional correlated (persistent) random walks.
//!
//! The walk remembers the direction of its last step: it steps left again with
//! probability `a` after a left step and right again with probability `d`
//! after a right step. Position and chirality together form a Markov chain,
//! and the one-step operators `P` (left) and `Q` (right) together with two
//! auxiliary matrices `R`, `S` give a basis of 2x2 matrices with a closed
//! multiplication table ([`pqrs`]). Path sums over that basis yield the exact
//! law of `X_n` ([`distribution`]), its characteristic function and moments
//! ([`spectral`]), both scaling limits ([`limits`]) and absorption
//! probabilities with one or two barriers ([`absorption`]). A seeded Monte
//! Carlo engine ([`montecarlo`]) checks all of it independently.
//!
//! All numerical code is generic over the scalar type. The PQRS algebra, the
//! path sums and the first-passage recursions only need field operations and
//! run on exact rationals; everything else needs [`scalar::Real`]. The type
//! aliases at the crate root fix the scalar to `f64`.

pub mod absorption;
pub mod distribution;
pub mod error;
pub mod limits;
pub mod montecarlo;
pub mod pqrs;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::{Field, Real};

/// Walk parameters over `f64`.
pub type Walk = pqrs::WalkParameters<f64>;
/// Walk parameters over `f32`.
pub type Walk32 = pqrs::WalkParameters<f32>;
/// PQRS-basis matrix over `f64`.
pub type Pqrs = pqrs::PqrsMatrix<f64>;
/// Raw 2x2 matrix over `f64`.
pub type Matrix2 = pqrs::RawMatrix2<f64>;
/// Initial chirality distribution over `f64`.
pub type Phi = distribution::InitialDistribution<f64>;
/// Position law over `f64`.
pub type Pmf = distribution::Distribution<f64>;
/// Complex characteristic-function value over `f64`.
pub type Complex = num_complex::Complex<f64>;
/// Mixed ballistic limit law over `f64`.
pub type MixedLaw = limits::MixedLimitLaw<f64>;
/// Absorption probability record over `f64`.
pub type Absorption = absorption::AbsorptionResult<f64>;
/// Monte Carlo configuration over `f64`.
pub type Simulation = montecarlo::SimulationConfig<f64>;
/// Monte Carlo summary over `f64`.
pub type Stats = montecarlo::SampleStats<f64>;
