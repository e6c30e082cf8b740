//! Random sequential placement of blocks of `k` adjacent positions on a
//! string of `n` positions, run until no gap of length `k` or more remains.
//!
//! The crate studies the vector `X_n` of terminal spacing counts
//! (spacings of length `1..k`) along several independent routes:
//!
//! * [`simulator`]: seedable Monte Carlo of the process itself;
//! * [`exact`]: the exact rational law of `X_n` for small `n`, built two ways;
//! * [`moments`]: exact recursions for means, covariances and projected
//!   moments up to large `n`, and extrapolation of the growth constants;
//! * [`asymptotics`]: the same constants as integrals evaluated by
//!   Gauss-Legendre quadrature;
//! * [`verify`]: the cross-check suite that ties the routes together;
//! * [`cli`]: the `spacings` command-line front end.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod exact;
pub mod model;
pub mod moments;
mod numeric;
pub mod simulator;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use model::{vacancy, validate_counts, GapCounts, ProcessParams, VacancyValue};
pub use numeric::CompensatedSum;
