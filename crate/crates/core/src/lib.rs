//! Exact and approximate distribution of the number of unique original items
//! in a bootstrap sample.
//!
//! Drawing `A` items with replacement from `N` originals leaves `k` distinct
//! items. The crate computes the exact law of `k` with arbitrary-precision
//! integers, its moments, the per-category joint law when the items are
//! partitioned into classes, the quality of the continuity-corrected normal
//! approximation, and a seeded Monte Carlo sampler used as an independent
//! check.
//!
//! Modules:
//!
//! * [`exact`] - Stirling numbers, falling factorials and the exact pmf of `k`.
//! * [`moments`] - exact mean, variance, raw and central moments, asymptotics.
//! * [`approx`] - normal approximation, MADCD/JSD metrics, heuristics, grids.
//! * [`multivariate`] - joint law of unique counts per category.
//! * [`simulate`] - reproducible Monte Carlo sampling.
//! * [`output`] - CSV/JSON rendering shared by the command-line tool.

pub mod approx;
pub mod error;
pub mod exact;
pub mod moments;
pub mod multivariate;
pub mod output;
pub mod simulate;

pub use error::{Error, Result};
pub use exact::{
    cdf_unique, distribution, excluded_distribution, falling_factorial, pmf_unique, stirling2,
    BigCount, ExactProb, LatticePmf, StirlingTable, UniqueCountDistribution,
};
