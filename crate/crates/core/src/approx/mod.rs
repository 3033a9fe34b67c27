//! Normal approximation of the unique count and of the binomial baseline.
//!
//! Quality is measured two ways: the maximum absolute difference between the
//! exact CDF and the continuity-corrected normal CDF (MADCD), and the
//! Jensen-Shannon divergence between the exact pmf and a discretised normal.
//! [`heuristic`] holds the acceptance rules and [`grid`] the parameter scans.

pub mod binomial;
pub mod grid;
pub mod heuristic;
pub mod metrics;
pub mod normal;
mod report;

pub use binomial::{
    binomial_distribution, binomial_pmf, binomial_rules, binomial_rules_with, BinomialRules,
    BinomialSpec, SkewnessRule,
};
pub use grid::{
    boundary_scan, madcd_grid, BoundaryEntry, BoundaryScan, CellMetrics, CellParams, Grid,
    GridCell, GridOptions, GridSpec,
};
pub use heuristic::{heuristic_category, heuristic_single};
pub use metrics::{discretize_normal, jsd, jsd_with_base, madcd, LogBase};
pub use normal::{normal_approx_for, standard_normal_cdf, NormalApprox, CONTINUITY_SHIFT};
pub use report::{approx_report, ApproxReport};
