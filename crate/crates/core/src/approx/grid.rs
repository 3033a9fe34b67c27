//! Parameter scans: MADCD and JSD over `(N, A)` or `(n_b, p)` grids, and
//! along the edges of the single-sample acceptance region.
//!
//! Cells are independent and evaluated in parallel; results are collected
//! in row-major parameter order, so output never depends on scheduling.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{distribution, LatticePmf};

use super::binomial::{binomial_distribution, binomial_rules_with, BinomialSpec, SkewnessRule};
use super::heuristic::{heuristic_single, single_acceptance_interval};
use super::metrics::{discretize_normal, jsd, madcd};
use super::normal::{normal_approx_for, NormalApprox};

/// Default upper bound on `N` and `A` for exact unique-count scans.
pub const UNIQUE_GRID_CAP: u32 = 150;
/// Default upper bound on `n_b` for binomial scans.
pub const BINOMIAL_GRID_CAP: u32 = 400;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridSpec {
    /// Exact unique-count law against its normal approximation.
    Unique {
        n: RangeInclusive<u32>,
        a: RangeInclusive<u32>,
    },
    /// Binomial baseline, `p = i / p_denominator` for `i = 1..=p_denominator / 2`.
    Binomial {
        n_b: RangeInclusive<u32>,
        p_denominator: u32,
        rule: SkewnessRule,
    },
}

impl GridSpec {
    fn default_cap(&self) -> u32 {
        match self {
            GridSpec::Unique { .. } => UNIQUE_GRID_CAP,
            GridSpec::Binomial { .. } => BINOMIAL_GRID_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GridOptions {
    /// Largest admissible `N`, `A` or `n_b`; `None` uses the per-mode default.
    pub cap: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum CellParams {
    Unique { n: u32, a: u32 },
    Binomial { n_b: u32, p_num: u32, p_den: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellMetrics {
    pub madcd: f64,
    /// Natural-log JSD.
    pub jsd: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCell {
    pub params: CellParams,
    /// `None` when the normal approximation is undefined (zero variance).
    pub metrics: Option<CellMetrics>,
    /// Heuristic verdict for unique cells, combined rule for binomial cells.
    pub in_region: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub cells: Vec<GridCell>,
}

impl Grid {
    fn max_in_region(&self, pick: impl Fn(&CellMetrics) -> f64) -> Option<(f64, CellParams)> {
        self.cells
            .iter()
            .filter(|c| c.in_region)
            .filter_map(|c| c.metrics.as_ref().map(|m| (pick(m), c.params)))
            .fold(None, |best, (v, p)| match best {
                Some((b, _)) if b >= v => best,
                _ => Some((v, p)),
            })
    }

    /// Largest MADCD among cells inside the acceptance region.
    pub fn max_madcd_in_region(&self) -> Option<(f64, CellParams)> {
        self.max_in_region(|m| m.madcd)
    }

    pub fn max_jsd_in_region(&self) -> Option<(f64, CellParams)> {
        self.max_in_region(|m| m.jsd)
    }

    pub fn flagged(&self) -> usize {
        self.cells.iter().filter(|c| c.metrics.is_none()).count()
    }
}

fn check_range(name: &str, r: &RangeInclusive<u32>, min: u32, cap: u32) -> Result<()> {
    if r.is_empty() || *r.start() < min {
        return Err(Error::InvalidParameter(format!(
            "{name} range {}..={} must be non-empty and start at {min} or above",
            r.start(),
            r.end()
        )));
    }
    if *r.end() > cap {
        return Err(Error::CapExceeded {
            what: "grid upper bound",
            count: r.end().to_string(),
            cap: cap as u64,
        });
    }
    Ok(())
}

/// MADCD and JSD of a lattice pmf against a normal approximation.
pub(crate) fn lattice_metrics(pmf: &LatticePmf, approx: &NormalApprox) -> Result<CellMetrics> {
    let normal = discretize_normal(approx, pmf.support());
    Ok(CellMetrics {
        madcd: madcd(pmf.start(), &pmf.cdf_f64(), approx),
        jsd: jsd(&pmf.pmf_f64(), &normal)?,
    })
}

/// Metrics for the unique count at `(N, A)`; `None` if the variance is zero.
pub fn unique_metrics(n: u32, a: u32) -> Result<Option<CellMetrics>> {
    let approx = match normal_approx_for(n, a) {
        Ok(x) => x,
        Err(Error::ZeroVariance { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let dist = distribution(n, a)?;
    lattice_metrics(dist.pmf(), &approx).map(Some)
}

fn binomial_metrics(spec: &BinomialSpec) -> Result<CellMetrics> {
    let approx = NormalApprox::new(spec.mean(), spec.sd())?;
    lattice_metrics(&binomial_distribution(spec), &approx)
}

/// Evaluates every cell of the grid.
pub fn madcd_grid(spec: &GridSpec, options: GridOptions) -> Result<Grid> {
    let cap = options.cap.unwrap_or_else(|| spec.default_cap());
    match spec {
        GridSpec::Unique { n, a } => {
            check_range("N", n, 1, cap)?;
            check_range("A", a, 0, cap)?;
            let params: Vec<(u32, u32)> = n
                .clone()
                .flat_map(|n| a.clone().map(move |a| (n, a)))
                .collect();
            let cells = params
                .into_par_iter()
                .map(|(n, a)| {
                    Ok(GridCell {
                        params: CellParams::Unique { n, a },
                        metrics: unique_metrics(n, a)?,
                        in_region: heuristic_single(n, a),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Grid { cells })
        }
        GridSpec::Binomial {
            n_b,
            p_denominator,
            rule,
        } => {
            check_range("n_b", n_b, 1, cap)?;
            if *p_denominator < 2 {
                return Err(Error::InvalidParameter(
                    "p denominator must be at least 2".into(),
                ));
            }
            let den = *p_denominator;
            let params: Vec<(u32, u32)> = n_b
                .clone()
                .flat_map(|n| (1..=den / 2).map(move |i| (n, i)))
                .collect();
            let cells = params
                .into_par_iter()
                .map(|(n, i)| {
                    let spec = BinomialSpec::from_fraction(n, i as u64, den as u64)?;
                    Ok(GridCell {
                        params: CellParams::Binomial {
                            n_b: n,
                            p_num: i,
                            p_den: den,
                        },
                        metrics: Some(binomial_metrics(&spec)?),
                        in_region: binomial_rules_with(&spec, *rule).combined,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Grid { cells })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryEntry {
    pub n: u32,
    pub a_lower: u32,
    pub a_upper: u32,
    pub madcd_lower: f64,
    pub madcd_upper: f64,
}

/// MADCD along both edges of the single-sample acceptance region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryScan {
    pub entries: Vec<BoundaryEntry>,
    /// Least-squares slope of `madcd_lower` against `N`.
    pub slope_lower: Option<f64>,
    pub slope_upper: Option<f64>,
}

fn ls_slope(points: impl Iterator<Item = (f64, f64)>) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.collect();
    if pts.len() < 2 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// For each `N`, evaluates MADCD at the smallest and largest accepted `A`.
/// `N` without an acceptance interval produces no entry.
pub fn boundary_scan(n_range: RangeInclusive<u32>, options: GridOptions) -> Result<BoundaryScan> {
    check_range("N", &n_range, 1, options.cap.unwrap_or(UNIQUE_GRID_CAP))?;
    let entries = n_range
        .filter_map(|n| single_acceptance_interval(n).map(|(lo, hi)| (n, lo, hi)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(n, lo, hi)| {
            let at = |a| -> Result<f64> {
                Ok(unique_metrics(n, a)?
                    .map(|m| m.madcd)
                    .unwrap_or(f64::NAN))
            };
            Ok(BoundaryEntry {
                n,
                a_lower: lo,
                a_upper: hi,
                madcd_lower: at(lo)?,
                madcd_upper: at(hi)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let slope_lower = ls_slope(entries.iter().map(|e| (e.n as f64, e.madcd_lower)));
    let slope_upper = ls_slope(entries.iter().map(|e| (e.n as f64, e.madcd_upper)));
    Ok(BoundaryScan {
        entries,
        slope_lower,
        slope_upper,
    })
}
