use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::normal::NormalApprox;

/// Maximum absolute difference between an exact CDF and the
/// continuity-corrected normal CDF.
///
/// `cdf[i]` is `P(X <= start + i)`. The comparison runs over every integer
/// `x` from `start - 1` to the end of the support, where the exact CDF is 0
/// at `start - 1`. Below that the gap only shrinks, and the same holds past
/// the end, so this is the supremum over the whole integer lattice. Including
/// `start - 1` makes the value invariant under reflecting the support.
pub fn madcd(start: u32, cdf: &[f64], approx: &NormalApprox) -> f64 {
    let start = start as i64;
    let below = approx.corrected_cdf(start - 1);
    cdf.iter()
        .enumerate()
        .map(|(i, &f)| (f - approx.corrected_cdf(start + i as i64)).abs())
        .fold(below, f64::max)
}

/// Probability vector of the normal law discretised onto `support`.
///
/// Interior cells take `Phi(k + 0.5) - Phi(k - 0.5)` (standardised); the first
/// cell absorbs the left tail and the last cell the right tail.
pub fn discretize_normal(approx: &NormalApprox, support: RangeInclusive<u32>) -> Vec<f64> {
    let (lo, hi) = (*support.start() as i64, *support.end() as i64);
    if hi < lo {
        return Vec::new();
    }
    if hi == lo {
        return vec![1.0];
    }
    let mid = approx.mean();
    (lo..=hi)
        .map(|k| {
            let left = k as f64 - 0.5;
            let right = k as f64 + 0.5;
            let upper_edge = if k == hi { f64::INFINITY } else { right };
            let lower_edge = if k == lo { f64::NEG_INFINITY } else { left };
            // Difference on whichever side of the mean keeps the operands small.
            if lower_edge >= mid {
                approx.sf(lower_edge) - approx.sf(upper_edge)
            } else {
                approx.cdf(upper_edge) - approx.cdf(lower_edge)
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

const SUM_TOLERANCE: f64 = 1e-9;

/// Jensen-Shannon divergence in nats.
pub fn jsd(p: &[f64], q: &[f64]) -> Result<f64> {
    jsd_with_base(p, q, LogBase::Natural)
}

/// Jensen-Shannon divergence, using `0 log 0 = 0`.
pub fn jsd_with_base(p: &[f64], q: &[f64], base: LogBase) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    for v in [p, q] {
        let s: f64 = v.iter().sum();
        if (s - 1.0).abs() > SUM_TOLERANCE || v.iter().any(|x| *x < 0.0 || !x.is_finite()) {
            return Err(Error::NotNormalized(s));
        }
    }
    let half_kl = |x: f64, m: f64| if x > 0.0 && m > 0.0 { 0.5 * x * (x / m).ln() } else { 0.0 };
    let nats: f64 = p
        .iter()
        .zip(q)
        .map(|(&x, &y)| {
            let m = 0.5 * (x + y);
            half_kl(x, m) + half_kl(y, m)
        })
        .sum();
    let nats = nats.clamp(0.0, std::f64::consts::LN_2);
    Ok(match base {
        LogBase::Natural => nats,
        LogBase::Two => nats / std::f64::consts::LN_2,
    })
}
