use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::moments::{mean_unique, variance_unique};

/// Offset applied to integer outcomes before evaluating the normal CDF.
pub const CONTINUITY_SHIFT: f64 = 0.5;

/// `Phi(x)`, the standard normal CDF.
pub fn standard_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Normal law with a continuity correction of [`CONTINUITY_SHIFT`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalApprox {
    mean: f64,
    sd: f64,
}

impl NormalApprox {
    pub fn new(mean: f64, sd: f64) -> Result<Self> {
        if !mean.is_finite() || !sd.is_finite() || sd <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "normal approximation needs finite mean and positive sd, got ({mean}, {sd})"
            )));
        }
        Ok(Self { mean, sd })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sd(&self) -> f64 {
        self.sd
    }

    pub fn continuity_shift(&self) -> f64 {
        CONTINUITY_SHIFT
    }

    /// `Phi((x - mean) / sd)`.
    pub fn cdf(&self, x: f64) -> f64 {
        standard_normal_cdf((x - self.mean) / self.sd)
    }

    /// `1 - cdf(x)`, without cancellation in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        standard_normal_cdf((self.mean - x) / self.sd)
    }

    /// Corrected CDF at an integer outcome: `Phi((k + 0.5 - mean) / sd)`.
    pub fn corrected_cdf(&self, k: i64) -> f64 {
        self.cdf(k as f64 + CONTINUITY_SHIFT)
    }
}

/// Normal approximation of `k` using its exact mean and variance.
pub fn normal_approx_for(n: u32, a: u32) -> Result<NormalApprox> {
    let var = variance_unique(n, a)?;
    let var = var.to_f64().unwrap_or(0.0);
    if var <= 0.0 {
        return Err(Error::ZeroVariance { n, a });
    }
    let mean = mean_unique(n, a)?.to_f64().unwrap_or(f64::NAN);
    NormalApprox::new(mean, var.sqrt())
}
