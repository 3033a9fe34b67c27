use serde::Serialize;

use crate::error::Result;
use crate::exact::distribution;

use super::heuristic::heuristic_single;
use super::metrics::{discretize_normal, jsd_with_base, madcd, LogBase};
use super::normal::normal_approx_for;

/// Normal-approximation quality for one `(N, A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxReport {
    pub n: u32,
    pub a: u32,
    pub mean: f64,
    pub sd: f64,
    pub madcd: f64,
    /// In nats.
    pub jsd: f64,
    /// In bits.
    pub jsd_base2: f64,
    pub heuristic_pass: bool,
}

pub fn approx_report(n: u32, a: u32) -> Result<ApproxReport> {
    let approx = normal_approx_for(n, a)?;
    let dist = distribution(n, a)?;
    let pmf = dist.pmf();
    let exact = pmf.pmf_f64();
    let normal = discretize_normal(&approx, pmf.support());
    let jsd = jsd_with_base(&exact, &normal, LogBase::Natural)?;
    Ok(ApproxReport {
        n,
        a,
        mean: approx.mean(),
        sd: approx.sd(),
        madcd: madcd(pmf.start(), &pmf.cdf_f64(), &approx),
        jsd,
        jsd_base2: jsd / std::f64::consts::LN_2,
        heuristic_pass: heuristic_single(n, a),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn report_examples() {
        let r = approx_report(4, 4).unwrap();
        assert!(!r.heuristic_pass);
        assert!(r.madcd > 0.0 && r.madcd < 1.0);
        assert!(r.jsd >= 0.0);
        assert!(approx_report(50, 50).unwrap().heuristic_pass);
        assert_eq!(approx_report(1, 3), Err(Error::ZeroVariance { n: 1, a: 3 }));
    }
}
