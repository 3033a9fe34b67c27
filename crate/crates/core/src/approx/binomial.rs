//! Binomial baseline for calibrating the normal-approximation rules.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ExactProb, LatticePmf};

/// `Binomial(n_b, p)` with rational `p` in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialSpec {
    n_b: u32,
    p: BigRational,
}

impl BinomialSpec {
    pub fn new(n_b: u32, p: BigRational) -> Result<Self> {
        if n_b == 0 {
            return Err(Error::InvalidBinomial("n_b must be at least 1".into()));
        }
        if !p.is_positive() || p >= BigRational::one() {
            return Err(Error::InvalidBinomial(format!("p = {p} is not in (0, 1)")));
        }
        Ok(Self { n_b, p })
    }

    /// `p = num / den`.
    pub fn from_fraction(n_b: u32, num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidBinomial("zero denominator".into()));
        }
        Self::new(n_b, BigRational::new(num.into(), den.into()))
    }

    pub fn n_b(&self) -> u32 {
        self.n_b
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn p_f64(&self) -> f64 {
        self.p.to_f64().unwrap_or(f64::NAN)
    }

    pub fn mean(&self) -> f64 {
        self.n_b as f64 * self.p_f64()
    }

    pub fn sd(&self) -> f64 {
        let p = self.p_f64();
        (self.n_b as f64 * p * (1.0 - p)).sqrt()
    }

    // p = succ / den with gcd 1, so fail = den - succ.
    fn parts(&self) -> (BigUint, BigUint, BigUint) {
        let succ = self.p.numer().to_biguint().expect("p > 0");
        let den = self.p.denom().to_biguint().expect("den > 0");
        let fail = &den - &succ;
        (succ, fail, den)
    }
}

/// `C(n_b, j) p^j (1-p)^{n_b-j}`, exact.
pub fn binomial_pmf(spec: &BinomialSpec, j: u32) -> Result<ExactProb> {
    if j > spec.n_b {
        return Err(Error::OutcomeOutOfRange { j, n_b: spec.n_b });
    }
    let (succ, fail, den) = spec.parts();
    let num = num_integer::binomial(BigUint::from(spec.n_b), BigUint::from(j))
        * Pow::pow(succ, j)
        * Pow::pow(fail, spec.n_b - j);
    ExactProb::new(num, Pow::pow(den, spec.n_b))
}

/// Full exact pmf over `0..=n_b`, as integer weights over `den^n_b`.
pub fn binomial_distribution(spec: &BinomialSpec) -> LatticePmf {
    let n = spec.n_b;
    let (succ, fail, den) = spec.parts();
    let mut fail_pows = Vec::with_capacity(n as usize + 1);
    fail_pows.push(BigUint::one());
    for i in 1..=n as usize {
        let next = &fail_pows[i - 1] * &fail;
        fail_pows.push(next);
    }
    let mut weights = Vec::with_capacity(n as usize + 1);
    let mut choose = BigUint::one();
    let mut succ_pow = BigUint::one();
    for j in 0..=n {
        if j > 0 {
            choose = choose * (n - j + 1) / j;
            succ_pow *= &succ;
        }
        weights.push(&choose * &succ_pow * &fail_pows[(n - j) as usize]);
    }
    LatticePmf::new(0, weights, Pow::pow(den, n)).expect("non-empty support, positive total")
}

/// Which form of the skewness rule to use.
///
/// `Standard` is the usual textbook rule
/// `|1 - 2p| / sqrt(p(1-p)) < 0.3 sqrt(n_b)`. `AsPrinted` drops the square
/// root: `|1 - 2p| / (p(1-p)) < 0.3 sqrt(n_b)`, which is strictly tighter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkewnessRule {
    #[default]
    Standard,
    AsPrinted,
}

/// Verdicts of the two binomial rules of thumb and their conjunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BinomialRules {
    /// `n_b p > 5` and `n_b (1-p) > 5`.
    pub rule1: bool,
    /// Skewness bound and `n_b > 5`.
    pub rule2: bool,
    pub combined: bool,
}

pub fn binomial_rules(spec: &BinomialSpec) -> BinomialRules {
    binomial_rules_with(spec, SkewnessRule::Standard)
}

pub fn binomial_rules_with(spec: &BinomialSpec, form: SkewnessRule) -> BinomialRules {
    let n = spec.n_b as f64;
    let p = spec.p_f64();
    let rule1 = n * p > 5.0 && n * (1.0 - p) > 5.0;
    let spread = match form {
        SkewnessRule::Standard => (p * (1.0 - p)).sqrt(),
        SkewnessRule::AsPrinted => p * (1.0 - p),
    };
    let rule2 = (1.0 - 2.0 * p).abs() / spread < 0.3 * n.sqrt() && spec.n_b > 5;
    BinomialRules {
        rule1,
        rule2,
        combined: rule1 && rule2,
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: u64, d: u64) -> ExactProb {
        ExactProb::new(n.into(), d.into()).unwrap()
    }

    #[test]
    fn pmf_examples() {
        let s = BinomialSpec::from_fraction(1, 1, 2).unwrap();
        assert_eq!(binomial_pmf(&s, 0).unwrap(), frac(1, 2));
        let s = BinomialSpec::from_fraction(4, 1, 2).unwrap();
        assert_eq!(binomial_pmf(&s, 2).unwrap(), frac(6, 16));
        let s = BinomialSpec::from_fraction(3, 1, 3).unwrap();
        assert_eq!(binomial_pmf(&s, 3).unwrap(), frac(1, 27));
        assert_eq!(
            binomial_pmf(&s, 4),
            Err(Error::OutcomeOutOfRange { j: 4, n_b: 3 })
        );
    }

    #[test]
    fn spec_validation() {
        assert!(BinomialSpec::from_fraction(0, 1, 2).is_err());
        assert!(BinomialSpec::from_fraction(3, 0, 2).is_err());
        assert!(BinomialSpec::from_fraction(3, 2, 2).is_err());
        assert!(BinomialSpec::from_fraction(3, 1, 0).is_err());
    }

    #[test]
    fn distribution_matches_pointwise_pmf() {
        for (n, a, b) in [(1u32, 1u64, 2u64), (7, 3, 10), (20, 37, 200), (12, 1, 3)] {
            let s = BinomialSpec::from_fraction(n, a, b).unwrap();
            let d = binomial_distribution(&s);
            assert!(d.is_normalized());
            for j in 0..=n {
                assert_eq!(d.prob(j), binomial_pmf(&s, j).unwrap());
            }
        }
    }

    #[test]
    fn rule_examples() {
        let r = |n, num, den| binomial_rules(&BinomialSpec::from_fraction(n, num, den).unwrap());
        let all = |b: BinomialRules| (b.rule1, b.rule2, b.combined);
        assert_eq!(all(r(100, 1, 2)), (true, true, true));
        assert_eq!(all(r(8, 1, 2)), (false, true, false));
        assert_eq!(all(r(4, 1, 2)), (false, false, false));
    }

    #[test]
    fn printed_form_is_tighter() {
        // n_b = 31, p = 0.18: accepted by the textbook rule, rejected as printed.
        let s = BinomialSpec::from_fraction(31, 9, 50).unwrap();
        assert!(binomial_rules_with(&s, SkewnessRule::Standard).combined);
        assert!(!binomial_rules_with(&s, SkewnessRule::AsPrinted).combined);
        for n in 1..200 {
            for i in 1..100 {
                let s = BinomialSpec::from_fraction(n, i, 200).unwrap();
                if binomial_rules_with(&s, SkewnessRule::AsPrinted).rule2 {
                    assert!(binomial_rules_with(&s, SkewnessRule::Standard).rule2);
                }
            }
        }
    }
}
