//! Moments of the unique count.
//!
//! `k` is the sum of the presence indicators `d_1..d_N`. Each indicator is
//! absent with probability `q = (1 - 1/N)^A` and a pair is jointly absent with
//! probability `(1 - 2/N)^A`, which fixes the mean and variance of `k`. Higher
//! moments use closed-form triple sums over `u + v + w = t`; the direct
//! summation in [`brute_moment`] is the oracle they are checked against.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::exact::{falling_factorial, ExactProb, StirlingTable, UniqueCountDistribution};

/// Default cap on the order `t` of closed-form moments.
pub const DEFAULT_MAX_ORDER: u32 = 20;

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::EmptySample)
    } else {
        Ok(())
    }
}

/// `(num / den)^e` with `0^0 = 1`.
fn frac_pow(num: i64, den: u32, e: u32) -> BigRational {
    BigRational::new(
        Pow::pow(BigInt::from(num), e),
        Pow::pow(BigInt::from(den), e),
    )
}

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

fn uint(x: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Mean, variance and pairwise covariance of one presence indicator `d_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorStats {
    pub p_present: ExactProb,
    pub variance: BigRational,
    pub pairwise_covariance: BigRational,
}

pub fn indicator_stats(n: u32, a: u32) -> Result<IndicatorStats> {
    check_n(n)?;
    let absent = frac_pow(n as i64 - 1, n, a);
    let absent_sq = &absent * &absent;
    let p_present = ExactProb::from_ratio(BigRational::one() - &absent)?;
    let variance = &absent - &absent_sq;
    let pairwise_covariance = if n == 1 {
        BigRational::zero()
    } else {
        frac_pow(n as i64 - 2, n, a) - &absent_sq
    };
    Ok(IndicatorStats {
        p_present,
        variance,
        pairwise_covariance,
    })
}

/// `E[k] = N (1 - (1 - 1/N)^A)`.
pub fn mean_unique(n: u32, a: u32) -> Result<BigRational> {
    check_n(n)?;
    Ok(int(n) * (BigRational::one() - frac_pow(n as i64 - 1, n, a)))
}

/// `Var[k] = N(N-1)(1-2/N)^A + N(1-1/N)^A - N^2 (1-1/N)^{2A}`.
pub fn variance_unique(n: u32, a: u32) -> Result<BigRational> {
    check_n(n)?;
    let nn = int(n);
    let q = frac_pow(n as i64 - 1, n, a);
    let pair = frac_pow(n as i64 - 2, n, a);
    Ok(&nn * int(n as i64 - 1) * pair + &nn * &q - &nn * &nn * &q * &q)
}

/// Proportional-draw regime `A = alpha N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticRegime {
    alpha: f64,
}

impl AsymptoticRegime {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(Self { alpha })
        } else {
            Err(Error::InvalidParameter(format!(
                "alpha must be positive and finite, got {alpha}"
            )))
        }
    }

    /// `alpha = A / N`.
    pub fn from_draws(n: u32, a: u32) -> Result<Self> {
        check_n(n)?;
        Self::new(a as f64 / n as f64)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Limit of `E[k]`: `N (1 - e^{-alpha})`.
pub fn asymptotic_mean(n: u32, regime: &AsymptoticRegime) -> f64 {
    n as f64 * -(-regime.alpha).exp_m1()
}

/// Limit of `Var[k]`: `N (e^{-alpha} - (1 + alpha) e^{-2 alpha})`.
pub fn asymptotic_variance(n: u32, regime: &AsymptoticRegime) -> f64 {
    let a = regime.alpha;
    n as f64 * ((-a).exp() - (1.0 + a) * (-2.0 * a).exp())
}

/// All `(u, v, w)` with `u + v + w = t`.
pub(crate) fn index_triples(t: u32) -> impl Iterator<Item = (u32, u32, u32)> {
    (0..=t).flat_map(move |u| (0..=t - u).map(move |v| (u, v, t - u - v)))
}

fn check_order(t: u32, cap: u32) -> Result<()> {
    if t > cap {
        Err(Error::MomentOrderCap { t, cap })
    } else {
        Ok(())
    }
}

/// Closed-form raw moment `E[k^t]`, capped at [`DEFAULT_MAX_ORDER`].
pub fn raw_moment(n: u32, a: u32, t: u32) -> Result<BigRational> {
    raw_moment_capped(n, a, t, DEFAULT_MAX_ORDER)
}

pub fn raw_moment_capped(n: u32, a: u32, t: u32, max_order: u32) -> Result<BigRational> {
    check_n(n)?;
    check_order(t, max_order)?;
    let table = StirlingTable::global();
    let mut acc = BigRational::zero();
    for (u, v, w) in index_triples(t) {
        if v > n {
            continue;
        }
        let s = table.get((v + w) as usize, v as usize);
        if s.is_zero() {
            continue;
        }
        let magnitude = binomial(BigUint::from(t), BigUint::from(u))
            * s
            * falling_factorial(n, v)
            * Pow::pow(BigUint::from(n - v), u);
        let term = uint(magnitude) * frac_pow((n - v) as i64, n, a);
        if v % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Closed-form central moment `E[(k - E k)^t]`, capped at [`DEFAULT_MAX_ORDER`].
pub fn central_moment(n: u32, a: u32, t: u32) -> Result<BigRational> {
    central_moment_capped(n, a, t, DEFAULT_MAX_ORDER)
}

pub fn central_moment_capped(n: u32, a: u32, t: u32, max_order: u32) -> Result<BigRational> {
    check_n(n)?;
    check_order(t, max_order)?;
    let table = StirlingTable::global();
    let absent = frac_pow(n as i64 - 1, n, a);
    let mut acc = BigRational::zero();
    for (u, v, w) in index_triples(t) {
        if v > n {
            continue;
        }
        let s = table.get((v + w) as usize, v as usize);
        if s.is_zero() {
            continue;
        }
        let magnitude = binomial(BigUint::from(t), BigUint::from(u))
            * s
            * Pow::pow(BigUint::from(n), u)
            * falling_factorial(n, v);
        let term = uint(magnitude) * frac_pow((n - v) as i64, n, a) * Pow::pow(&absent, u);
        if (v + w) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Moment by direct summation over the exact pmf.
pub fn brute_moment(dist: &UniqueCountDistribution, t: u32, central: bool) -> BigRational {
    dist.pmf().moment(t, central)
}

/// Checks `k^t S(A, k) = sum_{u+v+w=t} C(t,u) (-1)^v S(v+w, v) S(A+u, k-v)`
/// in exact integers.
pub fn check_stirling_power_identity(a: u32, k: u32, t: u32) -> bool {
    let table = StirlingTable::global();
    let lhs = BigInt::from(Pow::pow(BigUint::from(k), t) * table.get(a as usize, k as usize));
    let mut rhs = BigInt::zero();
    for (u, v, w) in index_triples(t) {
        if v > k {
            continue;
        }
        let term = BigInt::from(
            binomial(BigUint::from(t), BigUint::from(u))
                * table.get((v + w) as usize, v as usize)
                * table.get((a + u) as usize, (k - v) as usize),
        );
        if v % 2 == 0 {
            rhs += term;
        } else {
            rhs -= term;
        }
    }
    lhs == rhs
}

/// Checks `sum_{k=0}^{K} N^(k) S(A, k - w) = N^(w) (N - w)^A` in exact
/// integers, with `S(A, j) = 0` for `j < 0`.
///
/// `K < min(N, A)` is reported as [`Error::Precondition`], distinct from a
/// `false` result.
pub fn check_falling_sum_identity(n: u32, a: u32, w: u32, upper: u32) -> Result<bool> {
    if upper < n.min(a) {
        return Err(Error::Precondition(format!(
            "K = {upper} is below min(N, A) = {}",
            n.min(a)
        )));
    }
    let table = StirlingTable::global();
    let lhs: BigUint = (w..=upper)
        .map(|k| falling_factorial(n, k) * table.get(a as usize, (k - w) as usize))
        .sum();
    let rhs = if w > n {
        BigUint::zero()
    } else {
        falling_factorial(n, w) * Pow::pow(BigUint::from(n - w), a)
    };
    Ok(lhs == rhs)
}

/// Relative gap `|exact - limit| / |exact|`.
pub fn relative_gap(exact: &BigRational, limit: f64) -> f64 {
    use num_traits::ToPrimitive;
    let e = exact.to_f64().unwrap_or(f64::NAN);
    if exact.is_zero() {
        return limit.abs();
    }
    ((e - limit) / e).abs()
}
