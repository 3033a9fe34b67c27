//! Exact law of the number of unique items in a bootstrap sample.
//!
//! With `N` originals and `A` draws there are `N^A` equally likely ordered
//! samples. Exactly `k` distinct items appear in `N^(k) * S(A, k)` of them,
//! where `N^(k)` is the falling factorial and `S` a Stirling number of the
//! second kind, so
//!
//! ```text
//! P(k) = N^(k) S(A, k) / N^A
//! ```
//!
//! Everything here is integer or rational arithmetic. Floating point only
//! appears in the explicit `*_f64` conversions.

use std::fmt;
use std::ops::RangeInclusive;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision non-negative count.
pub type BigCount = BigUint;

/// An exact probability: a reduced rational in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProb(BigRational);

impl ExactProb {
    /// Builds `num / den`, reducing it. Fails unless `den > 0` and `num <= den`.
    pub fn new(num: BigUint, den: BigUint) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        if num > den {
            return Err(Error::InvalidParameter(format!(
                "probability {num}/{den} exceeds 1"
            )));
        }
        Ok(Self(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    /// Wraps a rational after checking it lies in `[0, 1]`.
    pub fn from_ratio(r: BigRational) -> Result<Self> {
        if r < BigRational::zero() || r > BigRational::one() {
            return Err(Error::InvalidParameter(format!(
                "{r} is not a probability"
            )));
        }
        Ok(Self(r))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactProb({}/{})", self.0.numer(), self.0.denom())
    }
}

/// Always renders as `num/den`, including `0/1` and `1/1`.
impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl From<ExactProb> for BigRational {
    fn from(p: ExactProb) -> Self {
        p.0
    }
}

/// Converts `num / den` to the nearest binary64 without reducing first.
pub(crate) fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    BigRational::new_raw(BigInt::from(num.clone()), BigInt::from(den.clone()))
        .to_f64()
        .unwrap_or(f64::NAN)
}

/// Grow-only triangular table of Stirling numbers of the second kind.
///
/// Row `n` holds `S(n, 0..=n)`. Rows are built by the recurrence
/// `S(n, j) = j S(n-1, j) + S(n-1, j-1)` on first request and are immutable
/// once published, so readers only ever see complete rows.
pub struct StirlingTable {
    rows: RwLock<Vec<Arc<[BigUint]>>>,
}

impl Default for StirlingTable {
    fn default() -> Self {
        Self::new()
    }
}

impl StirlingTable {
    pub fn new() -> Self {
        let row0: Arc<[BigUint]> = Arc::from(vec![BigUint::one()]);
        Self {
            rows: RwLock::new(vec![row0]),
        }
    }

    /// Process-wide shared table.
    pub fn global() -> &'static StirlingTable {
        static TABLE: OnceLock<StirlingTable> = OnceLock::new();
        TABLE.get_or_init(StirlingTable::new)
    }

    /// Number of rows computed so far.
    pub fn rows_computed(&self) -> usize {
        self.rows.read().expect("stirling table poisoned").len()
    }

    /// Row `n`: `S(n, j)` for `j = 0..=n`.
    pub fn row(&self, n: usize) -> Arc<[BigUint]> {
        {
            let rows = self.rows.read().expect("stirling table poisoned");
            if let Some(row) = rows.get(n) {
                return Arc::clone(row);
            }
        }
        let mut rows = self.rows.write().expect("stirling table poisoned");
        while rows.len() <= n {
            let prev = rows.last().expect("row 0 always present");
            let next = next_row(prev);
            rows.push(Arc::from(next));
        }
        Arc::clone(&rows[n])
    }

    /// `S(n, j)`, zero outside `0 <= j <= n`.
    pub fn get(&self, n: usize, j: usize) -> BigUint {
        if j > n {
            return BigUint::zero();
        }
        self.row(n)[j].clone()
    }
}

fn next_row(prev: &[BigUint]) -> Vec<BigUint> {
    let n = prev.len();
    let mut row = Vec::with_capacity(n + 1);
    row.push(BigUint::zero());
    for j in 1..n {
        row.push(&prev[j] * BigUint::from(j) + &prev[j - 1]);
    }
    row.push(BigUint::one());
    row
}

/// Stirling number of the second kind `S(n, j)`.
pub fn stirling2(n: u32, j: u32) -> BigCount {
    StirlingTable::global().get(n as usize, j as usize)
}

/// `n (n-1) ... (n-j+1)`; `1` for `j = 0`, `0` for `j > n`.
pub fn falling_factorial(n: u32, j: u32) -> BigCount {
    if j > n {
        return BigUint::zero();
    }
    (0..j).fold(BigUint::one(), |acc, i| acc * (n - i))
}

/// `N^(k)` for `k = 0..=upto`, built incrementally.
pub(crate) fn falling_factorials(n: u32, upto: u32) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(upto as usize + 1);
    let mut acc = BigUint::one();
    out.push(acc.clone());
    for k in 1..=upto {
        if k > n {
            acc = BigUint::zero();
        } else {
            acc *= n - k + 1;
        }
        out.push(acc.clone());
    }
    out
}

/// A pmf on the integer lattice `start, start+1, ...` stored as integer
/// weights over one common denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePmf {
    start: u32,
    weights: Vec<BigUint>,
    total: BigUint,
}

impl LatticePmf {
    /// `weights` must be non-empty and `total` positive.
    pub fn new(start: u32, weights: Vec<BigUint>, total: BigUint) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("empty support".into()));
        }
        if total.is_zero() {
            return Err(Error::InvalidParameter("zero total weight".into()));
        }
        Ok(Self {
            start,
            weights,
            total,
        })
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    /// Largest outcome with a stored weight.
    pub fn end(&self) -> u32 {
        self.start + self.weights.len() as u32 - 1
    }

    pub fn support(&self) -> RangeInclusive<u32> {
        self.start..=self.end()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[BigUint] {
        &self.weights
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    fn weight(&self, x: u32) -> Option<&BigUint> {
        x.checked_sub(self.start)
            .and_then(|i| self.weights.get(i as usize))
    }

    /// `P(X = x)`, zero outside the stored range.
    pub fn prob(&self, x: u32) -> ExactProb {
        match self.weight(x) {
            Some(w) => ExactProb::new(w.clone(), self.total.clone())
                .expect("weights never exceed the total"),
            None => ExactProb::zero(),
        }
    }

    pub fn probs(&self) -> Vec<ExactProb> {
        self.support().map(|x| self.prob(x)).collect()
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: i64) -> ExactProb {
        if x < self.start as i64 {
            return ExactProb::zero();
        }
        let upto = ((x - self.start as i64) as usize).min(self.weights.len() - 1);
        let mass: BigUint = self.weights[..=upto].iter().sum();
        ExactProb::new(mass, self.total.clone()).expect("partial sums never exceed the total")
    }

    /// Exact `sum of weights == total`.
    pub fn is_normalized(&self) -> bool {
        self.weights.iter().sum::<BigUint>() == self.total
    }

    pub fn pmf_f64(&self) -> Vec<f64> {
        self.weights
            .iter()
            .map(|w| ratio_to_f64(w, &self.total))
            .collect()
    }

    /// Cumulative probabilities at every support point, each rounded once
    /// from its exact value.
    pub fn cdf_f64(&self) -> Vec<f64> {
        let mut acc = BigUint::zero();
        self.weights
            .iter()
            .map(|w| {
                acc += w;
                ratio_to_f64(&acc, &self.total)
            })
            .collect()
    }

    /// Exact `E[X^t]`, or `E[(X - E X)^t]` when `central` is set.
    pub fn moment(&self, t: u32, central: bool) -> BigRational {
        let total = BigInt::from(self.total.clone());
        let shift = if central {
            self.moment(1, false)
        } else {
            BigRational::zero()
        };
        let mut acc = BigRational::zero();
        for (i, w) in self.weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let x = BigRational::from_integer(BigInt::from(self.start as u64 + i as u64)) - &shift;
            acc += Pow::pow(x, t) * BigRational::from_integer(BigInt::from(w.clone()));
        }
        acc / BigRational::from_integer(total)
    }

    /// Mirror image `x -> pivot - x`. Requires `pivot >= end()`.
    pub(crate) fn reflected(&self, pivot: u32) -> Self {
        let mut weights = self.weights.clone();
        weights.reverse();
        Self {
            start: pivot - self.end(),
            weights,
            total: self.total.clone(),
        }
    }
}

/// Exact distribution of the unique count `k` for `N` items and `A` draws,
/// over `k = 0..=min(N, A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniqueCountDistribution {
    n: u32,
    a: u32,
    pmf: LatticePmf,
}

impl UniqueCountDistribution {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn max_k(&self) -> u32 {
        self.n.min(self.a)
    }

    pub fn pmf(&self) -> &LatticePmf {
        &self.pmf
    }

    pub fn prob(&self, k: u32) -> ExactProb {
        self.pmf.prob(k)
    }

    /// Probabilities for `k = 0..=min(N, A)`.
    pub fn probs(&self) -> Vec<ExactProb> {
        self.pmf.probs()
    }

    pub fn cdf(&self, k: i64) -> ExactProb {
        self.pmf.cdf(k)
    }
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::EmptySample)
    } else {
        Ok(())
    }
}

/// `P(k)` for `N` items and `A` draws.
pub fn pmf_unique(n: u32, a: u32, k: u32) -> Result<ExactProb> {
    check_n(n)?;
    if k > n || k > a {
        return Ok(ExactProb::zero());
    }
    let num = falling_factorial(n, k) * stirling2(a, k);
    let den = Pow::pow(BigUint::from(n), a);
    ExactProb::new(num, den)
}

/// The full distribution of `k`.
pub fn distribution(n: u32, a: u32) -> Result<UniqueCountDistribution> {
    distribution_with(StirlingTable::global(), n, a)
}

pub(crate) fn distribution_with(
    table: &StirlingTable,
    n: u32,
    a: u32,
) -> Result<UniqueCountDistribution> {
    check_n(n)?;
    let top = n.min(a);
    let row = table.row(a as usize);
    let weights = falling_factorials(n, top)
        .into_iter()
        .zip(row.iter())
        .map(|(f, s)| f * s)
        .collect();
    let total = Pow::pow(BigUint::from(n), a);
    Ok(UniqueCountDistribution {
        n,
        a,
        pmf: LatticePmf::new(0, weights, total)?,
    })
}

/// `P(K <= k)`.
pub fn cdf_unique(dist: &UniqueCountDistribution, k: i64) -> ExactProb {
    dist.cdf(k)
}

/// Law of the number of excluded items `m0 = N - k`, supported on
/// `N - min(N, A) ..= N`.
pub fn excluded_distribution(dist: &UniqueCountDistribution) -> LatticePmf {
    dist.pmf.reflected(dist.n)
}
