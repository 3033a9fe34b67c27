//! Unique counts per category.
//!
//! The `N` originals are split into categories of sizes `N_1..N_C`. Splitting
//! the `A` draws as a composition `a_1 + ... + a_C = A` gives
//!
//! ```text
//! P(k) = (A! / N^A) sum_{a} prod_s N_s^(k_s) S(a_s, k_s) / a_s!
//! ```
//!
//! i.e. a multinomial choice of which draws go to which category, times the
//! single-category count inside each. Everything is kept as integer weights
//! over the common denominator `N^A`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::exact::{falling_factorials, ExactProb, LatticePmf, StirlingTable};

/// Default cap on the number of draw compositions enumerated.
pub const DEFAULT_COMPOSITION_CAP: u64 = 2_000_000;

/// Category sizes `N_1..N_C`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CategoryProfile {
    sizes: Vec<u32>,
    total: u32,
}

impl CategoryProfile {
    pub fn new(sizes: Vec<u32>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::NoCategories);
        }
        if let Some(index) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::EmptyCategory { index });
        }
        let total = sizes
            .iter()
            .try_fold(0u32, |acc, &s| acc.checked_add(s))
            .ok_or_else(|| Error::InvalidParameter("total size overflows u32".into()))?;
        Ok(Self { sizes, total })
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    /// `N`.
    pub fn total(&self) -> u32 {
        self.total
    }

    /// `C`.
    pub fn categories(&self) -> usize {
        self.sizes.len()
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index < self.sizes.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                len: self.sizes.len(),
            })
        }
    }
}

/// Compositions of `total` into `parts` non-negative parts, first part
/// varying fastest.
pub struct Compositions {
    current: Vec<u32>,
    total: u32,
    done: bool,
}

impl Compositions {
    pub fn new(total: u32, parts: usize) -> Self {
        assert!(parts > 0, "at least one part");
        let mut current = vec![0; parts];
        current[0] = total;
        Self {
            current,
            total,
            done: false,
        }
    }

    /// `C(total + parts - 1, parts - 1)`.
    pub fn count(total: u32, parts: usize) -> BigUint {
        num_integer::binomial(
            BigUint::from(total as u64 + parts as u64 - 1),
            BigUint::from(parts as u64 - 1),
        )
    }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        // Colex successor: move one unit from the first non-zero part into the next part,
        // and gather everything before it back into the first slot.
        let c = &mut self.current;
        match c[..c.len() - 1].iter().position(|&x| x > 0) {
            Some(i) => {
                let carried = c[i] - 1;
                c[i] = 0;
                c[i + 1] += 1;
                c[0] = carried;
            }
            None => self.done = true,
        }
        debug_assert!(self.done || c.iter().sum::<u32>() == self.total);
        Some(out)
    }
}

/// Exact joint law of `(k_1..k_C)`. Only non-zero points are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointUniqueDistribution {
    profile: CategoryProfile,
    a: u32,
    weights: BTreeMap<Vec<u32>, BigUint>,
    total: BigUint,
}

impl JointUniqueDistribution {
    pub fn profile(&self) -> &CategoryProfile {
        &self.profile
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    /// Number of support points with non-zero probability.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `N^A`.
    pub fn denominator(&self) -> &BigUint {
        &self.total
    }

    pub fn prob(&self, k: &[u32]) -> ExactProb {
        match self.weights.get(k) {
            Some(w) => ExactProb::new(w.clone(), self.total.clone()).expect("weight <= total"),
            None => ExactProb::zero(),
        }
    }

    /// Support points in lexicographic order with their probabilities.
    pub fn iter(&self) -> impl Iterator<Item = (&[u32], ExactProb)> + '_ {
        self.weights.iter().map(|(k, w)| {
            (
                k.as_slice(),
                ExactProb::new(w.clone(), self.total.clone()).expect("weight <= total"),
            )
        })
    }

    pub fn is_normalized(&self) -> bool {
        self.weights.values().sum::<BigUint>() == self.total
    }

    /// Coordinate marginal of category `s`, over `0..=min(N_s, A)`.
    pub fn coordinate_marginal(&self, s: usize) -> Result<LatticePmf> {
        self.profile.check_index(s)?;
        let top = self.profile.sizes[s].min(self.a) as usize;
        let mut weights = vec![BigUint::zero(); top + 1];
        for (k, w) in &self.weights {
            weights[k[s] as usize] += w;
        }
        LatticePmf::new(0, weights, self.total.clone())
    }

    /// Exact `E[prod_s k_s^{powers_s}]`.
    pub fn mixed_moment(&self, powers: &[u32]) -> Result<BigRational> {
        if powers.len() != self.profile.categories() {
            return Err(Error::DimensionMismatch {
                expected: self.profile.categories(),
                got: powers.len(),
            });
        }
        let mut acc = BigInt::zero();
        for (k, w) in &self.weights {
            let term = k
                .iter()
                .zip(powers)
                .fold(BigUint::one(), |t, (&x, &p)| t * Pow::pow(BigUint::from(x), p));
            acc += BigInt::from(term * w);
        }
        Ok(BigRational::new(acc, BigInt::from(self.total.clone())))
    }

    /// Probabilities keyed by outcome vector, as binary64.
    pub fn to_f64_map(&self) -> BTreeMap<Vec<u32>, f64> {
        self.iter()
            .map(|(k, p)| (k.to_vec(), p.to_f64()))
            .collect()
    }
}

fn factorials(upto: u32) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    for i in 1..=upto {
        let next = &out[i as usize - 1] * i;
        out.push(next);
    }
    out
}

fn check_cap(a: u32, parts: usize, cap: u64) -> Result<()> {
    let count = Compositions::count(a, parts);
    if count > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            what: "draw compositions",
            count: count.to_string(),
            cap,
        });
    }
    Ok(())
}

struct Tables {
    fact: Vec<BigUint>,
    falling: Vec<Vec<BigUint>>,
}

impl Tables {
    fn new(profile: &CategoryProfile, a: u32) -> Self {
        Self {
            fact: factorials(a),
            falling: profile
                .sizes
                .iter()
                .map(|&n| falling_factorials(n, n.min(a)))
                .collect(),
        }
    }

    // A! / prod a_s!
    fn multinomial(&self, a: u32, parts: &[u32]) -> BigUint {
        parts
            .iter()
            .fold(self.fact[a as usize].clone(), |acc, &x| acc / &self.fact[x as usize])
    }
}

/// `P(k)` for one outcome vector.
pub fn joint_pmf(profile: &CategoryProfile, a: u32, k: &[u32]) -> Result<ExactProb> {
    joint_pmf_capped(profile, a, k, DEFAULT_COMPOSITION_CAP)
}

pub fn joint_pmf_capped(
    profile: &CategoryProfile,
    a: u32,
    k: &[u32],
    cap: u64,
) -> Result<ExactProb> {
    let c = profile.categories();
    if k.len() != c {
        return Err(Error::DimensionMismatch {
            expected: c,
            got: k.len(),
        });
    }
    check_cap(a, c, cap)?;
    let total = Pow::pow(BigUint::from(profile.total), a);
    if k.iter().zip(&profile.sizes).any(|(&ks, &ns)| ks > ns) {
        return Ok(ExactProb::zero());
    }
    let table = StirlingTable::global();
    let tabs = Tables::new(profile, a);
    let mut acc = BigUint::zero();
    for parts in Compositions::new(a, c) {
        let mut term = BigUint::one();
        for s in 0..c {
            let stirling = table.get(parts[s] as usize, k[s] as usize);
            if stirling.is_zero() {
                term = BigUint::zero();
                break;
            }
            term *= stirling * &tabs.falling[s][k[s] as usize];
        }
        if !term.is_zero() {
            acc += term * tabs.multinomial(a, &parts);
        }
    }
    ExactProb::new(acc, total)
}

/// The complete joint law, enumerating every composition of `A`.
pub fn joint_distribution(profile: &CategoryProfile, a: u32) -> Result<JointUniqueDistribution> {
    joint_distribution_capped(profile, a, DEFAULT_COMPOSITION_CAP)
}

pub fn joint_distribution_capped(
    profile: &CategoryProfile,
    a: u32,
    cap: u64,
) -> Result<JointUniqueDistribution> {
    let c = profile.categories();
    check_cap(a, c, cap)?;
    let table = StirlingTable::global();
    let tabs = Tables::new(profile, a);
    let mut weights: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();

    for parts in Compositions::new(a, c) {
        let multinomial = tabs.multinomial(a, &parts);
        // Per category: non-zero (k_s, N_s^(k_s) S(a_s, k_s)) pairs.
        let options: Vec<Vec<(u32, BigUint)>> = (0..c)
            .map(|s| {
                let a_s = parts[s];
                let row = table.row(a_s as usize);
                let top = profile.sizes[s].min(a_s);
                (0..=top)
                    .filter(|&ks| !row[ks as usize].is_zero())
                    .map(|ks| (ks, &row[ks as usize] * &tabs.falling[s][ks as usize]))
                    .collect()
            })
            .collect();
        // Odometer over the cartesian product of the options.
        let mut idx = vec![0usize; c];
        loop {
            let mut key = Vec::with_capacity(c);
            let mut w = multinomial.clone();
            for s in 0..c {
                let (ks, ref f) = options[s][idx[s]];
                key.push(ks);
                w *= f;
            }
            *weights.entry(key).or_insert_with(BigUint::zero) += w;

            let mut s = 0;
            while s < c {
                idx[s] += 1;
                if idx[s] < options[s].len() {
                    break;
                }
                idx[s] = 0;
                s += 1;
            }
            if s == c {
                break;
            }
        }
    }
    weights.retain(|_, w| !w.is_zero());
    Ok(JointUniqueDistribution {
        profile: profile.clone(),
        a,
        weights,
        total: Pow::pow(BigUint::from(profile.total), a),
    })
}

fn frac_pow(num: i64, den: u32, e: u32) -> BigRational {
    BigRational::new(
        Pow::pow(BigInt::from(num), e),
        Pow::pow(BigInt::from(den), e),
    )
}

fn absent_probs(profile: &CategoryProfile, a: u32) -> (BigRational, BigRational) {
    let n = profile.total;
    (
        frac_pow(n as i64 - 1, n, a),
        frac_pow(n as i64 - 2, n, a),
    )
}

/// `E[k_i] = N_i (1 - (1 - 1/N)^A)`. Indices are zero-based.
pub fn category_mean(profile: &CategoryProfile, a: u32, i: usize) -> Result<BigRational> {
    profile.check_index(i)?;
    let (q, _) = absent_probs(profile, a);
    Ok(BigRational::from_integer(profile.sizes[i].into()) * (BigRational::one() - q))
}

/// `Var[k_i] = N_i(N_i-1)(1-2/N)^A + N_i(1-1/N)^A - N_i^2 (1-1/N)^{2A}`.
pub fn category_variance(profile: &CategoryProfile, a: u32, i: usize) -> Result<BigRational> {
    profile.check_index(i)?;
    let (q, pair) = absent_probs(profile, a);
    let ni = BigRational::from_integer(profile.sizes[i].into());
    let ni_minus = BigRational::from_integer((profile.sizes[i] as i64 - 1).into());
    Ok(&ni * ni_minus * pair + &ni * &q - &ni * &ni * &q * &q)
}

/// `Cov[k_i, k_j] = N_i N_j [(1-2/N)^A - (1-1/N)^{2A}]` for `i != j`.
pub fn category_covariance(
    profile: &CategoryProfile,
    a: u32,
    i: usize,
    j: usize,
) -> Result<BigRational> {
    profile.check_index(i)?;
    profile.check_index(j)?;
    if i == j {
        return Err(Error::SameCategory(i));
    }
    let (q, pair) = absent_probs(profile, a);
    let scale = BigRational::from_integer((profile.sizes[i] as u64 * profile.sizes[j] as u64).into());
    Ok(scale * (pair - &q * &q))
}

/// Law of `k_s` alone: a binomial mixture over the draws `a_s` that land in
/// category `s`, each followed by the single-category law.
pub fn marginal_category_distribution(
    profile: &CategoryProfile,
    a: u32,
    s: usize,
) -> Result<LatticePmf> {
    profile.check_index(s)?;
    let n_s = profile.sizes[s];
    let others = BigUint::from(profile.total - n_s);
    let top = n_s.min(a);
    let table = StirlingTable::global();
    let falling = falling_factorials(n_s, top);
    let mut weights = vec![BigUint::zero(); top as usize + 1];
    // P(a_s) * P(k | a_s) = C(A, a_s) N_s^a_s (N - N_s)^(A - a_s) / N^A
    //                       * N_s^(k) S(a_s, k) / N_s^a_s
    let mut choose = BigUint::one();
    for a_s in 0..=a {
        if a_s > 0 {
            choose = choose * (a - a_s + 1) / a_s;
        }
        let rest = Pow::pow(&others, a - a_s);
        if rest.is_zero() {
            continue;
        }
        let scale = &choose * rest;
        let row = table.row(a_s as usize);
        for k in 0..=top.min(a_s) {
            let st = &row[k as usize];
            if !st.is_zero() {
                weights[k as usize] += &scale * st * &falling[k as usize];
            }
        }
    }
    LatticePmf::new(0, weights, Pow::pow(BigUint::from(profile.total), a))
}

/// Checks negative dependence of the presence indicators for the profile's
/// total `N`: the pairwise covariance is non-positive and
/// `P(d_i = 0, d_j = 0) <= P(d_i = 0) P(d_j = 0)`, plus every category
/// cross-covariance is non-positive. Vacuously true for `N < 2` or `A = 0`.
pub fn pnqd_negativity_check(profile: &CategoryProfile, a: u32) -> bool {
    let n = profile.total;
    if n < 2 || a == 0 {
        return true;
    }
    let (q, pair) = absent_probs(profile, a);
    let both_absent_ok = pair <= &q * &q;
    let cov = &pair - &q * &q;
    let cov_ok = cov <= BigRational::zero();
    let cross_ok = (0..profile.categories()).all(|i| {
        (0..profile.categories())
            .filter(|&j| j != i)
            .all(|j| {
                category_covariance(profile, a, i, j)
                    .map(|c| c <= BigRational::zero())
                    .unwrap_or(false)
            })
    });
    both_absent_ok && cov_ok && cross_ok
}

/// Marginal pmf as binary64, for the Monte Carlo comparison.
pub fn lattice_to_f64_map(pmf: &LatticePmf) -> BTreeMap<Vec<u32>, f64> {
    pmf.support()
        .zip(pmf.pmf_f64())
        .filter(|(_, p)| *p > 0.0)
        .map(|(k, p)| (vec![k], p))
        .collect()
}
