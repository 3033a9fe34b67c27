//! Seeded Monte Carlo sampling of bootstrap draws.
//!
//! Replicates are cut into fixed chunks of [`CHUNK`]; chunk `i` draws from
//! its own [`stream`]. Chunks run in parallel and their tallies
//! are merged by addition, so the result depends only on the configuration.

mod rng;

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::multivariate::CategoryProfile;

pub use rng::{below, stream, SplitMix64};

/// Replicates per independent stream.
pub const CHUNK: u64 = 1 << 16;

/// Reusable scratch space for one sampler thread.
pub struct Sampler {
    stamp: Vec<u32>,
    epoch: u32,
}

impl Sampler {
    pub fn new(n: u32) -> Self {
        Self {
            stamp: vec![0; n as usize],
            epoch: 0,
        }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }

    /// Draws `a` items uniformly from `0..stamp.len()` and calls `hit` on each
    /// first occurrence.
    fn draw(&mut self, a: u32, rng: &mut SplitMix64, mut hit: impl FnMut(usize)) {
        self.next_epoch();
        let n = self.stamp.len() as u64;
        for _ in 0..a {
            let i = below(rng, n) as usize;
            if self.stamp[i] != self.epoch {
                self.stamp[i] = self.epoch;
                hit(i);
            }
        }
    }
}

/// Number of distinct items among `a` uniform draws from `n`.
pub fn sample_unique_count(n: u32, a: u32, rng: &mut SplitMix64) -> Result<u32> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut sampler = Sampler::new(n);
    let mut k = 0;
    sampler.draw(a, rng, |_| k += 1);
    Ok(k)
}

/// Distinct items per category. Items are laid out category by category.
pub fn sample_category_counts(
    profile: &CategoryProfile,
    a: u32,
    rng: &mut SplitMix64,
) -> Vec<u32> {
    let mut sampler = Sampler::new(profile.total());
    let owner = category_owner(profile);
    let mut k = vec![0; profile.categories()];
    sampler.draw(a, rng, |i| k[owner[i]] += 1);
    k
}

fn category_owner(profile: &CategoryProfile) -> Vec<usize> {
    profile
        .sizes()
        .iter()
        .enumerate()
        .flat_map(|(s, &n)| std::iter::repeat_n(s, n as usize))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimTarget {
    /// Total unique count for `N` items.
    Single(u32),
    /// Per-category unique counts.
    Profile(CategoryProfile),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub seed: u64,
    pub replicates: u64,
    pub target: SimTarget,
    pub a: u32,
}

impl SimConfig {
    pub fn single(n: u32, a: u32, replicates: u64, seed: u64) -> Self {
        Self {
            seed,
            replicates,
            target: SimTarget::Single(n),
            a,
        }
    }

    pub fn profile(profile: CategoryProfile, a: u32, replicates: u64, seed: u64) -> Self {
        Self {
            seed,
            replicates,
            target: SimTarget::Profile(profile),
            a,
        }
    }
}

/// Tallies of sampled outcomes. Single-sample outcomes are length-1 vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    pub counts: BTreeMap<Vec<u32>, u64>,
    pub total: u64,
}

impl EmpiricalDistribution {
    pub fn frequency(&self, outcome: &[u32]) -> f64 {
        self.counts.get(outcome).copied().unwrap_or(0) as f64 / self.total as f64
    }

    fn merge(mut self, other: Self) -> Self {
        for (k, c) in other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
        self.total += other.total;
        self
    }
}

fn run_chunk(config: &SimConfig, index: u64, reps: u64) -> EmpiricalDistribution {
    let mut rng = stream(config.seed, index);
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    match &config.target {
        SimTarget::Single(n) => {
            let mut sampler = Sampler::new(*n);
            let mut tally = vec![0u64; (*n).min(config.a) as usize + 1];
            for _ in 0..reps {
                let mut k = 0usize;
                sampler.draw(config.a, &mut rng, |_| k += 1);
                tally[k] += 1;
            }
            for (k, c) in tally.into_iter().enumerate() {
                if c > 0 {
                    counts.insert(vec![k as u32], c);
                }
            }
        }
        SimTarget::Profile(profile) => {
            let mut sampler = Sampler::new(profile.total());
            let owner = category_owner(profile);
            for _ in 0..reps {
                let mut k = vec![0u32; profile.categories()];
                sampler.draw(config.a, &mut rng, |i| k[owner[i]] += 1);
                *counts.entry(k).or_insert(0) += 1;
            }
        }
    }
    EmpiricalDistribution {
        counts,
        total: reps,
    }
}

/// Runs the configured number of replicates.
pub fn empirical_distribution(config: &SimConfig) -> Result<EmpiricalDistribution> {
    if config.replicates == 0 {
        return Err(Error::InvalidParameter("replicates must be at least 1".into()));
    }
    if let SimTarget::Single(0) = config.target {
        return Err(Error::EmptySample);
    }
    let chunks = config.replicates.div_ceil(CHUNK);
    let empty = || EmpiricalDistribution {
        counts: BTreeMap::new(),
        total: 0,
    };
    Ok((0..chunks)
        .into_par_iter()
        .map(|i| {
            let reps = CHUNK.min(config.replicates - i * CHUNK);
            run_chunk(config, i, reps)
        })
        .reduce(empty, EmpiricalDistribution::merge))
}

/// `(1/2) sum |freq - p|` over the union of both supports.
pub fn tv_distance(emp: &EmpiricalDistribution, exact: &BTreeMap<Vec<u32>, f64>) -> f64 {
    let mut sum = 0.0;
    for (k, &p) in exact {
        sum += (emp.frequency(k) - p).abs();
    }
    for k in emp.counts.keys() {
        if !exact.contains_key(k) {
            sum += emp.frequency(k);
        }
    }
    0.5 * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_core::SeedableRng;

    #[test]
    fn trivial_samples() {
        let mut rng = SplitMix64::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(sample_unique_count(1, 9, &mut rng).unwrap(), 1);
            assert_eq!(sample_unique_count(12, 1, &mut rng).unwrap(), 1);
            assert_eq!(sample_unique_count(12, 0, &mut rng).unwrap(), 0);
        }
        assert_eq!(sample_unique_count(0, 3, &mut rng), Err(Error::EmptySample));
    }

    #[test]
    fn category_counts_sum_to_distinct_total() {
        let p = CategoryProfile::new(vec![3, 5, 2]).unwrap();
        let mut rng = SplitMix64::seed_from_u64(3);
        for _ in 0..500 {
            let k = sample_category_counts(&p, 7, &mut rng);
            assert!(k.iter().zip(p.sizes()).all(|(x, n)| x <= n));
            let s: u32 = k.iter().sum();
            assert!((1..=7).contains(&s));
        }
        let two = CategoryProfile::new(vec![1, 1]).unwrap();
        let k = sample_category_counts(&two, 1, &mut rng);
        assert!(k == vec![1, 0] || k == vec![0, 1]);
    }

    #[test]
    fn empirical_basics() {
        let one = empirical_distribution(&SimConfig::single(10, 10, 1, 5)).unwrap();
        assert_eq!(one.total, 1);
        assert_eq!(one.counts.len(), 1);

        let cfg = SimConfig::single(10, 10, 100_000, 99);
        let a = empirical_distribution(&cfg).unwrap();
        let b = empirical_distribution(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.values().sum::<u64>(), a.total);
        assert!(a.counts.keys().all(|k| (1..=10).contains(&k[0])));

        assert!(empirical_distribution(&SimConfig::single(10, 10, 0, 1)).is_err());
        assert!(empirical_distribution(&SimConfig::single(0, 10, 5, 1)).is_err());
    }

    #[test]
    fn chunk_boundaries_do_not_change_prefix_streams() {
        // The first chunk is the same whatever the total replicate count.
        let short = run_chunk(&SimConfig::single(6, 6, 10, 8), 0, 10);
        let long = run_chunk(&SimConfig::single(6, 6, 1_000_000, 8), 0, 10);
        assert_eq!(short, long);
    }

    #[test]
    fn tv_examples() {
        let emp = EmpiricalDistribution {
            counts: [(vec![1], 1), (vec![2], 3)].into_iter().collect(),
            total: 4,
        };
        let same: BTreeMap<_, _> = [(vec![1], 0.25), (vec![2], 0.75)].into_iter().collect();
        assert_eq!(tv_distance(&emp, &same), 0.0);
        let disjoint: BTreeMap<_, _> = [(vec![5], 1.0)].into_iter().collect();
        assert_eq!(tv_distance(&emp, &disjoint), 1.0);
    }
}
