use num_rational::BigRational;
use proptest::prelude::*;

use bootstrap_unique::approx::{
    discretize_normal, heuristic_single, jsd, madcd, normal_approx_for, NormalApprox,
};
use bootstrap_unique::multivariate::{
    joint_distribution, marginal_category_distribution, CategoryProfile,
};
use bootstrap_unique::{distribution, excluded_distribution};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn excluded_is_reflection(n in 1u32..30, a in 0u32..30) {
        let d = distribution(n, a).unwrap();
        let e = excluded_distribution(&d);
        for k in 0..=n {
            prop_assert_eq!(e.prob(n - k), d.prob(k));
        }
    }

    #[test]
    fn joint_marginal_matches_direct(sizes in prop::collection::vec(1u32..4, 1..4), a in 0u32..7) {
        let profile = CategoryProfile::new(sizes.clone()).unwrap();
        let joint = joint_distribution(&profile, a).unwrap();
        for (s, &n_s) in sizes.iter().enumerate() {
            let from_joint = joint.coordinate_marginal(s).unwrap();
            let direct = marginal_category_distribution(&profile, a, s).unwrap();
            for k in 0..=n_s {
                prop_assert_eq!(from_joint.prob(k), direct.prob(k));
            }
        }
    }

    #[test]
    fn single_category_joint_is_univariate(n in 1u32..8, a in 0u32..8) {
        let joint = joint_distribution(&CategoryProfile::new(vec![n]).unwrap(), a).unwrap();
        let d = distribution(n, a).unwrap();
        for k in 0..=n {
            prop_assert_eq!(joint.prob(&[k]), d.prob(k));
        }
    }

    #[test]
    fn unique_pmf_mean_matches_normal_fit(n in 2u32..60, a in 2u32..60) {
        let d = distribution(n, a).unwrap();
        let approx = normal_approx_for(n, a).unwrap();
        let mean: BigRational = d.pmf().moment(1, false);
        let mean = num_traits::ToPrimitive::to_f64(&mean).unwrap();
        prop_assert!((approx.mean() - mean).abs() <= 1e-12 * mean);
    }

    #[test]
    fn metrics_are_bounded(n in 2u32..80, a in 2u32..80) {
        let d = distribution(n, a).unwrap();
        let approx = normal_approx_for(n, a).unwrap();
        let m = madcd(d.pmf().start(), &d.pmf().cdf_f64(), &approx);
        prop_assert!((0.0..=1.0).contains(&m));
        let q = discretize_normal(&approx, d.pmf().support());
        let j = jsd(&d.pmf().pmf_f64(), &q).unwrap();
        prop_assert!((0.0..=std::f64::consts::LN_2).contains(&j));
    }

    #[test]
    fn accepted_a_is_contiguous(n in 6u32..300) {
        let accepted: Vec<u32> = (1..2000).filter(|&a| heuristic_single(n, a)).collect();
        if let (Some(&lo), Some(&hi)) = (accepted.first(), accepted.last()) {
            prop_assert_eq!(accepted.len() as u32, hi - lo + 1);
        }
    }

    #[test]
    fn discretized_normal_sums_to_one(mean in -50.0f64..150.0, sd in 0.05f64..40.0, lo in 0u32..60, width in 0u32..100) {
        let approx = NormalApprox::new(mean, sd).unwrap();
        let q = discretize_normal(&approx, lo..=lo + width);
        prop_assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
