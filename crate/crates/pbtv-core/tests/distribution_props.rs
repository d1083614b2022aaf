//! Property tests for the exact sum-law kernel and the distance metric:
//! agreement with the exponential enumeration oracle, metric axioms,
//! shape invariants, and insensitivity to parameter order.

use proptest::prelude::*;
use proptest::test_runner::{Config as ProptestConfig, FileFailurePersistence};

use pbtv_core::consts::{tol, ETA_BCV};
use pbtv_core::oracle::pb_pmf_bruteforce;
use pbtv_core::{binom_pmf, moments, pb_pmf, tv, ParamVec, Pmf};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        failure_persistence: Some(Box::new(FileFailurePersistence::WithSource(
            "proptest-regressions",
        ))),
        ..ProptestConfig::default()
    }
}

/// Probabilities with the boundary values over-weighted.
fn prob() -> impl Strategy<Value = f64> {
    prop_oneof![
        8 => 0.0..=1.0f64,
        1 => Just(0.0),
        1 => Just(1.0),
    ]
}

fn prob_vec(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prob(), len)
}

fn pv(values: Vec<f64>) -> ParamVec {
    ParamVec::new(values).unwrap()
}

proptest! {
    #![proptest_config(config())]

    /// The O(n^2) recurrence agrees with 2^n enumeration to 1e-12 sup-norm.
    #[test]
    fn kernel_matches_enumeration_oracle(values in prob_vec(0..=12)) {
        let p = pv(values);
        let fast = pb_pmf(&p);
        let slow = pb_pmf_bruteforce(&p).unwrap();
        for k in 0..=p.len() as i64 {
            prop_assert!((fast.mass_at(k) - slow.mass_at(k)).abs() <= tol::ORACLE);
        }
    }

    /// Total mass stays within 1e-12 of 1 (construction revalidates, so
    /// exercising big n here is the point).
    #[test]
    fn mass_normalizes(values in prob_vec(0..=400)) {
        let pmf = pb_pmf(&pv(values));
        let total: f64 = pbtv_core::sum::sum(pmf.masses().iter().copied());
        prop_assert!((total - 1.0).abs() <= tol::MASS_TOTAL);
    }

    /// Mean and variance read off the masses match the parameter formulas.
    #[test]
    fn pmf_moments_match_parameter_moments(values in prob_vec(0..=60)) {
        let p = pv(values);
        let pmf = pb_pmf(&p);
        let m = moments(&p);
        let budget = 1e-9 * p.len() as f64;
        prop_assert!((pmf.mean() - m.mean).abs() <= budget.max(1e-12));
        prop_assert!((pmf.variance() - m.variance).abs() <= budget.max(1e-12));
    }

    /// tv is symmetric (exactly) and satisfies the triangle inequality.
    #[test]
    fn tv_is_a_metric(a in prob_vec(0..=10), b in prob_vec(0..=10), c in prob_vec(0..=10)) {
        let (x, y, z) = (pb_pmf(&pv(a)), pb_pmf(&pv(b)), pb_pmf(&pv(c)));
        prop_assert_eq!(tv(&x, &y), tv(&y, &x));
        prop_assert_eq!(tv(&x, &x), 0.0);
        prop_assert!(tv(&x, &z) <= tv(&x, &y) + tv(&y, &z) + tol::ORACLE);
        prop_assert!(tv(&x, &y) <= 1.0 + tol::ORACLE);
    }

    /// For unimodal laws the peak equals the distance to the unit shift.
    #[test]
    fn shift_distance_telescopes_to_peak(values in prob_vec(0..=40)) {
        let pmf = pb_pmf(&pv(values));
        let peak = pmf.shift_tv().unwrap();
        let direct = tv(&pmf, &pmf.shifted(1));
        prop_assert!((peak - direct).abs() <= tol::ORACLE);
    }

    /// Every generated sum law is log-concave, hence unimodal; the
    /// log-concavity check must imply the unimodality check.
    #[test]
    fn sum_laws_are_log_concave_and_unimodal(values in prob_vec(0..=80)) {
        let pmf = pb_pmf(&pv(values));
        prop_assert!(pmf.is_log_concave());
        prop_assert!(pmf.is_unimodal());
    }

    /// log-concavity implies unimodality on arbitrary canonical pmfs too.
    #[test]
    fn log_concave_implies_unimodal(raw in prop::collection::vec(0.0..1.0f64, 1..=12)) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-3);
        let mass: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let pmf = Pmf::new(0, mass).unwrap();
        if pmf.is_log_concave() {
            prop_assert!(pmf.is_unimodal());
        }
    }

    /// Permuting the parameters moves the result by at most 1e-13.
    #[test]
    fn parameter_order_is_immaterial(values in prob_vec(0..=50), seed in any::<u64>()) {
        let p = pv(values.clone());
        let mut shuffled = values;
        // Fisher-Yates driven by a splitmix-style stream.
        let mut s = seed;
        for i in (1..shuffled.len()).rev() {
            s = s.wrapping_add(0x9E3779B97F4A7C15);
            let mut z = s;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
            let j = (z ^ (z >> 31)) as usize % (i + 1);
            shuffled.swap(i, j);
        }
        let a = pb_pmf(&p);
        let b = pb_pmf(&pv(shuffled));
        for k in 0..=p.len() as i64 {
            prop_assert!((a.mass_at(k) - b.mass_at(k)).abs() <= tol::PERMUTATION);
        }
    }

    /// Anti-concentration: the peak never exceeds ETA_BCV / sqrt(variance).
    #[test]
    fn peak_respects_anti_concentration(values in prob_vec(0..=60)) {
        let p = pv(values);
        let v = moments(&p).variance;
        prop_assume!(v > 0.0);
        let peak = pb_pmf(&p).peak();
        prop_assert!(peak <= ETA_BCV / v.sqrt() + tol::ORACLE);
    }

    /// Survival is monotone, hits 1 at the bottom and 0 past the top.
    #[test]
    fn survival_is_a_tail(values in prob_vec(1..=30), k in -2i64..35) {
        let pmf = pb_pmf(&pv(values));
        let s = pmf.survival(k);
        prop_assert!((0.0..=1.0 + tol::ORACLE).contains(&s));
        prop_assert!(pmf.survival(k + 1) <= s + tol::ORACLE);
        prop_assert_eq!(pmf.survival(pmf.min_support()), 1.0);
        prop_assert_eq!(pmf.survival(pmf.max_support() + 1), 0.0);
    }
}

/// Binomials computed by the shared kernel at a few fixed sanity points.
#[test]
fn binomial_spot_checks() {
    let b = binom_pmf(10, 0.5).unwrap();
    // C(10, 5) / 2^10 = 252 / 1024.
    assert!((b.mass_at(5) - 252.0 / 1024.0).abs() < 1e-14);
    let b = binom_pmf(6, 1.0).unwrap();
    assert_eq!(b, Pmf::point_mass(6));
}
