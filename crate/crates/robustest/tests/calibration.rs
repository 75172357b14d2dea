//! Monte Carlo calibration and power properties that go beyond single
//! statistics: p-value validity, power sanity, the small-sample table
//! handover, and the asymmetric pseudo-median null for the signed-rank
//! test. Everything is seeded and deterministic.

use robustest::dist::{pearson_null_quantile, sample_chisq2};
use robustest::kstest::{ks_independence_test, ks_symmetry_test};
use robustest::paired::signedrank_robust;
use robustest::simlab::{rejection_table, TestKind};
use robustest::tie::TieBreak;
use robustest::{PairedSample, RngStream, Sample};

#[test]
fn ks_independence_null_calibration() {
    let trials = 2000u64;
    let n = 100;
    let rejections = (0..trials)
        .filter(|&t| {
            let mut rng = RngStream::new(0xCA11, t);
            let x: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
            let d = PairedSample::from_slices(&x, &y).unwrap();
            ks_independence_test(&d, 1000, &mut rng, TieBreak::None)
                .unwrap()
                .p_value
                < 0.05
        })
        .count() as f64
        / trials as f64;
    assert!(
        (rejections - 0.05).abs() <= 0.02,
        "rejection rate {rejections}"
    );
}

#[test]
fn ks_independence_pvalues_near_uniform_under_null() {
    let trials = 2000u64;
    let n = 50;
    let mut pvals: Vec<f64> = (0..trials)
        .map(|t| {
            let mut rng = RngStream::new(0xCA12, t);
            let x: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
            let d = PairedSample::from_slices(&x, &y).unwrap();
            ks_independence_test(&d, 1000, &mut rng, TieBreak::None)
                .unwrap()
                .p_value
        })
        .collect();
    pvals.sort_by(f64::total_cmp);
    // "Stochastically >= uniform" is one-sided: P(p <= t) must not exceed
    // t (validity). The one-sided Kolmogorov deviation in that direction
    // stays within tolerance; the conservative side may exceed it, which
    // is what the stochastic ordering predicts for an add-one estimator
    // on a discrete null.
    let m = pvals.len() as f64;
    let mut anticonservative: f64 = 0.0;
    for (i, &p) in pvals.iter().enumerate() {
        anticonservative = anticonservative.max((i + 1) as f64 / m - p);
    }
    assert!(
        anticonservative <= 0.05,
        "P(p <= t) exceeds t by {anticonservative}"
    );
}

#[test]
fn ks_symmetry_power_against_skewed_differences() {
    // chi-square(2), shifted to median zero, is strongly asymmetric.
    let med = 2.0 * std::f64::consts::LN_2;
    let trials = 500u64;
    let rejections = (0..trials)
        .filter(|&t| {
            let mut rng = RngStream::new(0xCA13, t);
            let d = Sample::new((0..200).map(|_| sample_chisq2(&mut rng) - med).collect())
                .unwrap();
            ks_symmetry_test(&d, 1000, &mut rng).unwrap().p_value < 0.05
        })
        .count() as f64
        / trials as f64;
    assert!(rejections > 0.9, "power {rejections}");
}

#[test]
fn signedrank_calibrated_under_asymmetric_pseudomedian_null() {
    // Exponential differences shifted so that Med(D1 + D2) = 0. The shift
    // is located by brute force on the simulated pair-sum distribution
    // (its analytic value solves exp(-m)(1 + m) = 1/2).
    let mut rng = RngStream::new(0xCA14, 0);
    let exp_draw = |r: &mut RngStream| sample_chisq2(r) / 2.0;
    let m = 1_000_000;
    let mut pair_sums: Vec<f64> = (0..m)
        .map(|_| exp_draw(&mut rng) + exp_draw(&mut rng))
        .collect();
    pair_sums.sort_by(f64::total_cmp);
    let pseudo_median = 0.5 * (pair_sums[m / 2 - 1] + pair_sums[m / 2]);
    let analytic = 1.678_346_990_016_661;
    assert!(
        (pseudo_median - analytic).abs() < 0.01,
        "pair-sum median {pseudo_median}"
    );
    let shift = pseudo_median / 2.0;

    let trials = 2000u64;
    let n = 300;
    let rejections = (0..trials)
        .filter(|&t| {
            let mut rng = RngStream::new(0xCA15, t);
            let d = Sample::new((0..n).map(|_| sample_chisq2(&mut rng) / 2.0 - shift).collect())
                .unwrap();
            signedrank_robust(&d, TieBreak::None, &mut rng)
                .unwrap()
                .outcome
                .p_value
                < 0.05
        })
        .count() as f64
        / trials as f64;
    assert!(
        (rejections - 0.05).abs() <= 0.02,
        "rejection rate {rejections}"
    );
}

#[test]
fn pearson_table_hands_over_smoothly_to_student() {
    let table_side = pearson_null_quantile(129, 0.975).unwrap();
    let student_side = pearson_null_quantile(130, 0.975).unwrap();
    assert!(
        (table_side - student_side).abs() < 0.02,
        "{table_side} vs {student_side}"
    );
}

#[test]
fn ks_independence_power_monotone_in_n() {
    let report = rejection_table(
        "mod1",
        &[TestKind::KsIndependence],
        &[30, 70, 150],
        500,
        0.05,
        0xCA16,
    )
    .unwrap();
    let cells: Vec<_> = [30, 70, 150]
        .iter()
        .map(|&n| report.cell(TestKind::KsIndependence, n).unwrap())
        .collect();
    for w in cells.windows(2) {
        let slack = 2.0 * (w[0].mc_standard_error() + w[1].mc_standard_error());
        assert!(
            w[1].frequency() + slack >= w[0].frequency(),
            "power not monotone: {} then {}",
            w[0].frequency(),
            w[1].frequency()
        );
    }
}
