//! Variance-equality tests under non-normality.
//!
//! Two groups with the same variance but very different shapes: a standard
//! normal and a chi-square(2)/2 (both have variance 1). Fisher and
//! Bartlett assume normality and over-reject badly; Levene tests a
//! different functional (absolute deviations from the median); the robust
//! James-Welch test targets the variances themselves.
//!
//! Run with: cargo run --example variance_tests

use robustest::dist::{sample_chisq2, sample_normal};
use robustest::variance::{bartlett_test, fisher_vartest, levene_bf_test, vartest_robust};
use robustest::{GroupedSample, RngStream, Sample};

fn main() -> robustest::Result<()> {
    let mut rng = RngStream::new(1729, 0);
    let n = 240;
    let mut values = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        if rng.bernoulli(2.0 / 3.0) {
            values.push(sample_chisq2(&mut rng) / 2.0);
            labels.push("chisq".to_string());
        } else {
            values.push(sample_normal(&mut rng));
            labels.push("normal".to_string());
        }
    }
    let g = GroupedSample::new(values, labels)?;
    let (a, b) = g.split_two()?;
    let (a, b) = (Sample::new(a.values().to_vec())?, Sample::new(b.values().to_vec())?);

    println!("group sizes: {:?}; sample variances: {:.3} vs {:.3}\n",
        g.counts(), a.variance(), b.variance());

    let fisher = fisher_vartest(&b, &a)?;
    println!("Fisher    F = {:.4}, p = {:.4}", fisher.statistic, fisher.p_value);
    let bartlett = bartlett_test(&g)?;
    println!("Bartlett  T = {:.4}, p = {:.4}", bartlett.statistic, bartlett.p_value);
    let levene = levene_bf_test(&g)?;
    println!("Levene    F = {:.4}, p = {:.4}", levene.statistic, levene.p_value);
    let robust = vartest_robust(&g)?;
    println!(
        "VWelch    statistic = {:.4}, p = {:.4} (F df = {:.1}, {:.1}; chi-square p = {:.4})",
        robust.outcome.statistic, robust.outcome.p_value, robust.df1, robust.df2,
        robust.p_value_chisq
    );
    println!("\nEqual variances hold, so small p-values here are false positives.");
    Ok(())
}
