//! Heteroscedastic ANOVA and variance-equality tests.
//!
//! The robust variance test runs a James-Welch ANOVA on the squared
//! group-centered values z_i = (x_i - mean of x_i's group)^2: equal
//! conditional variances means equal means of the z's, and the Welch
//! procedure does not assume the z's share a variance. Fisher, Bartlett
//! and Levene/Brown-Forsythe are provided as classical baselines.

use crate::data::{GroupedSample, Sample};
use crate::dist;
use crate::error::{Error, Result};
use crate::outcome::TestOutcome;
use crate::util::{mean, median_of_sorted, variance};

/// Per-group summary attached to ANOVA-style results.
#[derive(Debug, Clone)]
pub struct GroupSummary {
    pub level: String,
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
}

/// ANOVA result: the shared outcome plus the Welch F degrees of freedom,
/// the asymptotic chi-square p-value of (p-1) * statistic, and per-group
/// summaries.
#[derive(Debug, Clone)]
pub struct AnovaResult {
    pub outcome: TestOutcome,
    pub df1: f64,
    pub df2: f64,
    /// P-value of (p-1) * statistic against chi-square(p-1), the limiting
    /// null distribution; the F approximation above is the primary value.
    pub p_value_chisq: f64,
    pub groups: Vec<GroupSummary>,
}

/// Welch (1951) statistic for equality of means without equal variances.
/// Returns (statistic, df1, df2, p_f, p_chisq).
fn welch_core(groups: &[Vec<f64>], what: &str) -> Result<(f64, f64, f64, f64, f64)> {
    let p = groups.len();
    let pf = p as f64;
    let mut w = Vec::with_capacity(p);
    let mut means = Vec::with_capacity(p);
    for (k, g) in groups.iter().enumerate() {
        if g.len() < 2 {
            return Err(Error::Grouping(format!(
                "group {k} has fewer than 2 observations"
            )));
        }
        let v = variance(g);
        if v <= 0.0 {
            return Err(Error::Degenerate(format!(
                "group {k} has zero variance of {what}"
            )));
        }
        w.push(g.len() as f64 / v);
        means.push(mean(g));
    }
    let w_total: f64 = w.iter().sum();
    let grand: f64 = w
        .iter()
        .zip(&means)
        .map(|(&wj, &mj)| wj / w_total * mj)
        .sum();
    let num: f64 = w
        .iter()
        .zip(&means)
        .map(|(&wj, &mj)| wj * (mj - grand) * (mj - grand))
        .sum::<f64>()
        / (pf - 1.0);
    let lambda: f64 = w
        .iter()
        .zip(groups)
        .map(|(&wj, g)| {
            let hj = wj / w_total;
            (1.0 - hj) * (1.0 - hj) / (g.len() as f64 - 1.0)
        })
        .sum();
    let denom = 1.0 + 2.0 * (pf - 2.0) * lambda / (pf * pf - 1.0);
    let statistic = num / denom;
    let df1 = pf - 1.0;
    let df2 = (pf * pf - 1.0) / (3.0 * lambda);
    let p_f = (1.0 - dist::f_cdf(statistic, df1, df2)?).clamp(0.0, 1.0);
    let p_chisq = (1.0 - dist::chisq_cdf((pf - 1.0) * statistic, pf - 1.0)?).clamp(0.0, 1.0);
    Ok((statistic, df1, df2, p_f, p_chisq))
}

fn summaries(g: &GroupedSample) -> Vec<GroupSummary> {
    (0..g.p())
        .map(|k| {
            let vals = g.group_values(k);
            GroupSummary {
                level: g.levels()[k].clone(),
                n: vals.len(),
                mean: mean(&vals),
                variance: variance(&vals),
            }
        })
        .collect()
}

/// James-Welch heteroscedastic one-way ANOVA (equality of group means).
/// Primary p-value from the Welch F(p-1, (p^2-1)/(3*Lambda)) approximation;
/// the chi-square(p-1) p-value of (p-1) * statistic is also reported.
pub fn welch_anova(g: &GroupedSample) -> Result<AnovaResult> {
    let groups = g.groups();
    let (statistic, df1, df2, p_f, p_chisq) = welch_core(&groups, "the values")?;
    let outcome = TestOutcome::new("welch-anova", statistic, p_f).with_n(g.counts());
    Ok(AnovaResult {
        outcome,
        df1,
        df2,
        p_value_chisq: p_chisq,
        groups: summaries(g),
    })
}

/// Robust test for equality of conditional variances: a James-Welch ANOVA
/// on z_i = (x_i - group mean)^2. Requires at least 3 observations per
/// group (and finite fourth moments for the asymptotics).
pub fn vartest_robust(g: &GroupedSample) -> Result<AnovaResult> {
    if let Some(k) = (0..g.p()).position(|k| g.counts()[k] < 3) {
        return Err(Error::Grouping(format!(
            "level {:?} has fewer than 3 observations",
            g.levels()[k]
        )));
    }
    let groups = g.groups();
    let z_groups: Vec<Vec<f64>> = groups
        .iter()
        .map(|vals| {
            let m = mean(vals);
            vals.iter().map(|&v| (v - m) * (v - m)).collect()
        })
        .collect();
    let (statistic, df1, df2, p_f, p_chisq) = welch_core(&z_groups, "squared deviations")?;
    let outcome = TestOutcome::new("vwelch", statistic, p_f).with_n(g.counts());
    Ok(AnovaResult {
        outcome,
        df1,
        df2,
        p_value_chisq: p_chisq,
        groups: summaries(g),
    })
}

/// Fisher's variance-ratio test for two samples: F = s_a^2 / s_b^2 against
/// F(n_a - 1, n_b - 1), two-sided. Exact only under normality.
pub fn fisher_vartest(a: &Sample, b: &Sample) -> Result<TestOutcome> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::TooFewObservations {
            needed: 2,
            got: a.len().min(b.len()),
        });
    }
    let va = a.variance();
    let vb = b.variance();
    if va <= 0.0 || vb <= 0.0 {
        return Err(Error::Degenerate("zero variance in a sample".into()));
    }
    let f = va / vb;
    let cdf = dist::f_cdf(f, (a.len() - 1) as f64, (b.len() - 1) as f64)?;
    let p = (2.0 * cdf.min(1.0 - cdf)).clamp(0.0, 1.0);
    Ok(TestOutcome::new("fisher", f, p)
        .with_estimate(f)
        .with_n(&[a.len(), b.len()]))
}

/// Bartlett's test for equality of variances (chi-square(p-1) null).
/// Exact asymptotics only under normality.
pub fn bartlett_test(g: &GroupedSample) -> Result<TestOutcome> {
    let groups = g.groups();
    let p = groups.len();
    let pf = p as f64;
    let n_total: usize = groups.iter().map(|v| v.len()).sum();
    let nf = n_total as f64;
    let mut pooled = 0.0;
    let mut log_term = 0.0;
    let mut c_sum = 0.0;
    for (k, vals) in groups.iter().enumerate() {
        let v = variance(vals);
        if v <= 0.0 {
            return Err(Error::Degenerate(format!("group {k} has zero variance")));
        }
        let dfk = vals.len() as f64 - 1.0;
        pooled += dfk * v;
        log_term += dfk * v.ln();
        c_sum += 1.0 / dfk;
    }
    let pooled_var = pooled / (nf - pf);
    let c = 1.0 + (c_sum - 1.0 / (nf - pf)) / (3.0 * (pf - 1.0));
    let statistic = ((nf - pf) * pooled_var.ln() - log_term) / c;
    let p_value = (1.0 - dist::chisq_cdf(statistic.max(0.0), pf - 1.0)?).clamp(0.0, 1.0);
    Ok(TestOutcome::new("bartlett", statistic, p_value).with_n(g.counts()))
}

/// Levene's test in the Brown-Forsythe form: classical one-way ANOVA on
/// the absolute deviations from each group's median. Tests equality of
/// median absolute deviations rather than variances proper.
pub fn levene_bf_test(g: &GroupedSample) -> Result<TestOutcome> {
    let groups = g.groups();
    let p = groups.len();
    let pf = p as f64;
    let n_total: usize = groups.iter().map(|v| v.len()).sum();
    let nf = n_total as f64;
    let dev_groups: Vec<Vec<f64>> = groups
        .iter()
        .map(|vals| {
            let mut sorted = vals.clone();
            sorted.sort_by(f64::total_cmp);
            let med = median_of_sorted(&sorted);
            vals.iter().map(|&v| (v - med).abs()).collect()
        })
        .collect();
    let grand = mean(&dev_groups.iter().flatten().copied().collect::<Vec<f64>>());
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for vals in &dev_groups {
        let m = mean(vals);
        ssb += vals.len() as f64 * (m - grand) * (m - grand);
        ssw += vals.iter().map(|&v| (v - m) * (v - m)).sum::<f64>();
    }
    if ssw <= 0.0 {
        if ssb <= 0.0 {
            return Err(Error::Degenerate(
                "all absolute deviations from the group medians are equal".into(),
            ));
        }
        return Ok(TestOutcome::new("levene", f64::INFINITY, 0.0)
            .with_n(g.counts())
            .with_note("zero within-group spread of deviations; p-value reported as 0"));
    }
    let statistic = (ssb / (pf - 1.0)) / (ssw / (nf - pf));
    let p_value = (1.0 - dist::f_cdf(statistic, pf - 1.0, nf - pf)?).clamp(0.0, 1.0);
    Ok(TestOutcome::new("levene", statistic, p_value).with_n(g.counts()))
}
