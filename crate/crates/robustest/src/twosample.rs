//! Unpaired stochastic-dominance tests: robust and classical Mann-Whitney,
//! Welch's t, and the two-sample Kolmogorov-Smirnov baseline.
//!
//! The Mann-Whitney functional T = P(X < Y) - 1/2 targets Med(Y - X) = 0.
//! The classical calibration assumes the two distributions are identical;
//! the robust version studentizes T with the empirical variances of its
//! Hoeffding projections and is asymptotically standard normal under the
//! null for any pair of continuous distributions.

use crate::data::Sample;
use crate::dist;
use crate::error::{Error, Result};
use crate::outcome::TestOutcome;
use crate::rng::RngStream;
use crate::tie::{detie_pooled, TieBreak};
use crate::util::{count_le, count_lt};

/// Mann-Whitney outcome: the shared fields plus the raw functional
/// estimate T in [-1/2, 1/2] and the two projection-variance estimates.
#[derive(Debug, Clone)]
pub struct TwoSampleResult {
    pub outcome: TestOutcome,
    /// T = U/(n1 n2) - 1/2.
    pub t_statistic: f64,
    /// Empirical variance of H_{n2}(X_k) over the first sample.
    pub v1: f64,
    /// Empirical variance of F_{n1}(Y_k) over the second sample.
    pub v2: f64,
}

impl TwoSampleResult {
    /// Implied estimate of P(X < Y).
    pub fn prob_x_less_y(&self) -> f64 {
        self.t_statistic + 0.5
    }
}

/// Number of pairs (i, j) with x_i < y_j, via binary search on sorted x.
pub(crate) fn mw_count(x: &[f64], y: &[f64]) -> u64 {
    let mut xs = x.to_vec();
    xs.sort_by(f64::total_cmp);
    y.iter().map(|&v| count_lt(&xs, v) as u64).sum()
}

/// Integer counts behind the projection-variance estimators:
/// hx[k] = #{j : y_j > x_k} and fy[k] = #{j : x_j < y_k}.
pub(crate) fn mw_projection_counts(x: &[f64], y: &[f64]) -> (Vec<u32>, Vec<u32>) {
    let mut xs = x.to_vec();
    xs.sort_by(f64::total_cmp);
    let mut ys = y.to_vec();
    ys.sort_by(f64::total_cmp);
    let hx: Vec<u32> = x
        .iter()
        .map(|&v| (y.len() - count_le(&ys, v)) as u32)
        .collect();
    let fy: Vec<u32> = y.iter().map(|&v| count_lt(&xs, v) as u32).collect();
    (hx, fy)
}

/// v = 1/(m-1) * sum((c_k / denom - mean)^2) for integer counts c,
/// assembled from exact integer deviations so that sample swaps are
/// bit-exact (c_k -> denom - c_k negates every deviation).
pub(crate) fn projection_variance(counts: &[u32], denom: usize) -> f64 {
    let as_u64: Vec<u64> = counts.iter().map(|&c| c as u64).collect();
    let sumsq = crate::util::centered_sumsq(&as_u64);
    let m = counts.len() as f64;
    sumsq as f64 / (m * m * (denom * denom) as f64 * (m - 1.0))
}

/// Robust Mann-Whitney test of Med(Y - X) = 0.
///
/// Statistic MW = T / sqrt(V1/n1 + V2/n2), asymptotically standard normal
/// under the null. Complete separation (both projection variances zero)
/// reports p = 0 with a note instead of dividing by zero.
pub fn mannwhitney_robust(
    x: &Sample,
    y: &Sample,
    ties: TieBreak,
    rng: &mut RngStream,
) -> Result<TwoSampleResult> {
    if x.len() < 2 || y.len() < 2 {
        return Err(Error::TooFewObservations {
            needed: 2,
            got: x.len().min(y.len()),
        });
    }
    let (x, y, notes) = detie_pooled(x, y, ties, rng)?;
    let n1 = x.len();
    let n2 = y.len();
    let u = mw_count(x.values(), y.values());
    // integer numerator: exact sign flip under a sample swap (u -> n1n2-u)
    let pairs = (n1 * n2) as i64;
    let t = (2 * u as i64 - pairs) as f64 / (2 * pairs) as f64;
    let (hx, fy) = mw_projection_counts(x.values(), y.values());
    let v1 = projection_variance(&hx, n2);
    let v2 = projection_variance(&fy, n1);
    let denom_sq = v1 / n1 as f64 + v2 / n2 as f64;
    let mut outcome = if denom_sq > 0.0 {
        let mw = t / denom_sq.sqrt();
        let p = (2.0 * (1.0 - dist::norm_cdf(mw.abs()))).clamp(0.0, 1.0);
        TestOutcome::new("mw-robust", mw, p)
    } else if t != 0.0 {
        let stat = if t > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        TestOutcome::new("mw-robust", stat, 0.0)
            .with_note("complete separation of the samples; p-value reported as 0")
    } else {
        TestOutcome::new("mw-robust", 0.0, 1.0)
            .with_note("degenerate: zero statistic and zero estimated variance")
    };
    outcome = outcome.with_estimate(t).with_n(&[n1, n2]);
    outcome.notes.extend(notes);
    Ok(TwoSampleResult {
        outcome,
        t_statistic: t,
        v1,
        v2,
    })
}

/// Classical Mann-Whitney test (equivalent to the Wilcoxon rank-sum test):
/// normal approximation with continuity correction on the pair count
/// U = #{x_i < y_j}, null mean n1 n2 / 2 and variance n1 n2 (n1+n2+1)/12.
/// Calibrated only when the two distributions are identical.
pub fn mannwhitney_classic(
    x: &Sample,
    y: &Sample,
    ties: TieBreak,
    rng: &mut RngStream,
) -> Result<TestOutcome> {
    if x.len() < 2 || y.len() < 2 {
        return Err(Error::TooFewObservations {
            needed: 2,
            got: x.len().min(y.len()),
        });
    }
    let (x, y, notes) = detie_pooled(x, y, ties, rng)?;
    let n1 = x.len() as f64;
    let n2 = y.len() as f64;
    let u = mw_count(x.values(), y.values()) as f64;
    let mu = n1 * n2 / 2.0;
    let sigma = (n1 * n2 * (n1 + n2 + 1.0) / 12.0).sqrt();
    let centered = u - mu;
    let corrected = if centered > 0.0 {
        centered - 0.5
    } else if centered < 0.0 {
        centered + 0.5
    } else {
        0.0
    };
    let z = corrected / sigma;
    let p = (2.0 * (1.0 - dist::norm_cdf(z.abs()))).clamp(0.0, 1.0);
    let mut outcome = TestOutcome::new("mw-classic", u, p)
        .with_estimate(u / (n1 * n2) - 0.5)
        .with_n(&[x.len(), y.len()]);
    outcome.notes.extend(notes);
    Ok(outcome)
}

/// Welch's two-sample t test for equality of means without assuming equal
/// variances, with the Welch-Satterthwaite degrees of freedom and a
/// confidence interval for mean(x) - mean(y).
pub fn welch_ttest(x: &Sample, y: &Sample, alpha: f64) -> Result<TestOutcome> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} not in (0, 1)")));
    }
    if x.len() < 2 || y.len() < 2 {
        return Err(Error::TooFewObservations {
            needed: 2,
            got: x.len().min(y.len()),
        });
    }
    let n1 = x.len() as f64;
    let n2 = y.len() as f64;
    let v1 = x.variance();
    let v2 = y.variance();
    let se_sq = v1 / n1 + v2 / n2;
    if se_sq <= 0.0 {
        return Err(Error::Degenerate("both samples have zero variance".into()));
    }
    let diff = x.mean() - y.mean();
    let se = se_sq.sqrt();
    let t = diff / se;
    let df = se_sq * se_sq
        / (v1 * v1 / (n1 * n1 * (n1 - 1.0)) + v2 * v2 / (n2 * n2 * (n2 - 1.0)));
    let p = (2.0 * (1.0 - dist::t_cdf(t.abs(), df)?)).clamp(0.0, 1.0);
    let tq = dist::t_quantile(1.0 - alpha / 2.0, df)?;
    Ok(TestOutcome::new("welch", t, p)
        .with_estimate(diff)
        .with_ci(diff - tq * se, diff + tq * se, 1.0 - alpha)
        .with_n(&[x.len(), y.len()]))
}

/// Two-sample Kolmogorov-Smirnov test of equality of distributions:
/// D = sup |F_{n1} - G_{n2}| over the pooled breakpoints, p-value from the
/// asymptotic Kolmogorov distribution of sqrt(n1 n2/(n1+n2)) * D.
pub fn ks_twosample(
    x: &Sample,
    y: &Sample,
    ties: TieBreak,
    rng: &mut RngStream,
) -> Result<TestOutcome> {
    let (x, y, notes) = detie_pooled(x, y, ties, rng)?;
    let n1 = x.len();
    let n2 = y.len();
    let d = ks_twosample_sup(x.values(), y.values());
    let lambda = ((n1 * n2) as f64 / (n1 + n2) as f64).sqrt() * d;
    let p = dist::kolmogorov_sf(lambda);
    let mut outcome = TestOutcome::new("ks-twosample", d, p)
        .with_estimate(d)
        .with_n(&[n1, n2]);
    outcome.notes.extend(notes);
    Ok(outcome)
}

pub(crate) fn ks_twosample_sup(x: &[f64], y: &[f64]) -> f64 {
    let mut xs = x.to_vec();
    xs.sort_by(f64::total_cmp);
    let mut ys = y.to_vec();
    ys.sort_by(f64::total_cmp);
    let mut pooled: Vec<f64> = xs.iter().chain(ys.iter()).copied().collect();
    pooled.sort_by(f64::total_cmp);
    pooled.dedup();
    let (n1, n2) = (xs.len() as f64, ys.len() as f64);
    let mut best = 0.0f64;
    for &t in &pooled {
        let f = count_le(&xs, t) as f64 / n1;
        let g = count_le(&ys, t) as f64 / n2;
        best = best.max((f - g).abs());
    }
    best
}
