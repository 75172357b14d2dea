//! Correlation tests: classical Pearson, Kendall and Spearman, and their
//! asymptotically well-calibrated ("robust") versions.
//!
//! The classical tests calibrate against the null distribution that holds
//! under full independence (or bivariate normality); under the weaker null
//! "correlation = 0" they can badly over-reject. The robust versions
//! studentize each statistic by an empirical estimate of its limiting
//! variance, so the standard normal calibration holds asymptotically for
//! any square-integrable (Pearson) or continuous (Kendall, Spearman)
//! joint distribution.

use crate::data::PairedSample;
use crate::dist;
use crate::error::{Error, Result};
use crate::outcome::TestOutcome;
use crate::rng::RngStream;
use crate::tie::{detie_margins, TieBreak};
use crate::util::{mean, tprime};

/// Outcome of a correlation test plus the estimated limiting variance
/// (robust variants only).
#[derive(Debug, Clone)]
pub struct CorrelationResult {
    pub outcome: TestOutcome,
    /// Estimated asymptotic variance of the normalized statistic (robust
    /// Kendall / Spearman).
    pub variance_estimate: Option<f64>,
}

fn check_level(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} not in (0, 1)")));
    }
    Ok(())
}

fn check_margins_nonconstant(d: &PairedSample) -> Result<()> {
    if d.x().variance() <= 0.0 {
        return Err(Error::Degenerate("x margin is constant".into()));
    }
    if d.y().variance() <= 0.0 {
        return Err(Error::Degenerate("y margin is constant".into()));
    }
    Ok(())
}

/// Empirical correlation coefficient; `None` when a margin is constant.
fn pearson_rho(x: &[f64], y: &[f64]) -> Option<f64> {
    let mx = mean(x);
    let my = mean(y);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..x.len() {
        let dx = x[i] - mx;
        let dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    // Cauchy-Schwarz equality (perfect linearity) detected on the exact
    // products so that identical sequences give exactly +-1.
    if sxy * sxy >= sxx * syy {
        return Some(if sxy >= 0.0 { 1.0 } else { -1.0 });
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

// ---------------------------------------------------------------------------
// Pearson
// ---------------------------------------------------------------------------

/// Classical Pearson correlation test: statistic
/// t = rho_hat * sqrt((n-2)/(1-rho_hat^2)), p-value from Student t(n-2).
///
/// Exact under bivariate normality; in general only calibrated under full
/// independence of the margins.
pub fn pearson_classic(d: &PairedSample, alpha: f64) -> Result<CorrelationResult> {
    check_level(alpha)?;
    let n = d.len();
    if n < 3 {
        return Err(Error::TooFewObservations { needed: 3, got: n });
    }
    check_margins_nonconstant(d)?;
    let rho = pearson_rho(d.x().values(), d.y().values()).expect("margins checked");
    let nf = n as f64;
    let (statistic, p_value, mut notes) = if 1.0 - rho * rho <= 0.0 {
        (
            if rho > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            },
            0.0,
            vec!["perfect correlation; p-value reported as 0".to_string()],
        )
    } else {
        let t = rho * ((nf - 2.0) / (1.0 - rho * rho)).sqrt();
        let p = (2.0 * (1.0 - dist::t_cdf(t.abs(), nf - 2.0)?)).clamp(0.0, 1.0);
        (t, p, Vec::new())
    };
    let mut outcome = TestOutcome::new("pearson-classic", statistic, p_value)
        .with_estimate(rho)
        .with_n(&[n]);
    outcome.notes.append(&mut notes);
    Ok(CorrelationResult {
        outcome,
        variance_estimate: None,
    })
}

/// Robust Pearson correlation test.
///
/// The statistic normalizes the centered-product sum by the empirical
/// spread of the products themselves, so its null distribution is
/// asymptotically standard normal whenever E[(X-mu_X)^2 (Y-mu_Y)^2] is
/// finite. P-values use the simulated Gaussian-independence table for
/// n < 130 and Student t(n-2) beyond. The confidence interval for rho
/// comes from the delta method applied to cov/sqrt(var_x var_y).
pub fn pearson_robust(d: &PairedSample, alpha: f64) -> Result<CorrelationResult> {
    check_level(alpha)?;
    let n = d.len();
    if n < 3 {
        return Err(Error::TooFewObservations { needed: 3, got: n });
    }
    check_margins_nonconstant(d)?;
    let x = d.x().values();
    let y = d.y().values();
    let statistic = tprime(x, y).ok_or_else(|| {
        Error::Degenerate("all centered products are equal; statistic undefined".into())
    })?;
    let p_value = dist::pearson_null_pvalue(statistic.abs(), n)?;
    let rho = pearson_rho(x, y).expect("margins checked");
    let (lo, hi) = pearson_delta_ci(x, y, rho, alpha)?;
    let outcome = TestOutcome::new("pearson-robust", statistic, p_value)
        .with_estimate(rho)
        .with_ci(lo, hi, 1.0 - alpha)
        .with_n(&[n]);
    Ok(CorrelationResult {
        outcome,
        variance_estimate: None,
    })
}

/// Delta-method interval for rho = h(c, vx, vy) = c / sqrt(vx vy), built
/// on the CLT for the empirical (covariance, variance, variance) vector.
fn pearson_delta_ci(x: &[f64], y: &[f64], rho: f64, alpha: f64) -> Result<(f64, f64)> {
    let n = x.len() as f64;
    let mx = mean(x);
    let my = mean(y);
    let w: Vec<[f64; 3]> = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| {
            let dx = a - mx;
            let dy = b - my;
            [dx * dy, dx * dx, dy * dy]
        })
        .collect();
    let mut m = [0.0f64; 3];
    for row in &w {
        for k in 0..3 {
            m[k] += row[k];
        }
    }
    for v in &mut m {
        *v /= n;
    }
    let (c, vx, vy) = (m[0], m[1], m[2]);
    let mut cov = [[0.0f64; 3]; 3];
    for row in &w {
        for i in 0..3 {
            for j in 0..3 {
                cov[i][j] += (row[i] - m[i]) * (row[j] - m[j]);
            }
        }
    }
    for r in &mut cov {
        for v in r.iter_mut() {
            *v /= n;
        }
    }
    let grad = [
        1.0 / (vx * vy).sqrt(),
        -rho / (2.0 * vx),
        -rho / (2.0 * vy),
    ];
    let mut var = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            var += grad[i] * cov[i][j] * grad[j];
        }
    }
    var = var.max(0.0) / n;
    let _ = c;
    let z = dist::norm_quantile(1.0 - alpha / 2.0)?;
    let half = z * var.sqrt();
    Ok(((rho - half).max(-1.0), (rho + half).min(1.0)))
}

// ---------------------------------------------------------------------------
// Kendall
// ---------------------------------------------------------------------------

/// Concordant-minus-discordant pair count for tie-free margins, via
/// merge-sort inversion counting in O(n log n).
pub(crate) fn kendall_signed_sum(x: &[f64], y: &[f64]) -> i64 {
    let n = x.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let yseq: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
    let inversions = count_inversions(yseq) as i64;
    let total = (n as i64) * (n as i64 - 1) / 2;
    total - 2 * inversions
}

fn count_inversions(mut a: Vec<f64>) -> u64 {
    let n = a.len();
    let mut buf = a.clone();
    let mut inversions = 0u64;
    let mut width = 1;
    while width < n {
        let mut lo = 0;
        while lo < n {
            let mid = (lo + width).min(n);
            let hi = (lo + 2 * width).min(n);
            if mid < hi {
                let (mut i, mut j, mut k) = (lo, mid, lo);
                while i < mid || j < hi {
                    if i < mid && (j >= hi || a[i] <= a[j]) {
                        buf[k] = a[i];
                        i += 1;
                    } else {
                        buf[k] = a[j];
                        j += 1;
                        inversions += (mid - i) as u64;
                    }
                    k += 1;
                }
                a[lo..hi].copy_from_slice(&buf[lo..hi]);
            }
            lo += 2 * width;
        }
        width *= 2;
    }
    inversions
}

struct Fenwick {
    tree: Vec<u32>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick {
            tree: vec![0; n + 1],
        }
    }

    fn add(&mut self, mut i: usize, v: u32) {
        while i < self.tree.len() {
            self.tree[i] += v;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum of positions 1..=i.
    fn prefix(&self, mut i: usize) -> u32 {
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        s
    }
}

/// Per-point counts of strict lower-left dominance:
/// out[k] = #{j : x_j < x_k and y_j < y_k}, in O(n log n).
fn dominance_lower(x: &[f64], y: &[f64]) -> Vec<u32> {
    let n = x.len();
    let mut ysorted = y.to_vec();
    ysorted.sort_by(f64::total_cmp);
    let yrank: Vec<usize> = y
        .iter()
        .map(|&v| ysorted.partition_point(|&w| w < v) + 1)
        .collect();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut bit = Fenwick::new(n);
    let mut out = vec![0u32; n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && x[idx[j]] == x[idx[i]] {
            j += 1;
        }
        for &k in &idx[i..j] {
            out[k] = bit.prefix(yrank[k] - 1);
        }
        for &k in &idx[i..j] {
            bit.add(yrank[k], 1);
        }
        i = j;
    }
    out
}

/// Counts behind the empirical joint CDF terms of the variance estimator:
/// f[k] = #{j : x_j < x_k, y_j < y_k} and h[k] = #{j : x_j > x_k, y_j > y_k}.
pub(crate) fn kendall_dominance_counts(x: &[f64], y: &[f64]) -> (Vec<u32>, Vec<u32>) {
    let f = dominance_lower(x, y);
    let negx: Vec<f64> = x.iter().map(|v| -v).collect();
    let negy: Vec<f64> = y.iter().map(|v| -v).collect();
    let h = dominance_lower(&negx, &negy);
    (f, h)
}

/// Hoeffding-projection variance estimate from the dominance counts:
/// V_n = 4/(n-1) * sum_k (F_n(k) + H_n(k) - mean)^2 with F_n(k) = f[k]/n.
/// Assembled from exact integer deviations (single final rounding).
pub(crate) fn kendall_variance_from_counts(f: &[u32], h: &[u32], n: usize) -> f64 {
    let counts: Vec<u64> = f
        .iter()
        .zip(h)
        .map(|(&a, &b)| a as u64 + b as u64)
        .collect();
    let sumsq = crate::util::centered_sumsq(&counts);
    let nf = n as f64;
    4.0 * sumsq as f64 / (nf.powi(4) * (nf - 1.0))
}

/// Robust Kendall correlation test.
///
/// tau_hat = 2 T_n with T_n the centered concordance U-statistic; the
/// normalized statistic sqrt(n) T_n / sqrt(V_n) is asymptotically standard
/// normal under tau = 0, with V_n the empirical variance of the Hoeffding
/// projection F_n + H_n.
pub fn kendall_robust(
    d: &PairedSample,
    alpha: f64,
    ties: TieBreak,
    rng: &mut RngStream,
) -> Result<CorrelationResult> {
    check_level(alpha)?;
    let (d, notes) = detie_margins(d, ties, rng)?;
    let n = d.len();
    let nf = n as f64;
    let x = d.x().values();
    let y = d.y().values();
    let signed = kendall_signed_sum(x, y);
    let t_n = signed as f64 / (nf * (nf - 1.0));
    let tau = 2.0 * t_n;
    let (f, h) = kendall_dominance_counts(x, y);
    let v_n = kendall_variance_from_counts(&f, &h, n);
    let mut outcome = if v_n > 0.0 {
        let k_n = nf.sqrt() * t_n / v_n.sqrt();
        let p = (2.0 * (1.0 - dist::norm_cdf(k_n.abs()))).clamp(0.0, 1.0);
        let z = dist::norm_quantile(1.0 - alpha / 2.0)?;
        let half = z * 2.0 * (v_n / nf).sqrt();
        TestOutcome::new("kendall-robust", k_n, p)
            .with_ci((tau - half).max(-1.0), (tau + half).min(1.0), 1.0 - alpha)
    } else if t_n != 0.0 {
        let stat = if t_n > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        TestOutcome::new("kendall-robust", stat, 0.0)
            .with_note("zero estimated variance (monotone association); p-value reported as 0")
    } else {
        TestOutcome::new("kendall-robust", 0.0, 1.0)
            .with_note("degenerate: zero statistic and zero estimated variance")
    };
    outcome = outcome.with_estimate(tau).with_n(&[n]);
    outcome.notes.extend(notes);
    Ok(CorrelationResult {
        outcome,
        variance_estimate: Some(v_n),
    })
}

/// Classical Kendall test: tau_hat standardized by the independence-null
/// variance 2(2n+5)/(9n(n-1)), normal approximation for every n.
///
/// (No exact small-sample table: this baseline exists for comparison at
/// simulation sizes, where the normal approximation is accurate.)
pub fn kendall_classic(
    d: &PairedSample,
    alpha: f64,
    ties: TieBreak,
    rng: &mut RngStream,
) -> Result<CorrelationResult> {
    check_level(alpha)?;
    let (d, notes) = detie_margins(d, ties, rng)?;
    let n = d.len();
    let nf = n as f64;
    let signed = kendall_signed_sum(d.x().values(), d.y().values());
    let tau = 2.0 * signed as f64 / (nf * (nf - 1.0));
    let null_var = 2.0 * (2.0 * nf + 5.0) / (9.0 * nf * (nf - 1.0));
    let z = tau / null_var.sqrt();
    let p = (2.0 * (1.0 - dist::norm_cdf(z.abs()))).clamp(0.0, 1.0);
    let mut outcome = TestOutcome::new("kendall-classic", z, p)
        .with_estimate(tau)
        .with_n(&[n]);
    outcome.notes.extend(notes);
    Ok(CorrelationResult {
        outcome,
        variance_estimate: None,
    })
}

// ---------------------------------------------------------------------------
// Spearman
// ---------------------------------------------------------------------------

/// Integer numerators of the influence-function terms of the Spearman
/// variance estimator. With cx[k] = #{j : x_j <= x_k} (and cy likewise),
/// s1[k] = sum over {j : x_j >= x_k} of cy[j], s2[k] the symmetric sum,
/// the estimator evaluates psi[k] = (cx*cy + s1 + s2) / n^2.
pub(crate) struct SpearmanCounts {
    pub cx: Vec<u64>,
    pub cy: Vec<u64>,
    pub s1: Vec<u64>,
    pub s2: Vec<u64>,
}

pub(crate) fn spearman_counts(x: &[f64], y: &[f64]) -> SpearmanCounts {
    let n = x.len();
    let mut xsorted = x.to_vec();
    xsorted.sort_by(f64::total_cmp);
    let mut ysorted = y.to_vec();
    ysorted.sort_by(f64::total_cmp);
    let cx: Vec<u64> = x
        .iter()
        .map(|&v| xsorted.partition_point(|&w| w <= v) as u64)
        .collect();
    let cy: Vec<u64> = y
        .iter()
        .map(|&v| ysorted.partition_point(|&w| w <= v) as u64)
        .collect();
    let suffix_sum = |key: &[f64], weights: &[u64]| -> Vec<u64> {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| key[b].total_cmp(&key[a])); // descending
        let mut out = vec![0u64; n];
        let mut running = 0u64;
        let mut i = 0;
        while i < n {
            let mut j = i + 1;
            while j < n && key[idx[j]] == key[idx[i]] {
                j += 1;
            }
            for &k in &idx[i..j] {
                running += weights[k];
            }
            for &k in &idx[i..j] {
                out[k] = running;
            }
            i = j;
        }
        out
    };
    let s1 = suffix_sum(x, &cy);
    let s2 = suffix_sum(y, &cx);
    SpearmanCounts { cx, cy, s1, s2 }
}

/// V_n = 144/(n-1) * sum_k (psi[k] - psi_bar)^2 with psi[k] evaluated on
/// the integer numerators cx*cy + s1 + s2 over n^2.
pub(crate) fn spearman_variance_from_counts(c: &SpearmanCounts, n: usize) -> f64 {
    let numerators: Vec<u64> = (0..n)
        .map(|k| c.cx[k] * c.cy[k] + c.s1[k] + c.s2[k])
        .collect();
    let sumsq = crate::util::centered_sumsq(&numerators);
    let nf = n as f64;
    144.0 * sumsq as f64 / (nf.powi(6) * (nf - 1.0))
}

fn spearman_rho(d: &PairedSample) -> f64 {
    let rx = crate::rank::ranks_slice(d.x().values());
    let ry = crate::rank::ranks_slice(d.y().values());
    pearson_rho(&rx, &ry).unwrap_or(0.0)
}

/// Robust Spearman correlation test.
///
/// rho_S_hat is the rank correlation; the normalized statistic
/// sqrt(n) rho_S_hat / sqrt(V_n) is asymptotically standard normal under
/// rho_S = 0, where V_n is the empirical variance of the influence
/// function of the rank-correlation functional (see [`spearman_counts`]).
pub fn spearman_robust(
    d: &PairedSample,
    alpha: f64,
    ties: TieBreak,
    rng: &mut RngStream,
) -> Result<CorrelationResult> {
    check_level(alpha)?;
    let n = d.len();
    if n < 4 {
        return Err(Error::TooFewObservations { needed: 4, got: n });
    }
    let (d, notes) = detie_margins(d, ties, rng)?;
    let nf = n as f64;
    let rho_s = spearman_rho(&d);
    let counts = spearman_counts(d.x().values(), d.y().values());
    let v_n = spearman_variance_from_counts(&counts, n);
    let mut outcome = if v_n > 0.0 {
        let stat = nf.sqrt() * rho_s / v_n.sqrt();
        let p = (2.0 * (1.0 - dist::norm_cdf(stat.abs()))).clamp(0.0, 1.0);
        let z = dist::norm_quantile(1.0 - alpha / 2.0)?;
        let half = z * (v_n / nf).sqrt();
        TestOutcome::new("spearman-robust", stat, p).with_ci(
            (rho_s - half).max(-1.0),
            (rho_s + half).min(1.0),
            1.0 - alpha,
        )
    } else if rho_s != 0.0 {
        let stat = if rho_s > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        TestOutcome::new("spearman-robust", stat, 0.0)
            .with_note("zero estimated variance (monotone association); p-value reported as 0")
    } else {
        TestOutcome::new("spearman-robust", 0.0, 1.0)
            .with_note("degenerate: zero statistic and zero estimated variance")
    };
    outcome = outcome.with_estimate(rho_s).with_n(&[n]);
    outcome.notes.extend(notes);
    Ok(CorrelationResult {
        outcome,
        variance_estimate: Some(v_n),
    })
}

/// Classical Spearman test: rho_S_hat against the Student t(n-2)
/// approximation of the Hotelling-Pabst null (documented approximation,
/// used for every n).
pub fn spearman_classic(
    d: &PairedSample,
    alpha: f64,
    ties: TieBreak,
    rng: &mut RngStream,
) -> Result<CorrelationResult> {
    check_level(alpha)?;
    let n = d.len();
    if n < 4 {
        return Err(Error::TooFewObservations { needed: 4, got: n });
    }
    let (d, notes) = detie_margins(d, ties, rng)?;
    let nf = n as f64;
    let rho_s = spearman_rho(&d);
    let mut outcome = if 1.0 - rho_s * rho_s <= 0.0 {
        let stat = if rho_s > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        TestOutcome::new("spearman-classic", stat, 0.0)
            .with_note("perfect rank correlation; p-value reported as 0")
    } else {
        let t = rho_s * ((nf - 2.0) / (1.0 - rho_s * rho_s)).sqrt();
        let p = (2.0 * (1.0 - dist::t_cdf(t.abs(), nf - 2.0)?)).clamp(0.0, 1.0);
        TestOutcome::new("spearman-classic", t, p)
    };
    outcome = outcome.with_estimate(rho_s).with_n(&[n]);
    outcome.notes.extend(notes);
    Ok(CorrelationResult {
        outcome,
        variance_estimate: None,
    })
}
