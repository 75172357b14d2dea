//! Paired-sample dominance tests on differences d_i = y_i - x_i:
//! the order-statistic median confidence interval (and the test it
//! induces), and Wilcoxon's signed-rank test in classical and robust form.
//!
//! The signed-rank statistic actually targets the pseudo-median
//! Med(D_1 + D_2); the robust version studentizes it by the empirical
//! variance of its projection 4 * Var(F(-D)) so the standard normal
//! calibration holds for asymmetric distributions as well.

use crate::data::{PairedSample, Sample};
use crate::dist;
use crate::error::{Error, Result};
use crate::outcome::TestOutcome;
use crate::rng::RngStream;
use crate::tie::{detie_diffs, TieBreak};
use crate::util::{count_le, median_of_sorted};

/// Order-statistic confidence interval for the median.
#[derive(Debug, Clone, Copy)]
pub struct MedianCi {
    /// 1-based order-statistic indices of the endpoints.
    pub k_index: usize,
    pub l_index: usize,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

#[derive(Debug, Clone)]
pub struct MedianTestResult {
    pub outcome: TestOutcome,
    pub ci: MedianCi,
}

/// Signed-rank outcome: shared fields plus the pair count U_n and the
/// estimated projection variance V_n.
#[derive(Debug, Clone)]
pub struct SignedRankResult {
    pub outcome: TestOutcome,
    /// U_n = #{i < j : d_i + d_j > 0}.
    pub u_statistic: u64,
    pub variance_estimate: f64,
}

/// Order-statistic indices k = floor(n/2 - c sqrt(n)/2) and
/// l = floor(n/2 + c sqrt(n)/2) for a two-sided level.
fn median_ci_indices(n: usize, alpha: f64) -> Result<(usize, usize)> {
    let c = dist::norm_quantile(1.0 - alpha / 2.0)?;
    let nf = n as f64;
    let k_float = (nf - c * nf.sqrt()) / 2.0;
    let l_float = (nf + c * nf.sqrt()) / 2.0;
    let k = k_float.floor();
    let l = l_float.floor();
    if k < 1.0 || l > nf {
        return Err(Error::TooFewObservations {
            needed: ((c + (c * c + 8.0).sqrt()) / 2.0).powi(2).ceil() as usize,
            got: n,
        });
    }
    Ok((k as usize, l as usize))
}

/// Median test with an asymptotic order-statistic confidence interval.
///
/// CI = [d_(k), d_(l)]; H0: Med(D) = 0 is rejected iff 0 lies outside.
/// The p-value is the smallest level on the grid 0.001..0.999 at which 0
/// leaves the interval (1 if it never does). Estimate: the sample median.
pub fn mediantest(diffs: &Sample, alpha: f64) -> Result<MedianTestResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} not in (0, 1)")));
    }
    let n = diffs.len();
    let sorted = diffs.sorted();
    let (k, l) = median_ci_indices(n, alpha)?;
    let (lower, upper) = (sorted[k - 1], sorted[l - 1]);
    let median = median_of_sorted(&sorted);

    let mut p_value = 1.0;
    for i in 1..=999 {
        let a = i as f64 / 1000.0;
        let Ok((ka, la)) = median_ci_indices(n, a) else {
            continue;
        };
        if 0.0 < sorted[ka - 1] || 0.0 > sorted[la - 1] {
            p_value = a;
            break;
        }
    }

    let outcome = TestOutcome::new("mediantest", median, p_value)
        .with_estimate(median)
        .with_ci(lower, upper, 1.0 - alpha)
        .with_n(&[n]);
    Ok(MedianTestResult {
        outcome,
        ci: MedianCi {
            k_index: k,
            l_index: l,
            lower,
            upper,
            level: 1.0 - alpha,
        },
    })
}

/// Median test on paired data, applied to d = y - x.
pub fn mediantest_paired(d: &PairedSample, alpha: f64) -> Result<MedianTestResult> {
    mediantest(&d.differences(), alpha)
}

/// U_n = #{i < j : d_i + d_j > 0} via a two-pointer sweep on sorted values.
pub(crate) fn signedrank_pair_count(d: &[f64]) -> u64 {
    let mut a = d.to_vec();
    a.sort_by(f64::total_cmp);
    let mut lo = 0;
    let mut hi = a.len() - 1;
    let mut count = 0u64;
    while lo < hi {
        if a[lo] + a[hi] > 0.0 {
            count += (hi - lo) as u64;
            hi -= 1;
        } else {
            lo += 1;
        }
    }
    count
}

/// Integer counts behind the variance estimator: c[i] = #{j : d_j <= -d_i}.
pub(crate) fn signedrank_reflection_counts(d: &[f64]) -> Vec<u32> {
    let mut sorted = d.to_vec();
    sorted.sort_by(f64::total_cmp);
    d.iter()
        .map(|&v| count_le(&sorted, -v) as u32)
        .collect()
}

/// V_n = 4/(n-1) * sum_i (F_n(-d_i) - mean)^2, the empirical variance of
/// the projection of the pair-sum U-statistic (the factor 4 comes from the
/// U-statistic CLT: the limit variance is 4 Var(F(-D))). Assembled from
/// exact integer deviations so negating every difference is bit-exact.
pub(crate) fn signedrank_variance_from_counts(counts: &[u32], n: usize) -> f64 {
    let as_u64: Vec<u64> = counts.iter().map(|&c| c as u64).collect();
    let sumsq = crate::util::centered_sumsq(&as_u64);
    let nf = n as f64;
    4.0 * sumsq as f64 / (nf.powi(4) * (nf - 1.0))
}

/// Robust Wilcoxon signed-rank test of H0: Med(D_1 + D_2) = 0.
///
/// Statistic W' = sqrt(n) (2 U_n/(n(n-1)) - 1/2) / sqrt(V_n), asymptotically
/// standard normal under the null whatever the (continuous) distribution
/// of D. Estimate: 2 U_n/(n(n-1)), the estimated P(D_1 + D_2 > 0).
pub fn signedrank_robust(
    diffs: &Sample,
    ties: TieBreak,
    rng: &mut RngStream,
) -> Result<SignedRankResult> {
    let n = diffs.len();
    if n < 4 {
        return Err(Error::TooFewObservations { needed: 4, got: n });
    }
    let (d, notes) = detie_diffs(diffs, ties, rng)?;
    let nf = n as f64;
    let u = signedrank_pair_count(d.values());
    // integer numerator: exact sign flip when every difference negates
    let total_pairs = (n * (n - 1) / 2) as i64;
    let centered = (2 * u as i64 - total_pairs) as f64 / (2 * total_pairs) as f64;
    let concordance = 0.5 + centered;
    let counts = signedrank_reflection_counts(d.values());
    let v_n = signedrank_variance_from_counts(&counts, n);
    let mut outcome = if v_n > 0.0 {
        let w = nf.sqrt() * centered / v_n.sqrt();
        let p = (2.0 * (1.0 - dist::norm_cdf(w.abs()))).clamp(0.0, 1.0);
        TestOutcome::new("signedrank-robust", w, p)
    } else if centered != 0.0 {
        let stat = if centered > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        TestOutcome::new("signedrank-robust", stat, 0.0)
            .with_note("all differences share one sign; p-value reported as 0")
    } else {
        TestOutcome::new("signedrank-robust", 0.0, 1.0)
            .with_note("degenerate: zero statistic and zero estimated variance")
    };
    outcome = outcome.with_estimate(concordance).with_n(&[n]);
    outcome.notes.extend(notes);
    Ok(SignedRankResult {
        outcome,
        u_statistic: u,
        variance_estimate: v_n,
    })
}

/// Classical Wilcoxon signed-rank test: W_n = sum of ranks of |d_i| over
/// positive d_i, standardized by the symmetry-null mean n(n+1)/4 and
/// variance n(n+1)(2n+1)/24 (normal approximation for every n). The
/// reported statistic is the raw rank sum W_n.
pub fn signedrank_classic(
    diffs: &Sample,
    ties: TieBreak,
    rng: &mut RngStream,
) -> Result<TestOutcome> {
    let n = diffs.len();
    if n < 4 {
        return Err(Error::TooFewObservations { needed: 4, got: n });
    }
    let (d, notes) = detie_diffs(diffs, ties, rng)?;
    let nf = n as f64;
    let abs: Vec<f64> = d.values().iter().map(|v| v.abs()).collect();
    let ranks = crate::rank::ranks_slice(&abs);
    let w: f64 = d
        .values()
        .iter()
        .zip(&ranks)
        .filter(|(&v, _)| v > 0.0)
        .map(|(_, &r)| r)
        .sum();
    let mu = nf * (nf + 1.0) / 4.0;
    let sigma = (nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0).sqrt();
    let z = (w - mu) / sigma;
    let p = (2.0 * (1.0 - dist::norm_cdf(z.abs()))).clamp(0.0, 1.0);
    let mut outcome = TestOutcome::new("signedrank-classic", w, p).with_n(&[n]);
    outcome.notes.extend(notes);
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn s(v: &[f64]) -> Sample {
        Sample::from_slice(v).unwrap()
    }

    fn rng() -> RngStream {
        RngStream::new(0xD1FF, 0)
    }

    #[test]
    fn median_ci_index_arithmetic() {
        // floor(4.5 -+ 2.9399...) at n = 9, alpha = 0.05
        assert_eq!(median_ci_indices(9, 0.05).unwrap(), (1, 7));
    }

    #[test]
    fn median_ci_endpoints_are_order_statistics() {
        let d = s(&[0.5, -1.2, 2.0, 0.1, -0.4, 0.9, 1.5, -2.2, 0.3]);
        let r = mediantest(&d, 0.05).unwrap();
        let sorted = d.sorted();
        assert_eq!(r.ci.lower, sorted[r.ci.k_index - 1]);
        assert_eq!(r.ci.upper, sorted[r.ci.l_index - 1]);
        assert!(d.values().contains(&r.ci.lower));
        assert!(d.values().contains(&r.ci.upper));
    }

    #[test]
    fn symmetric_sample_is_not_rejected() {
        let d = s(&[-4.0, -3.0, -2.0, -1.0, 0.5, 1.0, 2.0, 3.0, 4.0]);
        let r = mediantest(&d, 0.05).unwrap();
        assert!(r.ci.lower <= 0.0 && 0.0 <= r.ci.upper);
        assert!(r.outcome.p_value > 0.05);
    }

    #[test]
    fn clearly_shifted_sample_is_rejected() {
        let vals: Vec<f64> = (1..=30).map(|i| 1.0 + i as f64 / 10.0).collect();
        let r = mediantest(&s(&vals), 0.05).unwrap();
        assert!(r.ci.lower > 0.0);
        assert!(r.outcome.p_value <= 0.001 + 1e-12);
    }

    #[test]
    fn too_small_sample_errors() {
        let d = s(&[0.1, -0.2, 0.4, 0.5, -0.6]);
        assert!(matches!(
            mediantest(&d, 0.05),
            Err(Error::TooFewObservations { .. })
        ));
    }

    #[test]
    fn pair_count_hand_value() {
        // pair sums: (1-2), (1+3), (-2+3) = (-1, 4, 1) => 2 positive
        assert_eq!(signedrank_pair_count(&[1.0, -2.0, 3.0]), 2);
        let mut g = rng();
        let r = signedrank_robust(&s(&[1.0, -2.0, 3.0, 5.0]), TieBreak::None, &mut g).unwrap();
        // n=4: pairs sums: -1,4,6,1,3,8 => 5 positive, concordance 5/6
        assert_eq!(r.u_statistic, 5);
        assert_abs_diff_eq!(
            r.outcome.estimate.unwrap(),
            5.0 / 6.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn pair_count_matches_brute_force() {
        let mut g = RngStream::new(21, 0);
        for trial in 0..40 {
            let n = 4 + trial % 30;
            let d: Vec<f64> = (0..n).map(|_| g.next_f64() - 0.5).collect();
            let brute = (0..n)
                .flat_map(|i| (0..i).map(move |j| (i, j)))
                .filter(|&(i, j)| d[i] + d[j] > 0.0)
                .count() as u64;
            assert_eq!(signedrank_pair_count(&d), brute);
            let counts = signedrank_reflection_counts(&d);
            for (i, &c) in counts.iter().enumerate() {
                let b = d.iter().filter(|&&v| v <= -d[i]).count() as u32;
                assert_eq!(c, b);
            }
        }
    }

    #[test]
    fn classic_rank_sums() {
        let mut g = rng();
        // all positive: maximum rank sum
        let r = signedrank_classic(&s(&[1.0, 2.0, 3.0, 4.0]), TieBreak::None, &mut g).unwrap();
        assert_eq!(r.statistic, 10.0);
        // ranks of |d| = (1, 2, 3, 4); positives at |1| and |3|, |4|
        let r = signedrank_classic(&s(&[1.0, -2.0, 3.0, 4.0]), TieBreak::None, &mut g).unwrap();
        assert_eq!(r.statistic, 1.0 + 3.0 + 4.0);
    }

    #[test]
    fn rank_sum_identity_with_pair_count() {
        // W_n = U_n + #{d_i > 0} on tie-free data
        let mut g = RngStream::new(22, 0);
        for trial in 0..200 {
            let n = 4 + trial % 40;
            let d: Vec<f64> = (0..n).map(|_| g.next_f64() - 0.5).collect();
            let mut rr = rng();
            let w = signedrank_classic(&s(&d), TieBreak::None, &mut rr)
                .unwrap()
                .statistic;
            let u = signedrank_pair_count(&d);
            let pos = d.iter().filter(|&&v| v > 0.0).count() as u64;
            assert_eq!(w as u64, u + pos);
        }
    }

    #[test]
    fn one_signed_sample_reports_zero_pvalue() {
        let mut g = rng();
        let r = signedrank_robust(&s(&[1.0, 2.0, 3.0, 4.0]), TieBreak::None, &mut g).unwrap();
        assert_eq!(r.outcome.p_value, 0.0);
        assert_eq!(r.variance_estimate, 0.0);
    }

    #[test]
    fn zero_difference_is_a_tie() {
        let mut g = rng();
        let r = signedrank_robust(&s(&[0.0, 1.0, -2.0, 3.0]), TieBreak::None, &mut g);
        assert!(matches!(r, Err(Error::Ties { .. })));
    }

    #[test]
    fn scale_invariance_and_negation() {
        let mut g = rng();
        let d = [0.4, -1.3, 2.2, -0.7, 1.9, -2.6];
        let base = signedrank_robust(&s(&d), TieBreak::None, &mut g).unwrap();
        let scaled: Vec<f64> = d.iter().map(|v| 7.5 * v).collect();
        let r = signedrank_robust(&s(&scaled), TieBreak::None, &mut g).unwrap();
        assert_eq!(base.outcome.statistic, r.outcome.statistic);
        let negated: Vec<f64> = d.iter().map(|v| -v).collect();
        let r = signedrank_robust(&s(&negated), TieBreak::None, &mut g).unwrap();
        assert_abs_diff_eq!(
            base.outcome.statistic,
            -r.outcome.statistic,
            epsilon = 1e-12
        );
    }
}
