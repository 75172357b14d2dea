//! Small numeric helpers shared across test implementations.

/// Arithmetic mean. Callers guarantee a non-empty slice.
pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance (n-1 denominator); 0 for n < 2.
pub(crate) fn variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64
}

/// Median of an already sorted slice; midpoint of the two central order
/// statistics for even lengths.
pub(crate) fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Number of elements of `sorted` that are <= t.
pub(crate) fn count_le(sorted: &[f64], t: f64) -> usize {
    sorted.partition_point(|&v| v <= t)
}

/// Number of elements of `sorted` that are < t.
pub(crate) fn count_lt(sorted: &[f64], t: f64) -> usize {
    sorted.partition_point(|&v| v < t)
}

/// The centered-product statistic sum(x_k - xbar)(y_k - ybar) normalized by
/// the spread of the products z_i = (x_i - xbar)(y_i - ybar):
/// t' = sum(z) / sqrt(sum((z - zbar)^2)).
///
/// Returns `None` when all z_i coincide (zero denominator). Shared by the
/// robust correlation test and the null-quantile tabulation, which simulate
/// exactly this statistic.
pub(crate) fn tprime(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    debug_assert_eq!(n, y.len());
    let mx = mean(x);
    let my = mean(y);
    let mut z = Vec::with_capacity(n);
    for i in 0..n {
        z.push((x[i] - mx) * (y[i] - my));
    }
    let zbar = mean(&z);
    let num: f64 = z.iter().sum();
    let denom_sq: f64 = z.iter().map(|v| (v - zbar) * (v - zbar)).sum();
    if denom_sq <= 0.0 {
        return None;
    }
    Some(num / denom_sq.sqrt())
}

/// Exact integer centering for variance estimators built on counts:
/// sum_k (m c_k - S)^2 with S = sum c_j and m = counts.len(), in i128.
///
/// Dividing this by the appropriate power of the denominators yields the
/// usual (1/(m-1)) sum (c_k/d - mean)^2 with a single final rounding, so
/// estimators built on it are bit-exact under count reflections
/// c_k -> d - c_k (sample swaps, sign flips).
pub(crate) fn centered_sumsq(counts: &[u64]) -> i128 {
    let m = counts.len() as i128;
    let s: i128 = counts.iter().map(|&c| c as i128).sum();
    counts
        .iter()
        .map(|&c| {
            let dev = (c as i128) * m - s;
            dev * dev
        })
        .sum()
}

/// Empirical quantile with linear interpolation between order statistics
/// (type 7, the R default). `sorted` must be sorted ascending, `p` in [0,1].
pub(crate) fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    debug_assert!(n > 0);
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    if lo + 1 >= n {
        return sorted[n - 1];
    }
    sorted[lo] + (h - lo as f64) * (sorted[lo + 1] - sorted[lo])
}
