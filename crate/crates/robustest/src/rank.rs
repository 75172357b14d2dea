//! Ranking and empirical-CDF utilities.

use crate::data::Sample;

/// Midranks of each value within its sample.
///
/// Tied values receive the average of the positions they occupy, so the
/// ranks always sum to n(n+1)/2.
pub fn ranks(s: &Sample) -> Vec<f64> {
    ranks_slice(s.values())
}

pub(crate) fn ranks_slice(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && values[idx[j]] == values[idx[i]] {
            j += 1;
        }
        // positions i+1 ..= j occupied by a tie block
        let midrank = (i + 1 + j) as f64 / 2.0;
        for &k in &idx[i..j] {
            out[k] = midrank;
        }
        i = j;
    }
    out
}

/// Empirical CDF evaluated at `t`: the fraction of values <= t, or < t
/// when `strict` is set.
pub fn ecdf_at(s: &Sample, t: f64, strict: bool) -> f64 {
    let count = if strict {
        s.values().iter().filter(|&&v| v < t).count()
    } else {
        s.values().iter().filter(|&&v| v <= t).count()
    };
    count as f64 / s.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> Sample {
        Sample::from_slice(v).unwrap()
    }

    #[test]
    fn permutation_ranks() {
        assert_eq!(ranks(&s(&[3.0, 1.0, 2.0])), vec![3.0, 1.0, 2.0]);
    }

    #[test]
    fn midranks_for_ties() {
        assert_eq!(ranks(&s(&[5.0, 5.0, 1.0])), vec![2.5, 2.5, 1.0]);
    }

    #[test]
    fn singleton_rank() {
        assert_eq!(ranks(&s(&[7.0])), vec![1.0]);
    }

    #[test]
    fn ranks_sum_to_triangular_number() {
        let v = s(&[0.3, -1.0, 0.3, 2.0, 0.3, 7.5]);
        let n = v.len() as f64;
        let total: f64 = ranks(&v).iter().sum();
        assert_eq!(total, n * (n + 1.0) / 2.0);
    }

    #[test]
    fn ecdf_examples() {
        let v = s(&[1.0, 2.0, 3.0]);
        assert_eq!(ecdf_at(&v, 2.0, false), 2.0 / 3.0);
        assert_eq!(ecdf_at(&v, 0.5, false), 0.0);
        let d = s(&[1.0, 1.0, 2.0]);
        assert_eq!(ecdf_at(&d, 1.0, false), 2.0 / 3.0);
        assert_eq!(ecdf_at(&d, 1.0, true), 0.0);
    }

    #[test]
    fn ecdf_extremes() {
        let v = s(&[4.0, -2.0, 9.0]);
        assert_eq!(ecdf_at(&v, v.max(), false), 1.0);
        assert_eq!(ecdf_at(&v, v.min() - 1.0, false), 0.0);
    }
}
