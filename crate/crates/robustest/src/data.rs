//! Validated data containers.
//!
//! Finiteness is checked once at construction; all downstream math may
//! assume every stored value is a finite `f64`.

use crate::error::{Error, Result};

/// A univariate sample of finite real values in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Sample { values })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Sample::new(values.to_vec())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        crate::util::mean(&self.values)
    }

    /// Unbiased sample variance (n-1 denominator); 0 for n = 1.
    pub fn variance(&self) -> f64 {
        crate::util::variance(&self.values)
    }

    pub fn median(&self) -> f64 {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        crate::util::median_of_sorted(&v)
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Paired observations (x_i, y_i), i = 1..n, n >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    x: Sample,
    y: Sample,
}

impl PairedSample {
    pub fn new(x: Sample, y: Sample) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch(x.len(), y.len()));
        }
        if x.len() < 2 {
            return Err(Error::TooFewObservations {
                needed: 2,
                got: x.len(),
            });
        }
        Ok(PairedSample { x, y })
    }

    pub fn from_slices(x: &[f64], y: &[f64]) -> Result<Self> {
        PairedSample::new(Sample::from_slice(x)?, Sample::from_slice(y)?)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self) -> &Sample {
        &self.x
    }

    pub fn y(&self) -> &Sample {
        &self.y
    }

    /// Differences d_i = y_i - x_i.
    pub fn differences(&self) -> Sample {
        let d: Vec<f64> = self
            .x
            .values()
            .iter()
            .zip(self.y.values())
            .map(|(a, b)| b - a)
            .collect();
        Sample::new(d).expect("finite differences of finite values")
    }
}

/// A sample of real values paired with a categorical level per value.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedSample {
    values: Vec<f64>,
    labels: Vec<String>,
    levels: Vec<String>,
    counts: Vec<usize>,
}

impl GroupedSample {
    /// Levels are recorded in first-appearance order. Requires at least
    /// two levels and at least two observations per level.
    pub fn new(values: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if values.len() != labels.len() {
            return Err(Error::LengthMismatch(values.len(), labels.len()));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        let mut levels: Vec<String> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for label in &labels {
            match levels.iter().position(|l| l == label) {
                Some(i) => counts[i] += 1,
                None => {
                    levels.push(label.clone());
                    counts.push(1);
                }
            }
        }
        if levels.len() < 2 {
            return Err(Error::Grouping(format!(
                "need at least 2 levels, found {}",
                levels.len()
            )));
        }
        if let Some(i) = counts.iter().position(|&c| c < 2) {
            return Err(Error::Grouping(format!(
                "level {:?} has only {} observation(s); need at least 2 per level",
                levels[i], counts[i]
            )));
        }
        Ok(GroupedSample {
            values,
            labels,
            levels,
            counts,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Number of distinct levels.
    pub fn p(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Values belonging to level `k` (in first-appearance level order).
    pub fn group_values(&self, k: usize) -> Vec<f64> {
        let level = &self.levels[k];
        self.values
            .iter()
            .zip(&self.labels)
            .filter(|(_, l)| *l == level)
            .map(|(v, _)| *v)
            .collect()
    }

    pub fn groups(&self) -> Vec<Vec<f64>> {
        (0..self.p()).map(|k| self.group_values(k)).collect()
    }

    /// Split a two-level grouping into the two conditional samples.
    pub fn split_two(&self) -> Result<(Sample, Sample)> {
        if self.p() != 2 {
            return Err(Error::Grouping(format!(
                "expected exactly 2 levels, found {}",
                self.p()
            )));
        }
        Ok((
            Sample::new(self.group_values(0))?,
            Sample::new(self.group_values(1))?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_rejects_empty_and_non_finite() {
        assert!(matches!(Sample::new(vec![]), Err(Error::EmptySample)));
        assert!(matches!(
            Sample::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite(1))
        ));
        assert!(matches!(
            Sample::new(vec![f64::INFINITY]),
            Err(Error::NonFinite(0))
        ));
        assert!(Sample::new(vec![7.0]).is_ok());
    }

    #[test]
    fn paired_sample_checks_lengths() {
        let x = Sample::new(vec![1.0, 2.0]).unwrap();
        let y = Sample::new(vec![1.0]).unwrap();
        assert!(matches!(
            PairedSample::new(x, y),
            Err(Error::LengthMismatch(2, 1))
        ));
        assert!(PairedSample::from_slices(&[1.0], &[2.0]).is_err()); // n >= 2
    }

    #[test]
    fn differences_are_y_minus_x() {
        let d = PairedSample::from_slices(&[1.0, 5.0], &[4.0, 3.0])
            .unwrap()
            .differences();
        assert_eq!(d.values(), &[3.0, -2.0]);
    }

    #[test]
    fn grouped_sample_counts_levels_in_first_appearance_order() {
        let g = GroupedSample::new(
            vec![1.0, 2.0, 3.0, 4.0, 5.0],
            ["b", "a", "b", "a", "b"].iter().map(|s| s.to_string()).collect(),
        )
        .unwrap();
        assert_eq!(g.p(), 2);
        assert_eq!(g.levels(), &["b".to_string(), "a".to_string()]);
        assert_eq!(g.counts(), &[3, 2]);
        assert_eq!(g.group_values(0), vec![1.0, 3.0, 5.0]);
    }

    #[test]
    fn grouped_sample_rejects_small_groups() {
        let r = GroupedSample::new(
            vec![1.0, 2.0, 3.0],
            ["a", "a", "b"].iter().map(|s| s.to_string()).collect(),
        );
        assert!(matches!(r, Err(Error::Grouping(_))));
    }

    #[test]
    fn median_conventions() {
        assert_eq!(Sample::from_slice(&[3.0, 1.0, 2.0]).unwrap().median(), 2.0);
        assert_eq!(
            Sample::from_slice(&[4.0, 1.0, 2.0, 3.0]).unwrap().median(),
            2.5
        );
    }
}
