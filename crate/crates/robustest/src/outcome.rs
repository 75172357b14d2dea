//! Common result type returned by every test.

/// A two-sided confidence interval at a nominal level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfInterval {
    pub lower: f64,
    pub upper: f64,
    /// Nominal coverage, e.g. 0.95.
    pub level: f64,
}

/// Statistic, p-value and reporting metadata shared by all tests.
#[derive(Debug, Clone)]
pub struct TestOutcome {
    /// Machine-readable method label, e.g. "pearson-robust".
    pub method: String,
    pub statistic: f64,
    /// Two-sided p-value in [0, 1].
    pub p_value: f64,
    /// Point estimate when the test has a natural one (correlation
    /// coefficient, median, ...).
    pub estimate: Option<f64>,
    pub ci: Option<ConfInterval>,
    /// Sample sizes used: [n] or [n1, n2] or per-group counts.
    pub n_info: Vec<usize>,
    /// Human-readable warnings (ties broken, degeneracies, ...).
    pub notes: Vec<String>,
}

impl TestOutcome {
    pub fn new(method: &str, statistic: f64, p_value: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&p_value), "p out of range: {p_value}");
        TestOutcome {
            method: method.to_string(),
            statistic,
            p_value,
            estimate: None,
            ci: None,
            n_info: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_estimate(mut self, estimate: f64) -> Self {
        self.estimate = Some(estimate);
        self
    }

    pub fn with_ci(mut self, lower: f64, upper: f64, level: f64) -> Self {
        debug_assert!(lower <= upper);
        self.ci = Some(ConfInterval {
            lower,
            upper,
            level,
        });
        self
    }

    pub fn with_n(mut self, n_info: &[usize]) -> Self {
        self.n_info = n_info.to_vec();
        self
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.notes.push(note.to_string());
        self
    }
}
