//! Error type shared by all tests and the CLI.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,

    #[error("non-finite value at position {0}")]
    NonFinite(usize),

    #[error("paired samples have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },

    /// Zero-variance or otherwise degenerate input for which the statistic
    /// is undefined.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Ties are fatal for the rank-based statistics unless the caller asks
    /// for random tie-breaking.
    #[error("ties detected in {place} (value {value} repeats); rerun with ties_break=random")]
    Ties { place: String, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid grouping: {0}")]
    Grouping(String),

    #[error("test {test} is not applicable to scenario {scenario}")]
    Inapplicable { test: String, scenario: String },

    #[error("csv error: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
