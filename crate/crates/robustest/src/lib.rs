//! Asymptotically well-calibrated ("robust") bivariate hypothesis tests.
//!
//! The classical correlation, variance-equality and stochastic-dominance
//! tests are calibrated under assumptions (bivariate normality, identical
//! distributions, symmetry) that their null hypotheses do not actually
//! require; outside those assumptions their type I error can be far from
//! the nominal level. Each robust version here renormalizes the statistic
//! by an empirical estimate of its limiting null variance, restoring the
//! standard normal calibration asymptotically under mild moment or
//! continuity conditions only.
//!
//! What's inside:
//!
//! * [`correlation`]: classical and robust Pearson, Kendall and Spearman
//!   tests (robust Pearson uses a simulated small-sample null table);
//! * [`kstest`]: distribution-free Kolmogorov-Smirnov independence and
//!   symmetry tests with Monte Carlo p-values;
//! * [`variance`]: James-Welch ANOVA, the robust variance-equality test,
//!   and Fisher / Bartlett / Levene baselines;
//! * [`twosample`]: robust and classical Mann-Whitney, Welch's t, and the
//!   two-sample Kolmogorov-Smirnov test;
//! * [`paired`]: the order-statistic median test and the robust Wilcoxon
//!   signed-rank test;
//! * [`simlab`]: seeded, thread-count-independent Monte Carlo rejection
//!   tables for all of the above;
//! * [`cli`]: the `robustest` command-line tool.
//!
//! Every Monte Carlo path draws from the counter-based [`RngStream`], so
//! identical seeds give bit-identical results across platforms and worker
//! counts. See the `examples/` directory for one runnable walk-through per
//! capability.

pub mod cli;
pub mod correlation;
pub mod csv;
pub mod data;
pub mod dist;
pub mod error;
pub mod kstest;
pub mod outcome;
pub mod paired;
pub mod rank;
pub mod rng;
pub mod simlab;
pub mod tie;
pub mod twosample;
pub mod variance;

mod util;

pub use data::{GroupedSample, PairedSample, Sample};
pub use error::{Error, Result};
pub use outcome::{ConfInterval, TestOutcome};
pub use rng::RngStream;
pub use tie::TieBreak;
