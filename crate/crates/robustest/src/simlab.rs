//! Scenario generators and the rejection-frequency harness.
//!
//! Four data-generating scenarios exercise the tests under nulls that the
//! classical versions are not calibrated for:
//!
//! * `mod1`: y = x^2 + 0.3 e with x, e standard normal (uncorrelated but
//!   dependent pair);
//! * `mod2`: y = (x * 2(e - 0.5))^3 with x uniform and e Bernoulli(1/2)
//!   (again uncorrelated but dependent);
//! * `mod3`: a Bernoulli(2/3) level, x | 0 ~ N(0,1), x | 1 ~ chi2(2)/2
//!   (equal conditional variances, very different shapes);
//! * `mw`: x ~ U(-1/2, 1/2) vs y ~ N(0, 0.04^2) with n2 = 3 n1 (equal
//!   medians, very different distributions).
//!
//! Replicates draw from per-replicate streams, so a rejection table is
//! bit-identical for a given seed no matter how many worker threads run.

use rayon::prelude::*;

use crate::correlation;
use crate::data::{GroupedSample, PairedSample, Sample};
use crate::dist;
use crate::error::{Error, Result};
use crate::kstest;
use crate::rng::RngStream;
use crate::tie::TieBreak;
use crate::twosample;
use crate::variance;

/// Monte Carlo replicates used for KS null p-values inside the harness.
const KS_NULL_REPLICATES: usize = 1000;

/// A simulation scenario with its size parameter (`mw` interprets it as
/// n1, with n2 = 3 n1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Mod1 { n: usize },
    Mod2 { n: usize },
    Mod3 { n: usize },
    Mw { n1: usize },
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Mod1 { .. } => "mod1",
            Scenario::Mod2 { .. } => "mod2",
            Scenario::Mod3 { .. } => "mod3",
            Scenario::Mw { .. } => "mw",
        }
    }

    pub fn size(&self) -> usize {
        match *self {
            Scenario::Mod1 { n } | Scenario::Mod2 { n } | Scenario::Mod3 { n } => n,
            Scenario::Mw { n1 } => n1,
        }
    }

    pub fn with_size(name: &str, size: usize) -> Result<Scenario> {
        match name {
            "mod1" => Ok(Scenario::Mod1 { n: size }),
            "mod2" => Ok(Scenario::Mod2 { n: size }),
            "mod3" => Ok(Scenario::Mod3 { n: size }),
            "mw" => Ok(Scenario::Mw { n1: size }),
            other => Err(Error::Domain(format!(
                "unknown scenario {other:?} (expected mod1, mod2, mod3 or mw)"
            ))),
        }
    }

    fn tag(&self) -> u64 {
        match self {
            Scenario::Mod1 { .. } => 1,
            Scenario::Mod2 { .. } => 2,
            Scenario::Mod3 { .. } => 3,
            Scenario::Mw { .. } => 4,
        }
    }

    /// Tests run by default for this scenario's data shape.
    pub fn default_tests(&self) -> Vec<TestKind> {
        match self {
            Scenario::Mod1 { .. } | Scenario::Mod2 { .. } => vec![
                TestKind::PearsonClassic,
                TestKind::PearsonRobust,
                TestKind::KendallClassic,
                TestKind::KendallRobust,
                TestKind::SpearmanClassic,
                TestKind::SpearmanRobust,
                TestKind::KsIndependence,
            ],
            Scenario::Mod3 { .. } => vec![
                TestKind::Fisher,
                TestKind::Bartlett,
                TestKind::Levene,
                TestKind::VarWelch,
            ],
            Scenario::Mw { .. } => vec![
                TestKind::MwRobust,
                TestKind::MwClassic,
                TestKind::WelchT,
                TestKind::KsTwoSample,
            ],
        }
    }
}

/// Data produced by one replicate of a scenario.
#[derive(Debug, Clone)]
pub enum ScenarioData {
    Paired(PairedSample),
    Grouped(GroupedSample),
    TwoSamples(Sample, Sample),
}

/// Deterministic draw of one replicate: the stream depends only on
/// (seed, scenario, size, replicate index).
pub fn generate(scenario: Scenario, seed: u64, replicate: u64) -> ScenarioData {
    let stream_id = (scenario.tag() << 56) | ((scenario.size() as u64) << 36) | replicate;
    let mut rng = RngStream::new(seed, stream_id);
    match scenario {
        Scenario::Mod1 { n } => {
            let mut x = Vec::with_capacity(n);
            let mut y = Vec::with_capacity(n);
            for _ in 0..n {
                let xi = dist::sample_normal(&mut rng);
                let ei = dist::sample_normal(&mut rng);
                x.push(xi);
                y.push(xi * xi + 0.3 * ei);
            }
            ScenarioData::Paired(PairedSample::from_slices(&x, &y).expect("valid draws"))
        }
        Scenario::Mod2 { n } => {
            let mut x = Vec::with_capacity(n);
            let mut y = Vec::with_capacity(n);
            for _ in 0..n {
                let xi = rng.next_f64();
                let sign = if rng.bernoulli(0.5) { 1.0 } else { -1.0 };
                x.push(xi);
                y.push(sign * xi * xi * xi);
            }
            ScenarioData::Paired(PairedSample::from_slices(&x, &y).expect("valid draws"))
        }
        Scenario::Mod3 { n } => {
            let mut values = Vec::with_capacity(n);
            let mut labels = Vec::with_capacity(n);
            for _ in 0..n {
                if rng.bernoulli(2.0 / 3.0) {
                    values.push(dist::sample_chisq2(&mut rng) / 2.0);
                    labels.push("1".to_string());
                } else {
                    values.push(dist::sample_normal(&mut rng));
                    labels.push("0".to_string());
                }
            }
            ScenarioData::Grouped(GroupedSample::new(values, labels).expect("valid draws"))
        }
        Scenario::Mw { n1 } => {
            let n2 = 3 * n1;
            let x: Vec<f64> = (0..n1).map(|_| rng.uniform(-0.5, 0.5)).collect();
            let y: Vec<f64> = (0..n2)
                .map(|_| 0.04 * dist::sample_normal(&mut rng))
                .collect();
            ScenarioData::TwoSamples(
                Sample::new(x).expect("valid draws"),
                Sample::new(y).expect("valid draws"),
            )
        }
    }
}

/// The tests the harness and CLI can dispatch, identified by their labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestKind {
    PearsonClassic,
    PearsonRobust,
    KendallClassic,
    KendallRobust,
    SpearmanClassic,
    SpearmanRobust,
    KsIndependence,
    Fisher,
    Bartlett,
    Levene,
    VarWelch,
    MwClassic,
    MwRobust,
    WelchT,
    KsTwoSample,
}

impl TestKind {
    pub fn label(&self) -> &'static str {
        match self {
            TestKind::PearsonClassic => "pearson-classic",
            TestKind::PearsonRobust => "pearson-robust",
            TestKind::KendallClassic => "kendall-classic",
            TestKind::KendallRobust => "kendall-robust",
            TestKind::SpearmanClassic => "spearman-classic",
            TestKind::SpearmanRobust => "spearman-robust",
            TestKind::KsIndependence => "ks-independence",
            TestKind::Fisher => "fisher",
            TestKind::Bartlett => "bartlett",
            TestKind::Levene => "levene",
            TestKind::VarWelch => "vwelch",
            TestKind::MwClassic => "mw-classic",
            TestKind::MwRobust => "mw-robust",
            TestKind::WelchT => "welch",
            TestKind::KsTwoSample => "ks-twosample",
        }
    }

    pub fn parse(label: &str) -> Result<TestKind> {
        use TestKind::*;
        let all = [
            PearsonClassic,
            PearsonRobust,
            KendallClassic,
            KendallRobust,
            SpearmanClassic,
            SpearmanRobust,
            KsIndependence,
            Fisher,
            Bartlett,
            Levene,
            VarWelch,
            MwClassic,
            MwRobust,
            WelchT,
            KsTwoSample,
        ];
        all.into_iter()
            .find(|t| t.label() == label)
            .ok_or_else(|| Error::Domain(format!("unknown test label {label:?}")))
    }

    fn applicable(&self, scenario: &Scenario) -> bool {
        use TestKind::*;
        match scenario {
            Scenario::Mod1 { .. } | Scenario::Mod2 { .. } => matches!(
                self,
                PearsonClassic
                    | PearsonRobust
                    | KendallClassic
                    | KendallRobust
                    | SpearmanClassic
                    | SpearmanRobust
                    | KsIndependence
            ),
            Scenario::Mod3 { .. } => matches!(self, Fisher | Bartlett | Levene | VarWelch),
            Scenario::Mw { .. } => matches!(self, MwClassic | MwRobust | WelchT | KsTwoSample),
        }
    }
}

/// Apply one test to one replicate's data and return its p-value.
fn run_test(kind: TestKind, data: &ScenarioData, alpha: f64, rng: &mut RngStream) -> Result<f64> {
    let mut sub = rng.substream(kind as u64 + 10);
    match (kind, data) {
        (TestKind::PearsonClassic, ScenarioData::Paired(d)) => {
            Ok(correlation::pearson_classic(d, alpha)?.outcome.p_value)
        }
        (TestKind::PearsonRobust, ScenarioData::Paired(d)) => {
            Ok(correlation::pearson_robust(d, alpha)?.outcome.p_value)
        }
        (TestKind::KendallClassic, ScenarioData::Paired(d)) => Ok(correlation::kendall_classic(
            d,
            alpha,
            TieBreak::None,
            &mut sub,
        )?
        .outcome
        .p_value),
        (TestKind::KendallRobust, ScenarioData::Paired(d)) => Ok(correlation::kendall_robust(
            d,
            alpha,
            TieBreak::None,
            &mut sub,
        )?
        .outcome
        .p_value),
        (TestKind::SpearmanClassic, ScenarioData::Paired(d)) => Ok(
            correlation::spearman_classic(d, alpha, TieBreak::None, &mut sub)?
                .outcome
                .p_value,
        ),
        (TestKind::SpearmanRobust, ScenarioData::Paired(d)) => Ok(correlation::spearman_robust(
            d,
            alpha,
            TieBreak::None,
            &mut sub,
        )?
        .outcome
        .p_value),
        (TestKind::KsIndependence, ScenarioData::Paired(d)) => Ok(kstest::ks_independence_test(
            d,
            KS_NULL_REPLICATES,
            &mut sub,
            TieBreak::None,
        )?
        .p_value),
        (TestKind::Fisher, ScenarioData::Grouped(g)) => {
            let (a, b) = g.split_two()?;
            Ok(variance::fisher_vartest(&a, &b)?.p_value)
        }
        (TestKind::Bartlett, ScenarioData::Grouped(g)) => Ok(variance::bartlett_test(g)?.p_value),
        (TestKind::Levene, ScenarioData::Grouped(g)) => Ok(variance::levene_bf_test(g)?.p_value),
        (TestKind::VarWelch, ScenarioData::Grouped(g)) => {
            Ok(variance::vartest_robust(g)?.outcome.p_value)
        }
        (TestKind::MwClassic, ScenarioData::TwoSamples(x, y)) => {
            Ok(twosample::mannwhitney_classic(x, y, TieBreak::None, &mut sub)?.p_value)
        }
        (TestKind::MwRobust, ScenarioData::TwoSamples(x, y)) => Ok(twosample::mannwhitney_robust(
            x,
            y,
            TieBreak::None,
            &mut sub,
        )?
        .outcome
        .p_value),
        (TestKind::WelchT, ScenarioData::TwoSamples(x, y)) => {
            Ok(twosample::welch_ttest(x, y, alpha)?.p_value)
        }
        (TestKind::KsTwoSample, ScenarioData::TwoSamples(x, y)) => {
            Ok(twosample::ks_twosample(x, y, TieBreak::None, &mut sub)?.p_value)
        }
        _ => Err(Error::Inapplicable {
            test: kind.label().into(),
            scenario: "this data shape".into(),
        }),
    }
}

/// One (test, size) cell of a rejection table.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectionCell {
    pub scenario: String,
    pub test: TestKind,
    pub size: usize,
    pub rejections: usize,
    /// Replicates where the test errored (degenerate draw); counted as
    /// non-rejections in the frequency.
    pub failures: usize,
    pub replicates: usize,
}

impl RejectionCell {
    pub fn frequency(&self) -> f64 {
        self.rejections as f64 / self.replicates as f64
    }

    /// Binomial Monte Carlo standard error sqrt(f (1-f) / N).
    pub fn mc_standard_error(&self) -> f64 {
        let f = self.frequency();
        (f * (1.0 - f) / self.replicates as f64).sqrt()
    }
}

/// A full rejection-frequency report, serializable to delimited text.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectionReport {
    pub scenario_name: String,
    pub alpha: f64,
    pub seed: u64,
    pub cells: Vec<RejectionCell>,
}

impl RejectionReport {
    pub fn cell(&self, test: TestKind, size: usize) -> Option<&RejectionCell> {
        self.cells
            .iter()
            .find(|c| c.test == test && c.size == size)
    }

    /// One CSV row per cell: scenario,test,n,frequency,stderr,N,seed.
    pub fn to_delimited(&self) -> String {
        let mut out = String::from("scenario,test,n,frequency,stderr,replicates,seed\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{:.6},{:.6},{},{}\n",
                c.scenario,
                c.test.label(),
                c.size,
                c.frequency(),
                c.mc_standard_error(),
                c.replicates,
                self.seed
            ));
        }
        out
    }
}

/// Run `replicates` independent draws of the scenario at every size and
/// record how often each test rejects at level `alpha`.
///
/// Deterministic for a given seed independently of the worker-thread
/// count: replicate streams are indexed, and aggregation is a sum.
pub fn rejection_table(
    scenario_name: &str,
    tests: &[TestKind],
    sizes: &[usize],
    replicates: usize,
    alpha: f64,
    seed: u64,
) -> Result<RejectionReport> {
    if replicates == 0 {
        return Err(Error::Domain("need at least one replicate".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} not in (0, 1)")));
    }
    let mut cells = Vec::new();
    for &size in sizes {
        let scenario = Scenario::with_size(scenario_name, size)?;
        for t in tests {
            if !t.applicable(&scenario) {
                return Err(Error::Inapplicable {
                    test: t.label().into(),
                    scenario: scenario.name().into(),
                });
            }
        }
        // Warm shared null tables before fanning out so parallel replicates
        // reuse them instead of racing to build.
        if tests.contains(&TestKind::PearsonRobust)
            && (3..dist::PEARSON_SMALL_N_LIMIT).contains(&size)
        {
            dist::pearson_null_table(size)?;
        }
        if tests.contains(&TestKind::KsIndependence) {
            kstest::ks_null_cache(kstest::KsKind::Independence, size, KS_NULL_REPLICATES, seed);
        }
        let per_replicate: Vec<Vec<Option<bool>>> = (0..replicates as u64)
            .into_par_iter()
            .map(|rep| {
                let data = generate(scenario, seed, rep);
                let mut rng = RngStream::new(seed, (scenario.tag() << 56) | (1 << 52) | rep);
                tests
                    .iter()
                    .map(|&t| run_test(t, &data, alpha, &mut rng).ok().map(|p| p < alpha))
                    .collect()
            })
            .collect();
        for (ti, &t) in tests.iter().enumerate() {
            let mut rejections = 0;
            let mut failures = 0;
            for row in &per_replicate {
                match row[ti] {
                    Some(true) => rejections += 1,
                    Some(false) => {}
                    None => failures += 1,
                }
            }
            cells.push(RejectionCell {
                scenario: scenario.name().to_string(),
                test: t,
                size,
                rejections,
                failures,
                replicates,
            });
        }
    }
    Ok(RejectionReport {
        scenario_name: scenario_name.to_string(),
        alpha,
        seed,
        cells,
    })
}
