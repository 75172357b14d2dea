//! Command-line front end.
//!
//! Subcommands mirror the test functions: `cortest`, `indeptest`,
//! `vartest`, `wilcoxtest`, `mediantest`, plus `simulate` (the rejection
//! table harness) and `tiebreak`. Exit codes: 0 success, 1 usage error,
//! 2 data or degeneracy error.

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::correlation;
use crate::csv::{load_csv, Filter};
use crate::data::{GroupedSample, PairedSample, Sample};
use crate::error::{Error, Result};
use crate::kstest;
use crate::outcome::TestOutcome;
use crate::paired;
use crate::rng::RngStream;
use crate::simlab::{self, TestKind};
use crate::tie::{tiebreak, TieBreak};
use crate::twosample;
use crate::variance;

/// Used when neither `--seed` nor `ROBUSTEST_SEED` is given.
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Parser)]
#[command(
    name = "robustest",
    version,
    about = "Calibration-robust bivariate hypothesis tests",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Pearson,
    Kendall,
    Spearman,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TiesArg {
    None,
    Random,
}

impl From<TiesArg> for TieBreak {
    fn from(t: TiesArg) -> TieBreak {
        match t {
            TiesArg::None => TieBreak::None,
            TiesArg::Random => TieBreak::Random,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args)]
struct CommonOpts {
    /// Input CSV file (comma delimiter, header line required)
    #[arg(long)]
    input: PathBuf,
    /// Keep only rows where a column equals a value, e.g. CDH==1
    #[arg(long)]
    filter: Option<String>,
    /// Significance level for tests and confidence intervals
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Alternative hypothesis (only two-sided is implemented)
    #[arg(long, default_value = "two-sided", value_parser = ["two-sided"])]
    alternative: String,
    /// Random seed (default: ROBUSTEST_SEED or a fixed constant)
    #[arg(long)]
    seed: Option<u64>,
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Robust correlation test (Pearson, Kendall or Spearman)
    Cortest {
        #[command(flatten)]
        common: CommonOpts,
        /// Column with the first variable
        #[arg(long)]
        x: String,
        /// Column with the second variable
        #[arg(long)]
        y: String,
        /// Correlation flavor
        #[arg(long, value_enum, default_value = "pearson")]
        method: Method,
        /// Tie policy for the rank-based methods
        #[arg(long, value_enum, default_value = "none")]
        ties_break: TiesArg,
    },
    /// Kolmogorov-Smirnov independence test with Monte Carlo p-value
    Indeptest {
        #[command(flatten)]
        common: CommonOpts,
        /// Column with the first variable
        #[arg(long)]
        x: String,
        /// Column with the second variable
        #[arg(long)]
        y: String,
        /// Monte Carlo replicates for the null distribution
        #[arg(long, default_value_t = kstest::DEFAULT_REPLICATES)]
        replicates: usize,
        /// Tie policy
        #[arg(long, value_enum, default_value = "none")]
        ties_break: TiesArg,
    },
    /// Robust test for equality of conditional variances
    Vartest {
        #[command(flatten)]
        common: CommonOpts,
        /// Column with the numeric values
        #[arg(long)]
        value: String,
        /// Column with the categorical level per value
        #[arg(long)]
        group: String,
    },
    /// Robust stochastic-dominance test: Mann-Whitney (unpaired) or
    /// signed-rank (with --paired)
    Wilcoxtest {
        #[command(flatten)]
        common: CommonOpts,
        /// Column with the first sample
        #[arg(long)]
        x: String,
        /// Column with the second sample
        #[arg(long)]
        y: String,
        /// Treat x and y as paired observations
        #[arg(long)]
        paired: bool,
        /// Tie policy
        #[arg(long, value_enum, default_value = "none")]
        ties_break: TiesArg,
    },
    /// Median test with an order-statistic confidence interval
    Mediantest {
        #[command(flatten)]
        common: CommonOpts,
        /// Column with a single sample of differences
        #[arg(long, conflicts_with_all = ["x", "y"])]
        value: Option<String>,
        /// Column with the first paired sample (differences y - x are used)
        #[arg(long, requires = "y")]
        x: Option<String>,
        /// Column with the second paired sample
        #[arg(long, requires = "x")]
        y: Option<String>,
    },
    /// Remove ties from a column by seeded random perturbation
    Tiebreak {
        #[command(flatten)]
        common: CommonOpts,
        /// Column to de-tie
        #[arg(long)]
        value: String,
    },
    /// Monte Carlo rejection-frequency tables
    Simulate {
        /// Scenario: mod1, mod2, mod3 or mw
        #[arg(long)]
        scenario: String,
        /// Comma-separated sample sizes, e.g. 30,60,100
        #[arg(long)]
        sizes: String,
        /// Replicates per (test, size) cell
        #[arg(long, default_value_t = 2000)]
        replicates: usize,
        /// Comma-separated test labels (default: all tests for the scenario)
        #[arg(long)]
        tests: Option<String>,
        /// Significance level
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Random seed (default: ROBUSTEST_SEED or a fixed constant)
        #[arg(long)]
        seed: Option<u64>,
        /// Output format
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    if let Some(s) = flag {
        return s;
    }
    if let Ok(text) = std::env::var("ROBUSTEST_SEED") {
        let text = text.trim();
        let parsed = if let Some(hex) = text.strip_prefix("0x") {
            u64::from_str_radix(hex, 16).ok()
        } else {
            text.parse().ok()
        };
        if let Some(s) = parsed {
            return s;
        }
    }
    DEFAULT_SEED
}

/// Entry point shared by the binary and the tests. Writes the report to
/// `out`, errors to `err`, and returns the process exit code.
pub fn run<I>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Cortest {
            common,
            x,
            y,
            method,
            ties_break,
        } => {
            let d = load_pair(&common, &x, &y)?;
            let mut rng = RngStream::new(resolve_seed(common.seed), 0);
            let r = match method {
                Method::Pearson => correlation::pearson_robust(&d, common.alpha)?,
                Method::Kendall => {
                    correlation::kendall_robust(&d, common.alpha, ties_break.into(), &mut rng)?
                }
                Method::Spearman => {
                    correlation::spearman_robust(&d, common.alpha, ties_break.into(), &mut rng)?
                }
            };
            let extra: Vec<(String, String)> = r
                .variance_estimate
                .map(|v| vec![("variance estimate".to_string(), fmt_sig(v, 6))])
                .unwrap_or_default();
            report(out, common.format, &r.outcome, &extra)
        }
        Command::Indeptest {
            common,
            x,
            y,
            replicates,
            ties_break,
        } => {
            let d = load_pair(&common, &x, &y)?;
            let mut rng = RngStream::new(resolve_seed(common.seed), 0);
            let o = kstest::ks_independence_test(&d, replicates, &mut rng, ties_break.into())?;
            report(out, common.format, &o, &[])
        }
        Command::Vartest {
            common,
            value,
            group,
        } => {
            let filter = parse_filter(&common)?;
            let table = load_csv(&common.input, &[&value, &group], filter.as_ref())?;
            let values = table.column(&value).unwrap().to_vec();
            let labels: Vec<String> = table
                .column(&group)
                .unwrap()
                .iter()
                .map(|v| format!("{v}"))
                .collect();
            let g = GroupedSample::new(values, labels)?;
            let r = variance::vartest_robust(&g)?;
            let extra = vec![
                (
                    "degrees of freedom".to_string(),
                    format!("{}, {}", fmt_sig(r.df1, 6), fmt_sig(r.df2, 6)),
                ),
                (
                    "chi-square p-value".to_string(),
                    fmt_sig(r.p_value_chisq, 4),
                ),
            ];
            report(out, common.format, &r.outcome, &extra)
        }
        Command::Wilcoxtest {
            common,
            x,
            y,
            paired,
            ties_break,
        } => {
            let mut rng = RngStream::new(resolve_seed(common.seed), 0);
            if paired {
                let d = load_pair(&common, &x, &y)?;
                let r = paired::signedrank_robust(&d.differences(), ties_break.into(), &mut rng)?;
                let extra = vec![
                    ("pair count".to_string(), format!("{}", r.u_statistic)),
                    (
                        "variance estimate".to_string(),
                        fmt_sig(r.variance_estimate, 6),
                    ),
                ];
                report(out, common.format, &r.outcome, &extra)
            } else {
                let filter = parse_filter(&common)?;
                let tx = load_csv(&common.input, &[&x], filter.as_ref())?;
                let ty = load_csv(&common.input, &[&y], filter.as_ref())?;
                let a = Sample::new(tx.column(&x).unwrap().to_vec())?;
                let b = Sample::new(ty.column(&y).unwrap().to_vec())?;
                let r = twosample::mannwhitney_robust(&a, &b, ties_break.into(), &mut rng)?;
                let extra = vec![(
                    "estimated P(X < Y)".to_string(),
                    fmt_sig(r.prob_x_less_y(), 6),
                )];
                report(out, common.format, &r.outcome, &extra)
            }
        }
        Command::Mediantest { common, value, x, y } => {
            let diffs = match (&value, &x, &y) {
                (Some(v), None, None) => {
                    let filter = parse_filter(&common)?;
                    let t = load_csv(&common.input, &[v], filter.as_ref())?;
                    Sample::new(t.column(v).unwrap().to_vec())?
                }
                (None, Some(xc), Some(yc)) => load_pair(&common, xc, yc)?.differences(),
                _ => {
                    return Err(Error::Domain(
                        "mediantest needs either --value or both --x and --y".into(),
                    ))
                }
            };
            let r = paired::mediantest(&diffs, common.alpha)?;
            let extra = vec![(
                "order-statistic indices".to_string(),
                format!("{}, {}", r.ci.k_index, r.ci.l_index),
            )];
            report(out, common.format, &r.outcome, &extra)
        }
        Command::Tiebreak { common, value } => {
            let filter = parse_filter(&common)?;
            let t = load_csv(&common.input, &[&value], filter.as_ref())?;
            let s = Sample::new(t.column(&value).unwrap().to_vec())?;
            let mut rng = RngStream::new(resolve_seed(common.seed), 0);
            let (broken, notes) = tiebreak(&s, &mut rng);
            match common.format {
                Format::Text | Format::Csv => {
                    for v in broken.values() {
                        writeln!(out, "{v:?}")?;
                    }
                    for n in notes {
                        writeln!(out, "# note: {n}")?;
                    }
                }
            }
            Ok(())
        }
        Command::Simulate {
            scenario,
            sizes,
            replicates,
            tests,
            alpha,
            seed,
            format,
        } => {
            let sizes: Vec<usize> = sizes
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::Domain(format!("invalid size {s:?}")))
                })
                .collect::<Result<_>>()?;
            if sizes.is_empty() {
                return Err(Error::Domain("need at least one size".into()));
            }
            let test_kinds: Vec<TestKind> = match &tests {
                Some(list) => list
                    .split(',')
                    .map(|t| TestKind::parse(t.trim()))
                    .collect::<Result<_>>()?,
                None => simlab::Scenario::with_size(&scenario, sizes[0])?.default_tests(),
            };
            let seed = resolve_seed(seed);
            let report =
                simlab::rejection_table(&scenario, &test_kinds, &sizes, replicates, alpha, seed)?;
            match format {
                Format::Csv => {
                    write!(out, "{}", report.to_delimited())?;
                }
                Format::Text => {
                    writeln!(
                        out,
                        "scenario: {}   alpha = {}   replicates = {}   seed = {}",
                        report.scenario_name, report.alpha, replicates, seed
                    )?;
                    writeln!(out, "{:<18} {:>6} {:>11} {:>11}", "test", "n", "frequency", "stderr")?;
                    for c in &report.cells {
                        writeln!(
                            out,
                            "{:<18} {:>6} {:>11.4} {:>11.4}",
                            c.test.label(),
                            c.size,
                            c.frequency(),
                            c.mc_standard_error()
                        )?;
                    }
                }
            }
            Ok(())
        }
    }
}

fn parse_filter(common: &CommonOpts) -> Result<Option<Filter>> {
    common.filter.as_deref().map(Filter::parse).transpose()
}

fn load_pair(common: &CommonOpts, x: &str, y: &str) -> Result<PairedSample> {
    let filter = parse_filter(common)?;
    let t = load_csv(&common.input, &[x, y], filter.as_ref())?;
    PairedSample::new(
        Sample::new(t.column(x).unwrap().to_vec())?,
        Sample::new(t.column(y).unwrap().to_vec())?,
    )
}

fn title(method: &str) -> &'static str {
    match method {
        "pearson-robust" => "Robust Pearson correlation test",
        "pearson-classic" => "Pearson correlation test",
        "kendall-robust" => "Robust Kendall correlation test",
        "kendall-classic" => "Kendall correlation test",
        "spearman-robust" => "Robust Spearman correlation test",
        "spearman-classic" => "Spearman correlation test",
        "ks-independence" => "Kolmogorov-Smirnov independence test (Monte Carlo)",
        "ks-symmetry" => "Kolmogorov-Smirnov symmetry test (Monte Carlo)",
        "vwelch" => "Robust variance-equality test (James-Welch)",
        "welch-anova" => "James-Welch heteroscedastic ANOVA",
        "mw-robust" => "Robust Mann-Whitney test",
        "mw-classic" => "Mann-Whitney test",
        "welch" => "Welch two-sample t test",
        "ks-twosample" => "Two-sample Kolmogorov-Smirnov test",
        "signedrank-robust" => "Robust Wilcoxon signed-rank test",
        "signedrank-classic" => "Wilcoxon signed-rank test",
        "mediantest" => "Median test (order-statistic confidence interval)",
        _ => "Hypothesis test",
    }
}

/// Format with `digits` significant digits, plain decimal notation,
/// trailing zeros trimmed.
fn fmt_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - mag).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn outcome_csv(o: &TestOutcome) -> String {
    let opt = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
    let mut line = String::from("method,statistic,p_value,estimate,ci_lower,ci_upper,ci_level,n,notes\n");
    line.push_str(&format!(
        "{},{:?},{:?},{},{},{},{},{},{}\n",
        o.method,
        o.statistic,
        o.p_value,
        opt(o.estimate),
        opt(o.ci.map(|c| c.lower)),
        opt(o.ci.map(|c| c.upper)),
        opt(o.ci.map(|c| c.level)),
        o.n_info
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(";"),
        o.notes.join("; ").replace(',', ";"),
    ));
    line
}

fn report(
    out: &mut dyn Write,
    format: Format,
    o: &TestOutcome,
    extra: &[(String, String)],
) -> Result<()> {
    match format {
        Format::Csv => {
            write!(out, "{}", outcome_csv(o))?;
        }
        Format::Text => {
            writeln!(out, "{}", title(&o.method))?;
            writeln!(out)?;
            writeln!(
                out,
                "statistic = {}, p-value = {}",
                fmt_sig(o.statistic, 6),
                fmt_sig(o.p_value, 4)
            )?;
            if let Some(est) = o.estimate {
                writeln!(out, "estimate = {}", fmt_sig(est, 6))?;
            }
            if let Some(ci) = o.ci {
                writeln!(
                    out,
                    "{} percent confidence interval: [{}, {}]",
                    fmt_sig(ci.level * 100.0, 4),
                    fmt_sig(ci.lower, 4),
                    fmt_sig(ci.upper, 4)
                )?;
            }
            for (k, v) in extra {
                writeln!(out, "{k} = {v}")?;
            }
            let n_text = o
                .n_info
                .iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            writeln!(out, "n = {n_text}")?;
            for note in &o.notes {
                writeln!(out, "note: {note}")?;
            }
        }
    }
    Ok(())
}
