//! CLI integration tests: flag coverage, exit codes, determinism of the
//! output bytes, and the text/csv round trip.

use std::io::Write as _;

use robustest::cli;

fn run(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("robustest".to_string()).chain(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn temp_csv(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

fn sample_csv() -> tempfile::NamedTempFile {
    // 12 tie-free rows plus a flag column for filter tests
    temp_csv(
        "x,y,flag\n\
         0.12,1.4,1\n0.35,2.2,1\n0.58,1.9,0\n0.71,2.7,1\n0.93,3.6,1\n\
         1.18,2.9,1\n1.34,4.1,0\n1.52,3.8,1\n1.77,4.6,1\n1.95,4.2,1\n\
         2.13,5.3,1\n2.31,4.9,1\n",
    )
}

#[test]
fn help_exits_zero_and_documents_flags() {
    let expected: &[(&str, &[&str])] = &[
        (
            "cortest",
            &[
                "--input",
                "--x",
                "--y",
                "--method",
                "--ties-break",
                "--alpha",
                "--alternative",
                "--seed",
                "--format",
                "--filter",
            ],
        ),
        (
            "indeptest",
            &["--input", "--x", "--y", "--replicates", "--ties-break", "--seed"],
        ),
        ("vartest", &["--input", "--value", "--group", "--alpha"]),
        (
            "wilcoxtest",
            &["--input", "--x", "--y", "--paired", "--ties-break", "--seed"],
        ),
        ("mediantest", &["--input", "--value", "--x", "--y", "--alpha"]),
        ("tiebreak", &["--input", "--value", "--seed"]),
        (
            "simulate",
            &[
                "--scenario",
                "--sizes",
                "--replicates",
                "--tests",
                "--alpha",
                "--seed",
                "--format",
            ],
        ),
    ];
    for (sub, flags) in expected {
        let (code, out, _) = run(&[sub, "--help"]);
        assert_eq!(code, 0, "{sub} --help exit code");
        for flag in *flags {
            assert!(out.contains(flag), "{sub} --help missing {flag}\n{out}");
        }
    }
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["cortest", "indeptest", "vartest", "wilcoxtest", "mediantest", "tiebreak", "simulate"] {
        assert!(out.contains(sub), "top-level help missing {sub}");
    }
}

#[test]
fn cortest_text_and_csv_agree_with_the_library() {
    let f = sample_csv();
    let path = f.path().to_str().unwrap();
    let (code, text, _) = run(&["cortest", "--input", path, "--x", "x", "--y", "y"]);
    assert_eq!(code, 0);
    assert!(text.contains("Robust Pearson correlation test"), "{text}");
    assert!(text.contains("n = 12"));

    let (code, csv, _) = run(&[
        "cortest", "--input", path, "--x", "x", "--y", "y", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "method,statistic,p_value,estimate,ci_lower,ci_upper,ci_level,n,notes"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "pearson-robust");
    let statistic: f64 = row[1].parse().unwrap();
    let p_value: f64 = row[2].parse().unwrap();
    let estimate: f64 = row[3].parse().unwrap();

    // must match a direct library call bit-for-bit (12 significant digits
    // trivially included)
    let table = robustest::csv::load_csv(f.path(), &["x", "y"], None).unwrap();
    let d = robustest::PairedSample::from_slices(
        table.column("x").unwrap(),
        table.column("y").unwrap(),
    )
    .unwrap();
    let direct = robustest::correlation::pearson_robust(&d, 0.05).unwrap();
    assert_eq!(statistic, direct.outcome.statistic);
    assert_eq!(p_value, direct.outcome.p_value);
    assert_eq!(estimate, direct.outcome.estimate.unwrap());
}

#[test]
fn same_argv_same_seed_same_bytes() {
    let f = temp_csv("x,y\n1,5\n1,6\n2,7\n3,8\n3,9\n4,10\n5,11\n6,12\n");
    let path = f.path().to_str().unwrap();
    let args = [
        "cortest", "--input", path, "--x", "x", "--y", "y", "--method", "kendall",
        "--ties-break", "random", "--seed", "9",
    ];
    let (c1, out1, _) = run(&args);
    let (c2, out2, _) = run(&args);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(out1, out2, "seeded runs must be byte-identical");
    assert!(out1.contains("note:"), "tie-break note expected\n{out1}");
}

#[test]
fn tie_error_maps_to_exit_code_2() {
    let f = temp_csv("x,y\n1,5\n1,6\n2,7\n3,8\n");
    let path = f.path().to_str().unwrap();
    let (code, _, err) = run(&[
        "cortest", "--input", path, "--x", "x", "--y", "y", "--method", "kendall",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("ties"), "{err}");
}

#[test]
fn usage_errors_map_to_exit_code_1() {
    let (code, _, err) = run(&["cortest", "--definitely-not-a-flag"]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
    let f = sample_csv();
    let path = f.path().to_str().unwrap();
    let (code, _, _) = run(&[
        "cortest", "--input", path, "--x", "x", "--y", "y", "--alternative", "less",
    ]);
    assert_eq!(code, 1, "one-sided alternatives are reserved");
    let (code, _, _) = run(&["nonsense-subcommand"]);
    assert_eq!(code, 1);
}

#[test]
fn data_errors_map_to_exit_code_2() {
    let (code, _, err) = run(&[
        "cortest", "--input", "/no/such/file.csv", "--x", "a", "--y", "b",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("error:"));

    let f = temp_csv("a,b\n1,2\n3,4\n");
    let (code, _, err) = run(&[
        "cortest",
        "--input",
        f.path().to_str().unwrap(),
        "--x",
        "missing",
        "--y",
        "b",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("missing"), "{err}");
}

#[test]
fn filter_restricts_rows() {
    let f = sample_csv();
    let path = f.path().to_str().unwrap();
    let (code, out, _) = run(&[
        "cortest", "--input", path, "--x", "x", "--y", "y", "--filter", "flag==1",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("n = 10"), "{out}");
}

#[test]
fn indeptest_and_wilcoxtest_and_vartest_and_mediantest_run() {
    let f = sample_csv();
    let path = f.path().to_str().unwrap();

    let (code, out, _) = run(&["indeptest", "--input", path, "--x", "x", "--y", "y",
        "--replicates", "200", "--seed", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("Kolmogorov-Smirnov independence test"), "{out}");

    let (code, out, _) = run(&["wilcoxtest", "--input", path, "--x", "x", "--y", "y"]);
    assert_eq!(code, 0);
    assert!(out.contains("Robust Mann-Whitney test"), "{out}");

    let (code, out, _) = run(&["wilcoxtest", "--input", path, "--x", "x", "--y", "y", "--paired"]);
    assert_eq!(code, 0);
    assert!(out.contains("Robust Wilcoxon signed-rank test"), "{out}");

    let g = temp_csv(
        "v,grp\n0.4,0\n-0.7,0\n1.2,0\n0.3,0\n-0.2,0\n0.8,1\n0.1,1\n1.9,1\n-0.5,1\n0.6,1\n",
    );
    let (code, out, _) = run(&[
        "vartest",
        "--input",
        g.path().to_str().unwrap(),
        "--value",
        "v",
        "--group",
        "grp",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("Robust variance-equality test"), "{out}");
    assert!(out.contains("chi-square p-value"), "{out}");

    let m = temp_csv("d\n-0.4\n0.2\n0.9\n-1.4\n0.5\n1.8\n-0.8\n0.3\n1.1\n-0.1\n0.7\n-1.9\n");
    let (code, out, _) = run(&[
        "mediantest",
        "--input",
        m.path().to_str().unwrap(),
        "--value",
        "d",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("Median test"), "{out}");
    assert!(out.contains("order-statistic indices"), "{out}");

    let (code, out, _) = run(&["mediantest", "--input", path, "--x", "x", "--y", "y"]);
    assert_eq!(code, 0);
    assert!(out.contains("Median test"), "{out}");
}

#[test]
fn tiebreak_outputs_distinct_values() {
    let f = temp_csv("v\n3\n1\n1\n2\n2\n2\n");
    let (code, out, _) = run(&[
        "tiebreak",
        "--input",
        f.path().to_str().unwrap(),
        "--value",
        "v",
        "--seed",
        "11",
    ]);
    assert_eq!(code, 0);
    let values: Vec<f64> = out
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(values.len(), 6);
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    assert!(sorted.windows(2).all(|w| w[0] < w[1]), "{values:?}");
    assert_eq!(values[0], 3.0, "untied maximum must not move");
}

#[test]
fn simulate_is_deterministic_and_csv_parsable() {
    let args = [
        "simulate", "--scenario", "mw", "--sizes", "20", "--replicates", "80",
        "--seed", "3", "--format", "csv",
    ];
    let (code, out1, _) = run(&args);
    assert_eq!(code, 0);
    let (_, out2, _) = run(&args);
    assert_eq!(out1, out2);
    let mut lines = out1.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scenario,test,n,frequency,stderr,replicates,seed"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4); // four default tests for the mw scenario
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells[0], "mw");
        let f: f64 = cells[3].parse().unwrap();
        assert!((0.0..=1.0).contains(&f));
    }

    let (code, text, _) = run(&[
        "simulate", "--scenario", "mw", "--sizes", "20", "--replicates", "80", "--seed", "3",
    ]);
    assert_eq!(code, 0);
    assert!(text.contains("mw-robust"), "{text}");

    // unknown scenario and inapplicable test are data errors
    let (code, _, _) = run(&["simulate", "--scenario", "bogus", "--sizes", "20"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&[
        "simulate", "--scenario", "mod3", "--sizes", "60", "--replicates", "10",
        "--tests", "pearson-robust",
    ]);
    assert_eq!(code, 2);
}
