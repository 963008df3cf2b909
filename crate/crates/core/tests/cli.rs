use std::path::Path;
use std::process::{Command, Output};

use monotone_mle::dataset;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_monotone-mle"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn sat_file(dir: &Path) -> String {
    let path = dir.join("sat.csv");
    std::fs::write(&path, dataset::SAT_R_CSV).unwrap();
    path.to_str().unwrap().to_string()
}

const TABLE1_TEXT: &str = "\
direction\tnondecreasing
levels\t35
blocks\t8
block\tfirst\tlast\ttotal\tsum\ttau\ttau_approx
1\t330\t430\t15\t0\t0.0000000000000000e0\t0.0000
2\t440\t530\t69\t9\t1.3043478260869565e-1\t0.1304
3\t540\t580\t35\t5\t1.4285714285714285e-1\t0.1429
4\t590\t590\t5\t1\t2.0000000000000001e-1\t0.2000
5\t600\t600\t3\t1\t3.3333333333333331e-1\t0.3333
6\t610\t660\t19\t7\t3.6842105263157893e-1\t0.3684
7\t680\t750\t5\t2\t4.0000000000000002e-1\t0.4000
8\t800\t800\t1\t1\t1.0000000000000000e0\t1.0000
overall\t330\t800\t152\t26\t1.7105263157894737e-1\t0.1711
";

#[test]
fn fit_reproduces_table_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = sat_file(dir.path());
    let out = run(&[
        "fit",
        "--input",
        &input,
        "--format",
        "aggregate",
        "--direction",
        "nondecreasing",
    ]);
    assert_eq!(stdout(&out), TABLE1_TEXT);
}

#[test]
fn fit_nonincreasing_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let input = sat_file(dir.path());
    let text = stdout(&run(&[
        "fit",
        "--input",
        &input,
        "--direction",
        "nonincreasing",
        "--emit",
        "phi",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 36);
    assert!(
        lines[1..]
            .iter()
            .all(|l| l.ends_with(",0.17105263157894737")),
        "{text}"
    );
}

#[test]
fn plot_data_has_one_row_per_level() {
    let dir = tempfile::tempdir().unwrap();
    let input = sat_file(dir.path());
    let text = stdout(&run(&["fit", "--input", &input, "--emit", "plotdata"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("level,observed_mean,fitted_phi"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 35);
    assert_eq!(rows[0], "330,0,0");
    assert_eq!(rows[34], "800,1,1");
    assert_eq!(rows[16], "540,0.36363636363636365,0.14285714285714285");
}

#[test]
fn json_output_has_required_keys() {
    let dir = tempfile::tempdir().unwrap();
    let input = sat_file(dir.path());
    let text = stdout(&run(&[
        "fit",
        "--input",
        &input,
        "--family",
        "bernoulli",
        "--json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["direction"], "nondecreasing");
    assert_eq!(v["blocks"].as_array().unwrap().len(), 8);
    assert_eq!(v["phi"].as_array().unwrap().len(), 35);
    assert!(v["loglik"].as_f64().unwrap() < 0.0);
    assert_eq!(v["blocks"][1]["total"], 69);
}

#[test]
fn simulate_reports_rank() {
    let dir = tempfile::tempdir().unwrap();
    let input = sat_file(dir.path());
    let out = run(&[
        "simulate",
        "--input",
        &input,
        "--statistic",
        "delta",
        "--replicates",
        "500",
        "--seed",
        "1",
        "--hypothesis",
        "null-constant",
    ]);
    let text = stdout(&out);
    assert!(
        text.starts_with("statistic\tdelta\nfamily\tbernoulli\nreplicates\t500\nseed\t1\n"),
        "{text}"
    );
    assert!(text.contains("observed\t1.0000000000000000e0"));
}

#[test]
fn usage_and_validation_exit_codes_differ() {
    let usage = run(&["fit"]);
    assert_eq!(usage.status.code(), Some(2));
    let usage = run(&["fit", "--input", "x.csv", "--bogus"]);
    assert_eq!(usage.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "540,3,4\n").unwrap();
    let out = run(&["fit", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("successes 4 exceed total 3"));

    let missing = run(&[
        "fit",
        "--input",
        dir.path().join("nope.csv").to_str().unwrap(),
    ]);
    assert_eq!(missing.status.code(), Some(1));

    let input = sat_file(dir.path());
    let no_sigma = run(&["fit", "--input", &input, "--family", "normal"]);
    assert_eq!(no_sigma.status.code(), Some(1));
    let not_poisson = run(&["fit", "--input", &input, "--family", "exponential"]);
    assert_eq!(not_poisson.status.code(), Some(1));
}

#[test]
fn long_format_with_normal_family() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("long.csv");
    std::fs::write(&path, "dose,response\n1,2.0\n1,4.0\n2,1.0\n3,5.0\n").unwrap();
    let text = stdout(&run(&[
        "fit",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "long",
        "--family",
        "normal",
        "--sigma",
        "2",
        "--emit",
        "blocks",
    ]));
    assert!(
        text.contains("1\t1\t2\t3\t7\t2.3333333333333335e0\t2.3333"),
        "{text}"
    );
    assert!(
        text.contains("2\t3\t3\t1\t5\t5.0000000000000000e0\t5.0000"),
        "{text}"
    );
}

#[test]
fn selftest_passes() {
    let text = stdout(&run(&["selftest", "--tables", "500", "--seed", "3"]));
    assert!(text.contains("brute_force_mismatches\t0"));
    assert!(text.contains("pava_mismatches\t0"));
}

#[test]
fn dataset_round_trips() {
    let text = stdout(&run(&["dataset"]));
    assert_eq!(text, dataset::SAT_R_CSV);
}
