//! End-to-end tests of the `madm` binary: exit codes, CSV shape,
//! residual columns, sidecar metadata, and byte-level reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_madm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn read_rows(path: &Path) -> Vec<Vec<String>> {
    let body = std::fs::read_to_string(path).expect("csv exists");
    body.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn fredholm_one_param_example_is_accurate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    let res = run(&[
        "fredholm",
        "--tau",
        "0.5",
        "--formula",
        "one-param",
        "--m",
        "2",
        "--t",
        "2",
        "--x",
        " -3..5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let rows = read_rows(&out);
    assert_eq!(rows.len(), 9);
    for row in &rows {
        let imag: f64 = row[2].parse().unwrap();
        let refine: f64 = row[3].parse().unwrap();
        assert!(imag < 1e-7, "imag residual {imag} at x = {}", row[0]);
        assert!(refine < 1e-7, "refine delta {refine} at x = {}", row[0]);
    }
    let sidecar: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("f.csv.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(sidecar["formula"], "one-param");
    assert_eq!(sidecar["subcommand"], "fredholm");
    assert!(sidecar["node_counts"].as_array().unwrap().len() == 3);
}

#[test]
fn empty_x_range_is_a_validation_error() {
    let res = run(&[
        "fredholm", "--tau", "0.5", "--m", "1", "--t", "1", "--x", "3..-1",
    ]);
    assert_eq!(exit_code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("empty x-range"));
}

#[test]
fn missing_model_parameters_is_a_validation_error() {
    let res = run(&["simulate", "--m", "1", "--t", "1", "--x", "0..1"]);
    assert_eq!(exit_code(&res), 2);
}

#[test]
fn conflicting_model_parameters_are_rejected_by_the_parser() {
    let res = run(&[
        "simulate", "--tau", "0.5", "--u", "0.6", "--m", "1", "--t", "1", "--x", "0..1",
    ]);
    assert_eq!(exit_code(&res), 2);
}

#[test]
fn identities_prop14_all_pass_below_tolerance() {
    let res = run(&["identities", "--which", "prop14"]);
    assert_eq!(exit_code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let body = String::from_utf8_lossy(&res.stdout).to_string();
    let mut rows = 0;
    for line in body.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let dev: f64 = cols[1].parse().unwrap();
        assert!(dev < 1e-8, "deviation {dev} in {line}");
        assert_eq!(cols[3], "true");
        rows += 1;
    }
    assert!(rows >= 3);
}

#[test]
fn identities_unreachable_tolerance_exits_3() {
    let res = run(&["identities", "--which", "partition", "--tol", "1e-18"]);
    assert_eq!(exit_code(&res), 3);
}

#[test]
fn simulate_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &str| {
        vec![
            "simulate".to_string(),
            "--u".into(),
            "0.6".into(),
            "--p".into(),
            "0.6".into(),
            "--init".into(),
            "0,0".into(),
            "--m".into(),
            "1".into(),
            "--t".into(),
            "0.5".into(),
            "--x".into(),
            " -2..2".into(),
            "--replicas".into(),
            "2000".into(),
            "--seed".into(),
            "9".into(),
            "--out".into(),
            dir.path().join(name).to_str().unwrap().to_string(),
        ]
    };
    for name in ["a.csv", "b.csv"] {
        let argv = args(name);
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        assert_eq!(exit_code(&run(&argv)), 0);
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b, "same seed must reproduce CSV bytes exactly");
}

#[test]
fn exact_rows_carry_small_cross_method_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.csv");
    let res = run(&[
        "exact", "--u", "0.6", "--p", "0.6", "--init", "0,0", "--m", "1", "--t", "0.5", "--x",
        " -2..2", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let rows = read_rows(&out);
    assert_eq!(rows.len(), 5);
    for row in &rows {
        let err: f64 = row[2].parse().unwrap();
        assert!(err < 1e-6, "contour/master gap {err} at x = {}", row[0]);
    }
}

#[test]
fn tw_emits_grid_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tw.csv");
    let res = run(&[
        "tw", "--tau", "0.5", "--sigma", "0.25", "--t", "24", "--replicas", "500", "--seed",
        "2", "--s-points", "9", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    assert_eq!(read_rows(&out).len(), 9);
    let sidecar: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("tw.csv.json")).unwrap(),
    )
    .unwrap();
    let ks = sidecar["comparison"]["ks_distance"].as_f64().unwrap();
    assert!(ks > 0.0 && ks < 1.0);
    assert_eq!(sidecar["comparison"]["m"].as_u64().unwrap(), 6);
}
