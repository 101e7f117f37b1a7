use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use taurho::region::{boundary_samples, parse_boundary_csv};

fn taurho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taurho"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn figure2() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/figure2.json")
}

fn field(json: &str, key: &str) -> f64 {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    v[key].as_f64().unwrap()
}

#[test]
fn eval_figure2() {
    let out = taurho(&["eval", "--shuffle", figure2().to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!((field(&text, "tau") + 3.0 / 32.0).abs() < 1e-15);
    assert!((field(&text, "rho") + 29.0 / 256.0).abs() < 1e-15);
    assert!((field(&text, "inv") - 35.0 / 128.0).abs() < 1e-15);
    assert!((field(&text, "invs") - 95.0 / 1024.0).abs() < 1e-15);
}

#[test]
fn oracle_agrees_with_eval() {
    let out = taurho(&["oracle", "--shuffle", figure2().to_str().unwrap(), "--grid", "4000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!((field(&text, "tau") + 3.0 / 32.0).abs() <= 5e-3);
    assert!((field(&text, "rho") + 29.0 / 256.0).abs() <= 5e-3);
}

#[test]
fn boundary_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.csv");
    let out = taurho(&["boundary", "--k", "501", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let rows = parse_boundary_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows, boundary_samples(501).unwrap());
}

#[test]
fn realize_sharp_point() {
    let out = taurho(&["realize", "--tau", "-0.3333333333", "--rho", "-0.7777777778"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["shuffle"]["perm"], serde_json::json!([3, 2, 1]));
    assert!(v["homotopy"]["residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn realized_shuffle_evaluates_back() {
    let out = taurho(&["realize", "--tau", "0.1", "--rho", "0.05"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    std::fs::write(&path, v["shuffle"].to_string()).unwrap();
    let out = taurho(&["eval", "--shuffle", path.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!((field(&text, "tau") - 0.1).abs() < 1e-6);
    assert!((field(&text, "rho") - 0.05).abs() < 1e-6);
}

#[test]
fn exit_codes() {
    assert_eq!(taurho(&["realize", "--tau", "0.9", "--rho", "-0.9"]).status.code(), Some(1));
    assert_eq!(taurho(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(taurho(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(taurho(&["area", "--tol", "-1"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"perm":[1,1],"weights":[0.5,0.5],"signs":[1,1]}"#).unwrap();
    let out = taurho(&["eval", "--shuffle", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8(out.stderr).unwrap().lines().count(), 1);
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(taurho(&["eval", "--shuffle", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["verify", "--suite", "delta", "--samples", "200", "--seed", "9"],
        vec!["realize", "--tau", "-0.2", "--rho", "-0.1"],
        vec!["area"],
        vec!["boundary", "--k", "33"],
    ] {
        let a = taurho(&args);
        let b = taurho(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn area_output() {
    let out = taurho(&["area"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!((field(&text, "closed_form") - 1.1543017309509).abs() < 1e-12);
    assert!(field(&text, "difference").abs() <= 1e-8);
}

#[test]
fn verify_all_on_defaults() {
    let out = taurho(&["verify", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 8);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passed"], serde_json::json!(true), "{line}");
    }
}
