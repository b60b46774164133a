use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hankel-schmidt"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn analyze_shift_symbol() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "z.json", r#"{"poly": [[0, 0], [1, 0]], "poles": []}"#);
    let out = bin().args(["analyze", &f]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let blocks = r["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 1);
    assert!((blocks[0]["s"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(blocks[0]["multiplicity"], 2);
    assert_eq!(blocks[0]["status"], "pass");
    assert_eq!(blocks[0]["representation"]["theta"]["zeros"], serde_json::json!([[0.0, 0.0], [0.0, 0.0]]));
    assert_eq!(r["exit_code"], 0);
}

#[test]
fn analyze_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "u.json", r#"{"poly": [], "poles": [{"b": [0.5, 0], "c": [1, 0]}]}"#);
    let report = dir.path().join("report.json");
    let out = bin().args(["analyze", &f, "--n", "64", "--out"]).arg(&report).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["config"]["n"], 64);
    assert!((r["singular_values"][0]["s"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-10);
}

#[test]
fn analyze_empty_symbol() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "zero.json", r#"{"poly": [], "poles": []}"#);
    let out = bin().args(["analyze", &f]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["blocks"], serde_json::json!([]));
}

#[test]
fn analyze_rejects_pole_outside_disk() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", r#"{"poly": [], "poles": [{"b": [0.1, 0], "c": [1, 0]}, {"b": [1.2, 0], "c": [1, 0]}]}"#);
    let out = bin().args(["analyze", &f]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("pole 1") && err.contains("1.2"), "{err}");
}

#[test]
fn analyze_reports_malformed_field() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", r#"{"poly": [], "poles": [{"b": [0.1, 0]}]}"#);
    let out = bin().args(["analyze", &f]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`c`"));
}

#[test]
fn analyze_rejects_bad_order() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "z.json", r#"{"poly": [[0, 0], [1, 0]], "poles": []}"#);
    let out = bin().args(["analyze", &f, "--n", "100"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_perturbation_fails_symmetry() {
    let out = bin().args(["verify", "--seed", "3", "--perturb", "1e-3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let r = json(&out);
    let symmetry = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "symmetry").unwrap();
    assert_eq!(symmetry["failed"], 50);
}

#[test]
fn verify_default_passes() {
    let out = bin().arg("verify").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["failed"], 0);
}

#[test]
fn conjugate_at_origin_negates_reflection() {
    // α = 0: μ(z) = −z, so w = −S*((Su)(−z)) has ŵ(n) = (−1)^n û(n)
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "u.json", r#"{"poly": [[1, 0], [2, 0], [3, 0]], "poles": []}"#);
    let out = bin().args(["conjugate", &f, "--alpha", "0,0", "--n", "16"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let c = r["coefficients"].as_array().unwrap();
    let want = [1.0, -2.0, 3.0];
    for (k, w) in want.iter().enumerate() {
        assert!((c[k][0].as_f64().unwrap() - w).abs() < 1e-12, "{c:?}");
    }
    assert!(c[3][0].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn frostman_of_shift() {
    let dir = tempfile::tempdir().unwrap();
    // factors are (a − z)/(1 − āz), so θ = z has phase −1
    let f = write(dir.path(), "z.json", r#"{"phase": [-1, 0], "zeros": [[0, 0]]}"#);
    let out = bin().args(["frostman", &f, "--alpha", "0.5,-0.25", "--n", "8"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    // θ = z: θ_α has its zero at α
    let z = &r["theta_alpha"]["zeros"][0];
    assert!((z[0].as_f64().unwrap() - 0.5).abs() < 1e-12 && (z[1].as_f64().unwrap() + 0.25).abs() < 1e-12);
    assert!(r["boundary_residual"].as_f64().unwrap() < 1e-12);
    // g_α = (1 − ᾱz)/√(1 − |α|²)
    let norm = (1.0f64 - 0.3125).sqrt();
    let g = &r["g_alpha"];
    assert!((g[0][0].as_f64().unwrap() - 1.0 / norm).abs() < 1e-12);
    assert!((g[1][0].as_f64().unwrap() + 0.5 / norm).abs() < 1e-12 && (g[1][1].as_f64().unwrap() + 0.25 / norm).abs() < 1e-12);
}

#[test]
fn alpha_outside_disk_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "z.json", r#"{"phase": [1, 0], "zeros": [[0, 0]]}"#);
    let out = bin().args(["frostman", &f, "--alpha", "-1,0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
