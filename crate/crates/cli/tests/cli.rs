use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qshear(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qshear")).args(args).env_remove("QSHEAR_OUT_DIR").output().unwrap()
}

fn error_doc(out: &Output) -> Value {
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().rev().find(|l| l.starts_with('{')).expect("error document on stderr");
    serde_json::from_str(line).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn construct_example1_gives_h_z_and_half_z_squared() {
    let out = qshear(&["construct", "--preset", "example1", "--q", "0.5", "--order", "32"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let h = doc["h"]["re"].as_array().unwrap();
    let g = doc["g"]["re"].as_array().unwrap();
    assert_eq!(h.len(), 33);
    assert_eq!(h[1], 1.0);
    assert!(h.iter().enumerate().all(|(k, v)| k == 1 || v.as_f64() == Some(0.0)));
    assert!((g[2].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalization"));
}

#[test]
fn config_errors_exit_two_with_error_document() {
    for args in [
        &["construct", "--preset", "unknown"][..],
        &["report", "--q", "1.5"],
        &["construct", "--preset", "example1", "--order", "4"],
        &["render", "--preset", "half_plane", "--radius", "1.2"],
        &["combine", "--presets", "s3_f1,s3_f2", "--t", "1.5", "--order", "16"],
        &["frobnicate"],
    ] {
        let out = qshear(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(error_doc(&out)["error"]["exit_code"], 2);
    }
}

#[test]
fn mixed_parameters_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert!(qshear(&["construct", "--preset", "s3_f1", "--q", "0.5", "--order", "16", "-o", a.to_str().unwrap()])
        .status
        .success());
    assert!(qshear(&["construct", "--preset", "s3_f2", "--q", "0.3", "--order", "16", "-o", b.to_str().unwrap()])
        .status
        .success());
    let maps = format!("{},{}", a.display(), b.display());
    let out = qshear(&["combine", "--maps", &maps, "--t", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_doc(&out)["error"]["kind"], "MixedParamError");
}

#[test]
fn shear_singularity_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    let w = dir.path().join("w.json");
    std::fs::write(&f, r#"{"order": 2, "re": [0.0, 1.0, 0.0], "im": [0.0, 0.0, 0.0]}"#).unwrap();
    std::fs::write(&w, r#"{"order": 2, "re": [1.0, 0.0, 0.0], "im": [0.0, 0.0, 0.0]}"#).unwrap();
    let out = qshear(&["construct", "--source", f.to_str().unwrap(), "--dilatation", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_doc(&out)["error"]["kind"], "ShearSingularity");
}

#[test]
fn unwritable_output_exits_four() {
    let out = qshear(&["render", "--preset", "half_plane", "--order", "16", "-o", "/nonexistent-dir/sub/x.svg"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_doc(&out)["error"]["kind"], "IoError");
}

#[test]
fn combine_at_t_zero_returns_second_map() {
    let out = qshear(&["combine", "--presets", "s3_f1,s3_f2", "--q", "0.5", "--order", "32", "--t", "0"]);
    assert!(out.status.success());
    let doc = json(&out);
    let second = json(&qshear(&["construct", "--preset", "s3_f2", "--q", "0.5", "--order", "32"]));
    assert_eq!(doc["runs"][0]["map"]["h"], second["h"]);
    assert_eq!(doc["runs"][0]["map"]["g"], second["g"]);
}

#[test]
fn qth_sweep_passes_for_every_t() {
    let out = qshear(&[
        "combine",
        "--presets",
        "s3_f1,s3_f2",
        "--q",
        "0.5",
        "--order",
        "64",
        "--t-sweep",
        "11",
        "--check",
        "qth",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let runs = json(&out)["runs"].as_array().unwrap().clone();
    assert_eq!(runs.len(), 11);
    assert!(runs.iter().all(|r| r["reports"][0]["pass"] == true));
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().filter(|l| l.starts_with("t=")).count(), 11);
}

#[test]
fn equal_dilatations_have_zero_residual() {
    let out = qshear(&["combine", "--presets", "example1,example1", "--order", "64", "--check", "th1"]);
    let doc = json(&out);
    let details = &doc["runs"][0]["reports"][0]["details"];
    assert_eq!(details["dilatation_residual_coefficient"], 0.0);
    assert_eq!(details["dilatation_residual_pointwise"], 0.0);
    // z - z^2/2 does not satisfy the directional criterion, so the check fails
    assert_eq!(out.status.code(), Some(1));
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,theta,re,im"));
    lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

#[test]
fn render_csv_counts_and_half_plane_bound() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hp.csv");
    let out = qshear(&[
        "render",
        "--preset",
        "half_plane",
        "--q",
        "classical",
        "--format",
        "csv",
        "--circles",
        "5",
        "--samples",
        "120",
        "--radials",
        "8",
        "--radial-samples",
        "20",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&path);
    assert_eq!(rows.len(), 5 * 120 + 8 * 20);
    assert!(rows.iter().all(|r| r[2] > -0.5));
}

#[test]
fn render_identity_like_map_draws_concentric_circles() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("id.json");
    let map = r#"{"q": 0.5, "provenance": "identity",
        "h": {"order": 2, "re": [0.0, 1.0, 0.0], "im": [0.0, 0.0, 0.0]},
        "g": {"order": 2, "re": [0.0, 0.0, 0.0], "im": [0.0, 0.0, 0.0]}}"#;
    std::fs::write(&f, map).unwrap();
    let csv = dir.path().join("id.csv");
    let out = qshear(&[
        "render",
        "--map",
        f.to_str().unwrap(),
        "--format",
        "csv",
        "--radials",
        "0",
        "-o",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    for row in csv_rows(&csv) {
        assert!(((row[2] * row[2] + row[3] * row[3]).sqrt() - row[0]).abs() < 1e-12);
    }
    let svg = qshear(&["render", "--map", f.to_str().unwrap(), "--format", "svg"]);
    let text = String::from_utf8(svg.stdout).unwrap();
    assert!(text.starts_with("<?xml"));
    assert_eq!(text.matches("<polyline").count(), 10 + 24);
}

#[test]
fn out_dir_variable_sets_default_destination() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qshear"))
        .args(["construct", "--preset", "s3_f2", "--order", "16"])
        .env("QSHEAR_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("construct.json")).unwrap()).unwrap();
    assert_eq!(written["h"]["order"], 16);
}

#[test]
fn classical_report_passes() {
    let out = qshear(&["report", "--q", "classical", "--order", "512"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["pass"], true);
    assert!(doc["checks"].as_array().unwrap().iter().any(|c| c["check"] == "classical_q_half_plane"));
}
