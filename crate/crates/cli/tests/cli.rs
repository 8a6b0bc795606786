use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pontryagin-verify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn cyclic2_all_checks_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = verify(&[
        "--group",
        "cyclic:2",
        "--checks",
        "all",
        "--seed",
        "7",
        "--samples",
        "40",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report = read_report(&out);
    assert_eq!(report["irrep_dims"], serde_json::json!([1, 1]));
    assert_eq!(report["pass"], Value::Bool(true));
    assert_eq!(report["checks"].as_array().unwrap().len(), 10);
    for key in ["tool", "version", "spec", "irrep_dims", "checks", "pass"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn unknown_group_is_a_usage_error() {
    let o = verify(&["--group", "nosuch:9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nosuch:9"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(
        verify(&["--group", "cyclic:2", "--checks", "bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        verify(&["--group", "cyclic:2", "--samples", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        verify(&["--group", "cyclic:2", "--tol", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        verify(&["--group", "cyclic:2", "--seed", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(verify(&[]).status.code(), Some(2));
}

#[test]
fn s3_subset_lists_three_certificates() {
    let o = verify(&[
        "--group",
        "symmetric:3",
        "--checks",
        "pontryagin,double,tensor",
        "--samples",
        "30",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["irrep_dims"], serde_json::json!([1, 1, 2]));
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn unreadable_table_fails_with_report_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = verify(&[
        "--group",
        "table:/nonexistent.json",
        "--checks",
        "group,phi",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let report = read_report(&out);
    assert_eq!(report["checks"][0]["status"], "fail");
    assert_eq!(report["checks"][1]["status"], "skipped");
    assert_eq!(
        report["checks"][1]["certificate"]["max_residual"],
        Value::Null
    );
}

#[test]
fn summary_and_summarize_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = verify(&[
        "--group",
        "quaternion8",
        "--checks",
        "group,fourier",
        "--samples",
        "20",
        "--summary",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let printed = String::from_utf8(o.stdout).unwrap();
    assert_eq!(printed.lines().filter(|l| l.contains("PASS")).count(), 3);

    let s = verify(&["summarize", out.to_str().unwrap()]);
    assert_eq!(s.status.code(), Some(0));
    let table = String::from_utf8(s.stdout).unwrap();
    let rows = |t: &str| {
        t.lines()
            .filter(|l| l.starts_with("group") || l.starts_with("fourier"))
            .count()
    };
    assert_eq!(rows(&table), 2);
}

#[test]
fn malformed_report_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"tool\": 1}").unwrap();
    let o = verify(&["summarize", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed"));
}

#[test]
fn same_seed_gives_identical_reports_up_to_timing() {
    let run = || {
        let o = verify(&[
            "--group",
            "dihedral:4",
            "--checks",
            "phi,monoids",
            "--seed",
            "3",
            "--samples",
            "20",
        ]);
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        for c in v["checks"].as_array_mut().unwrap() {
            c["millis"] = Value::Null;
        }
        v.to_string()
    };
    assert_eq!(run(), run());
}
