//! End-to-end runs of the binary against checked-in fixtures.
//!
//! Set `HAARLAB_BLESS=1` to rewrite the golden files after an intended
//! output change.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_haarlab"));
    cmd.env_remove("HAARLAB_MAX_ORDER");
    cmd
}

fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn fixture(name: &str) -> PathBuf {
    tests_dir().join("fixtures").join(format!("{name}.json"))
}

fn run(command: &str, name: &str, extra: &[&str]) -> Output {
    bin()
        .arg(command)
        .arg("--input")
        .arg(fixture(name))
        .args(extra)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON document")
}

fn check_golden(name: &str, actual: &str) {
    let path = tests_dir().join("golden").join(format!("{name}.json"));
    if std::env::var_os("HAARLAB_BLESS").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

fn golden_case(command: &str, name: &str, code: i32) {
    let out = run(command, name, &[]);
    assert_eq!(out.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    check_golden(name, &stdout(&out));
}

#[test]
fn verify_haar_goldens() {
    golden_case("verify-haar", "verify_haar_pass", 0);
    golden_case("verify-haar", "verify_haar_fail", 1);
}

#[test]
fn enumerate_goldens() {
    golden_case("enumerate", "enumerate_z4", 0);
    golden_case("enumerate", "enumerate_s3_table", 0);
}

#[test]
fn construct_goldens() {
    golden_case("construct", "construct_z4_identity_closure", 0);
    golden_case("construct", "construct_z4_whole_group", 0);
}

#[test]
fn quotient_fubini_plane_goldens() {
    golden_case("quotient", "quotient_d4", 0);
    golden_case("fubini", "fubini_z2", 0);
    golden_case("plane", "plane_two_intervals", 0);
}

#[test]
fn counterexample_goldens() {
    golden_case("counterexample", "counterexample_zero", 0);
    golden_case("counterexample", "counterexample_third", 0);
}

#[test]
fn zero_constant_is_a_nonzero_violation() {
    let out = run("counterexample", "counterexample_zero", &[]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["results"]["verdict"], "NonzeroViolated");
}

#[test]
fn failing_measure_reports_witnesses() {
    let out = run("verify-haar", "verify_haar_fail", &[]);
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["results"]["is_haar"], false);
    assert!(!doc["results"]["checks"]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn probe_bound_flag_overrides_input() {
    let out = run("counterexample", "counterexample_third", &["--probe-bound", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let witness = &doc["results"]["witness"];
    assert_eq!(witness["probe_bound"], "2/1");
    // floor(2 / (1/3)) + 1 disjoint translates of mass 1/3 each.
    assert_eq!(witness["count"], 7);
    assert_eq!(witness["total"]["exact"], "7/3");
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = run("verify-haar", "verify_haar_pass", &["--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = fs::read_to_string(&target).unwrap();
    assert_eq!(written, stdout(&run("verify-haar", "verify_haar_pass", &[])));
}

#[test]
fn thread_count_does_not_change_output() {
    for (command, name) in [("enumerate", "enumerate_s3_table"), ("construct", "construct_z4_whole_group")] {
        let one = run(command, name, &["--threads", "1"]);
        let four = run(command, name, &["--threads", "4"]);
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, four.stdout, "{name}");
        assert_eq!(one.stdout, run(command, name, &[]).stdout, "{name}");
    }
}

#[test]
fn invalid_table_is_an_input_error() {
    let out = run("enumerate", "bad_table", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = stderr_json(&out);
    assert_eq!(err["error"]["kind"], "invalid_group");
    assert_eq!(err["error"]["details"]["triple"], serde_json::json!([1, 1, 2]));
}

#[test]
fn unknown_fields_and_commands_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("extra.json");
    fs::write(&path, r#"{"c": "1/2", "colour": "blue"}"#).unwrap();
    let out = bin().args(["counterexample", "--input", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_json(&out)["error"]["message"].as_str().unwrap().contains("colour"));

    let out = bin().args(["integrate", "--input", fixture("enumerate_z4").to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    stderr_json(&out);
}

#[test]
fn missing_input_file_is_an_input_error() {
    let out = bin().args(["enumerate", "--input", "/nonexistent/haarlab.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_json(&out)["error"]["kind"].is_string());
}

#[test]
fn unsupported_schema_version_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v2.json");
    fs::write(&path, r#"{"schema_version": 2, "c": "1/2"}"#).unwrap();
    let out = bin().args(["counterexample", "--input", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn max_order_from_environment_and_flag() {
    let input = fixture("enumerate_s3_table");
    let with_env = bin()
        .env("HAARLAB_MAX_ORDER", "4")
        .args(["enumerate", "--input", input.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(with_env.status.code(), Some(2));
    stderr_json(&with_env);

    let flag_wins = bin()
        .env("HAARLAB_MAX_ORDER", "4")
        .args(["enumerate", "--input", input.to_str().unwrap(), "--max-order", "6"])
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code(), Some(0));
}
