//! End-to-end runs of the `llab` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn llab(args: &[&str]) -> Output {
    llab_env(args, None)
}

fn llab_env(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_llab"));
    cmd.args(args).env_remove("LLAB_CONFIG");
    if let Some(path) = config {
        cmd.env("LLAB_CONFIG", path);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("stdout is JSON")
}

#[test]
fn reeb_lists_orbits_by_action() {
    // actions 41/100, 41/50, 123/100, 41/25, 17/10
    let out = llab(&["reeb", "--cap", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["axis", "mult", "action", "cz"]);
    let cz: Vec<i64> = rdr.records().map(|r| r.unwrap()[3].parse().unwrap()).collect();
    assert_eq!(cz, vec![3, 5, 7, 9, 11]);
}

#[test]
fn conic_example_classifies() {
    let out = llab(&["--format", "json", "classify", "--conic"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["pass"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn chart_verification_passes() {
    let out = llab(&["verify", "--map", "ellipsoid-chart", "--samples", "20"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    for c in v["checks"].as_array().unwrap() {
        let value: f64 = c["value"].as_str().unwrap().parse().unwrap();
        let tol: f64 = c["tolerance"].as_str().unwrap().parse().unwrap();
        assert!(value < tol);
    }
}

#[test]
fn failed_checks_exit_one() {
    let out = llab(&["--tol", "1e-30", "verify", "--map", "ellipsoid-chart", "--samples", "5"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&llab(&["bogus"])), 2);
    let out = llab(&["--grid", "0", "reeb"]);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["kind"], "config");
    assert_eq!(v["exit_code"], 2);
}

#[test]
fn violated_preconditions_exit_three() {
    let out = llab(&["--spec", "1/2,1/3", "classify", "--conic"]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["kind"], "precondition");
}

#[test]
fn escapes_and_budgets_exit_four() {
    assert_eq!(code(&llab(&["flow", "--time", "1000"])), 4);
    assert_eq!(code(&llab(&["bubbles", "--mode", "general", "--max-m", "60", "--max-parts", "8"])), 4);
}

#[test]
fn unwritable_output_exits_five() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("x.csv");
    assert_eq!(code(&llab(&["--out", path.to_str().unwrap(), "reeb"])), 5);
}

#[test]
fn output_is_reproducible() {
    for args in [
        &["reeb"][..],
        &["flow", "--time", "1"],
        &["--seed", "7", "blowup-verify", "--samples", "50"],
        &["buildings"],
    ] {
        let a = llab(args);
        let b = llab(args);
        assert_eq!(code(&a), code(&b));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orbits.csv");
    let out = llab(&["--out", path.to_str().unwrap(), "reeb"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&llab(&["reeb"])));
}

#[test]
fn config_file_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, r#"{"spec": {"a_plus": "17/10", "a_minus": "9/20"}}"#).unwrap();
    let out = llab_env(&["reeb", "--cap", "1"], Some(&good));
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("minus,1,9/20,3"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"grid": 32, "bogus": 1}"#).unwrap();
    assert_eq!(code(&llab_env(&["reeb"], Some(&bad))), 2);
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&llab_env(&["reeb"], Some(&bad))), 2);
}

#[test]
fn library_entry_point_matches_binary() {
    assert_eq!(llab_core::cli::run(["llab", "--spec", "1/2,1/3", "classify", "--conic"]), 3);
}
