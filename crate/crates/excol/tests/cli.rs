//! Golden-file and exit-code tests for the command-line front end. All
//! commands run from the workspace root so file paths in the reports match
//! the checked-in goldens byte for byte.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_excol"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .expect("binary runs")
}

fn assert_golden(args: &[&str], golden: &str, code: i32) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "exit code for {args:?}");
    let want = std::fs::read_to_string(workspace_root().join("testdata/golden").join(golden))
        .expect("golden file exists");
    let got = String::from_utf8(out.stdout).expect("utf8 output");
    assert_eq!(got, want, "stdout of {args:?} diverged from {golden}");
}

#[test]
fn check_goldens() {
    assert_golden(&["--json", "check", "testdata/ising.quiver"], "check_ising.json", 0);
    assert_golden(&["--json", "check", "testdata/beilinson.quiver"], "check_beilinson.json", 0);
}

#[test]
fn check_rejects_malformed_input() {
    let out = run(&["--json", "check", "testdata/bad.quiver"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["--json", "check", "testdata/no_such_file.quiver"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn realize_goldens() {
    assert_golden(&["--json", "realize", "testdata/ising.quiver"], "realize_ising.json", 0);
    assert_golden(&["--json", "realize", "testdata/single.quiver"], "realize_single.json", 0);
}

#[test]
fn realize_rejects_small_policy() {
    let out = run(&["--json", "realize", "testdata/ising.quiver", "--m-policy", "fixed:1"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], false);
    assert_eq!(report["schema"], 1);
}

#[test]
fn ising_golden_and_seed_stability() {
    assert_golden(&["--json", "ising"], "ising.json", 0);
    // a different seed changes only the bookkeeping fields, not the verdicts
    let out = run(&["--json", "ising", "--seed", "17"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["dim_x"], 3);
}

#[test]
fn ncplane_goldens() {
    assert_golden(&["--json", "ncplane", "--standard"], "ncplane_standard.json", 0);
    assert_golden(
        &["--json", "ncplane", "--sklyanin", "1", "2", "3"],
        "ncplane_sklyanin_123.json",
        0,
    );
}

#[test]
fn ncplane_exit_codes() {
    let out = run(&["--json", "ncplane", "--tensor", "testdata/rank5.tensor"]);
    assert_eq!(out.status.code(), Some(2), "rank-5 tensor is rejected as malformed");
    let out = run(&["--json", "ncplane", "--tensor", "testdata/degenerate.tensor"]);
    assert_eq!(out.status.code(), Some(1), "degenerate tensor fails the certificate");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["nondegeneracy"]["u"]["status"], "degenerate");
    assert!(report["nondegeneracy"]["u"]["witness"].is_array());
    let out = run(&["--json", "ncplane"]);
    assert_eq!(out.status.code(), Some(2), "a tensor source is required");
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["--json", "check", "testdata/ising.quiver"],
        vec!["--json", "ising", "--seed", "3"],
        vec!["--json", "ncplane", "--standard"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?} is not deterministic");
    }
}
