//! End-to-end tests of the command line binary.

use std::process::Command;

use serde_json::Value;

fn prymform(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_prymform")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn script_path() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/../../scripts/d16-path.json").to_string()
}

#[test]
fn build_round_trips_through_surface_json() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.json");
    let file = file.to_str().unwrap();
    let (code, out, _) = prymform(&["build", "--kappa", "1,1,2", "--w", "2", "--h", "1", "--e", "1", "--out", file]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("real multiplication verified"));
    let (code, out, _) = prymform(&["--json", "involutions", "--input", file]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["count"], 1);
}

#[test]
fn classify_json_rows_are_ordered() {
    let (code, out, _) = prymform(&["--json", "classify", "--from", "8", "--to", "40"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let ds: Vec<i64> = v["result"]["rows"].as_array().unwrap().iter().map(|r| r["D"].as_i64().unwrap()).collect();
    assert_eq!(ds, (8..=40).collect::<Vec<_>>());
    assert_eq!(v["result"]["failures"], 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(prymform(&["classify", "--from", "9", "--to", "8"]).0, 2);
    assert_eq!(prymform(&["build", "--w", "1"]).0, 2);
    assert_eq!(prymform(&["cylinders", "--w", "1", "--h", "1", "--e", "1", "--dir", "1"]).0, 2);
    assert_eq!(prymform(&["frobnicate"]).0, 2);
}

#[test]
fn replay_passes_and_failing_assertion_exits_1() {
    let (code, out, err) = prymform(&["replay", "--script", &script_path()]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("assertion passed"));

    let mut script: Value = serde_json::from_str(&std::fs::read_to_string(script_path()).unwrap()).unwrap();
    script["assert"]["isomorphic_to"]["prototype"]["slit"] = Value::from("1/2");
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, script.to_string()).unwrap();
    let (code, _, err) = prymform(&["replay", "--script", file.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("assertion failed"), "{err}");
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.svg");
    let (code, _, _) = prymform(&["render", "--w", "1", "--h", "2", "--e", "0", "--svg", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    let svg = std::fs::read_to_string(file).unwrap();
    assert!(svg.starts_with("<svg") && svg.matches("class=\"face\"").count() == 3);
}

#[test]
fn search_and_collapse_verifies_rm() {
    let (code, out, err) = prymform(&["search", "--w", "1", "--h", "1", "--e", "0", "--tries", "40", "--collapse"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("collapsed to H(4)"));
}
