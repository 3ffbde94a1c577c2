use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

fn malcev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_malcev")).current_dir(corpus()).env("NO_COLOR", "1").args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    serde_json::from_slice(&malcev(&full).stdout).unwrap()
}

#[test]
fn check_reports_jacobiator_witness() {
    let v = json(&["check", "valid_m4.alg"]);
    assert_eq!(v["overall"], true);
    let checks = v["checks"].as_array().unwrap();
    let jac = checks.iter().find(|c| c["condition_id"] == "jacobi").unwrap();
    assert_eq!(jac["role"], "diagnostic");
    assert_eq!(jac["passed"], false);
    assert!(checks.iter().any(|c| c["role"] == "canonical"));
}

#[test]
fn jacobiator_prints_value() {
    let out = malcev(&["jacobiator", "valid_m4.alg", "e1", "e2", "e3"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("3*e4"));
}

#[test]
fn no_color_disables_escapes() {
    let out = malcev(&["check", "valid_nonmalcev.alg"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stdout.contains(&0x1b));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL"));
}

#[test]
fn parse_errors_are_located() {
    let out = malcev(&["check", "invalid_unknown_name.alg"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line ") && err.contains("column "), "{err}");
}

#[test]
fn extracted_document_feeds_unified() {
    let out = malcev(&["extract", "valid_m4_gf5.alg", "--sub", "e1,e2,e4"]);
    assert_eq!(out.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m4.datum");
    std::fs::write(&path, &out.stdout).unwrap();
    let v = json(&["unified", path.to_str().unwrap(), "--diagnose"]);
    assert_eq!(v["overall"], true);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["role"] == "diagnostic"));
}

#[test]
fn timing_is_opt_in() {
    assert!(json(&["check", "valid_sl2.alg"]).get("timing_ms").is_none());
    assert!(json(&["--timing", "check", "valid_sl2.alg"]).get("timing_ms").is_some());
}

#[test]
fn solve_flag_is_seed_deterministic() {
    let args = ["--format", "json", "--seed", "7", "solve-flag", "valid_m4_gf5.alg", "--lambda", "e4=1", "--samples", "3"];
    let a = malcev(&args);
    assert_eq!(a.stdout, malcev(&args).stdout);
    assert_eq!(a.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["condition_id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"family_D31") && ids.contains(&"family_D32"), "{ids:?}");
}

#[test]
fn classify_reports_both_relations() {
    let v = json(&["classify", "valid_affine2.alg"]);
    assert_eq!(v["overall"], true);
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["condition_id"].as_str().unwrap()).collect();
    for id in ["routes_agree_equiv", "routes_agree_cohom", "cohom_refines_equiv"] {
        assert!(ids.contains(&id), "{ids:?}");
    }
}

#[test]
fn witness_cap_limits_output() {
    let v = json(&["--witness-cap", "1", "check", "valid_nonmalcev.alg"]);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["witnesses"].as_array().unwrap().len() <= 1);
    }
}
