//! End-to-end tests of the kdsm binary: file parsing diagnostics, solver
//! verbs, exit codes, and byte-level determinism of structured output.

use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn kdsm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdsm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON: {e}\nstdout: {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write_file(content: &str) -> NamedTempFile {
    let mut file = NamedTempFile::new().unwrap();
    file.write_all(content.as_bytes()).unwrap();
    file
}

const FULL_INDICATOR: &str = r#"{"n":3,"k":2,"values":["0","0","0","0","0","0","0","-1"],"labels":["a","b","c"]}"#;

#[test]
fn minimize_reports_exact_minimum_with_labels() {
    let inst = write_file(FULL_INDICATOR);
    let out = kdsm(&["minimize", "--instance", inst.path().to_str().unwrap()]);
    assert!(out.status.success());
    let json = stdout_json(&out);
    assert_eq!(json["min"], "-1");
    assert_eq!(json["argmin"], serde_json::json!(["a", "b", "c"]));
}

#[test]
fn check_reports_violation_with_exit_code_one() {
    // -1 on {a,b} only: not 2-distant; first violating pair is ({a,b},{c}).
    let inst = write_file(
        r#"{"n":3,"k":2,"values":["0","0","0","-1","0","0","0","0"],"labels":["a","b","c"]}"#,
    );
    let out = kdsm(&["check", "--instance", inst.path().to_str().unwrap(), "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let json = stdout_json(&out);
    assert_eq!(json["holds"], false);
    assert_eq!(json["violation"]["x"], serde_json::json!(["a", "b"]));
    assert_eq!(json["violation"]["y"], serde_json::json!(["c"]));
}

#[test]
fn bounds_match_the_small_set_sum() {
    // rank of U_{2,3}: M = 9, lower = -7, upper = 9.
    let inst = write_file(
        r#"{"n":3,"k":2,"values":["0","1","1","2","1","2","2","2"],"labels":["a","b","c"]}"#,
    );
    let out = kdsm(&["bounds", "--instance", inst.path().to_str().unwrap(), "--k", "2"]);
    assert!(out.status.success());
    let json = stdout_json(&out);
    assert_eq!(json["M"], "9");
    assert_eq!(json["lower"], "-7");
    assert_eq!(json["upper"], "9");
}

#[test]
fn parse_errors_have_distinct_diagnostics() {
    let too_small = write_file(r#"{"n":1,"k":2,"values":["0","1"]}"#);
    let out = kdsm(&["check", "--instance", too_small.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k=2 must satisfy"));

    let bad_rational = write_file(r#"{"n":2,"k":2,"values":["0","1","1/0","1"]}"#);
    let out = kdsm(&["check", "--instance", bad_rational.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed rational"));

    let wrong_len = write_file(r#"{"n":2,"k":2,"values":["0","1","1"]}"#);
    let out = kdsm(&["check", "--instance", wrong_len.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected 4 values"));
}

#[test]
fn maximize_with_verification() {
    let inst = write_file(
        r#"{"n":3,"k":2,"values":["0","1","1","2","1","2","2","2"],"labels":["a","b","c"]}"#,
    );
    let weights = write_file(r#"["3","2","1"]"#);
    let out = kdsm(&[
        "maximize",
        "--instance",
        inst.path().to_str().unwrap(),
        "--weights",
        weights.path().to_str().unwrap(),
        "--verify",
    ]);
    assert!(out.status.success());
    let json = stdout_json(&out);
    assert_eq!(json["value"], "5");
    assert_eq!(json["x"], serde_json::json!(["1", "1", "0"]));
    assert_eq!(json["verified"], true);
}

#[test]
fn gen_output_round_trips_through_minimize() {
    let out = kdsm(&["gen", "cut", "--n", "5", "--k", "3", "--seed", "9"]);
    assert!(out.status.success());
    let inst = write_file(&String::from_utf8_lossy(&out.stdout));
    let solved = kdsm(&[
        "minimize",
        "--instance",
        inst.path().to_str().unwrap(),
        "--verify",
        "--trace",
    ]);
    assert!(solved.status.success());
    let json = stdout_json(&solved);
    assert!(json["min"].is_string());
}

#[test]
fn structured_output_is_deterministic() {
    let out1 = kdsm(&["gen", "minrank", "--n", "6", "--k", "4", "--seed", "3"]);
    let out2 = kdsm(&["gen", "minrank", "--n", "6", "--k", "4", "--seed", "3"]);
    assert!(out1.status.success());
    assert_eq!(out1.stdout, out2.stdout);

    let inst = write_file(&String::from_utf8_lossy(&out1.stdout));
    let run1 = kdsm(&["minimize", "--instance", inst.path().to_str().unwrap()]);
    let run2 = kdsm(&["minimize", "--instance", inst.path().to_str().unwrap()]);
    assert_eq!(run1.stdout, run2.stdout);
}

#[test]
fn matroid_intersection_verb() {
    let m1 = write_file(r#"{"kind":"sparse_paving","n":4,"r":2,"forbidden":[[1,2]]}"#);
    let m2 = write_file(r#"{"kind":"sparse_paving","n":4,"r":2,"forbidden":[[3,4]]}"#);
    let w = write_file(r#"["1","1","1","1"]"#);
    let out = kdsm(&[
        "mi",
        "--m1",
        m1.path().to_str().unwrap(),
        "--m2",
        m2.path().to_str().unwrap(),
        "--weights",
        w.path().to_str().unwrap(),
        "--verify",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let json = stdout_json(&out);
    assert_eq!(json["weight"], 2);
}

#[test]
fn family_verb_prints_chain_for_k2() {
    let out = kdsm(&["family", "--n", "3", "--k", "2"]);
    assert!(out.status.success());
    let json = stdout_json(&out);
    assert_eq!(json["size"], 4);
    assert_eq!(json["bound"], "4");
}

#[test]
fn budget_override_is_accepted() {
    let inst = write_file(FULL_INDICATOR);
    let out = kdsm(&[
        "minimize",
        "--instance",
        inst.path().to_str().unwrap(),
        "--budget",
        "25",
        "--verify",
    ]);
    // A tiny budget may degrade the verdict, but with --verify any wrong
    // answer must surface as exit code 2 rather than silent output.
    match out.status.code() {
        Some(0) => {
            let json = stdout_json(&out);
            assert_eq!(json["min"], "-1");
        }
        Some(2) => {}
        other => panic!("unexpected exit code {other:?}"),
    }
}

#[test]
fn budget_env_variable_is_honored() {
    let inst = write_file(FULL_INDICATOR);
    let out = Command::new(env!("CARGO_BIN_EXE_kdsm"))
        .args(["minimize", "--instance", inst.path().to_str().unwrap(), "--verify"])
        .env("KDSM_BUDGET", "25")
        .output()
        .expect("binary runs");
    match out.status.code() {
        Some(0) => {
            let json = stdout_json(&out);
            assert_eq!(json["min"], "-1");
        }
        Some(2) => {}
        other => panic!("unexpected exit code {other:?}"),
    }
}

#[test]
fn bench_emits_a_scaling_table() {
    let out = kdsm(&["bench", "--max-n", "5", "--max-k", "3", "--seed", "2"]);
    assert!(out.status.success());
    let json = stdout_json(&out);
    let rows = json["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["wall_ms"].is_number() && r["oracle_calls"].is_number()));
    let table = String::from_utf8_lossy(&out.stderr);
    assert!(table.contains("strategy"));
}
