//! End-to-end checks of the `atac` binary: exit codes, file outputs, and
//! round trips between subcommands.

use std::path::PathBuf;
use std::process::{Command, Output};

fn atac(args: &[&str]) -> Output {
    let bin = PathBuf::from(env!("CARGO_BIN_EXE_atac"));
    Command::new(bin).args(args).output().expect("failed to spawn atac")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn bound_human_and_json() {
    let out = atac(&["bound", "--machines", "57"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("8/57"));

    let out = atac(&["--format", "json", "bound", "--machines", "57"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["bound"], "8/57");
    assert_eq!(json["floor_sqrt_m"], 7);
}

#[test]
fn bound_brute_force_agrees() {
    let fast = atac(&["--format", "csv", "bound", "--machines", "1000"]);
    let slow = atac(&["--format", "csv", "bound", "--machines", "1000", "--brute-force"]);
    assert_eq!(stdout(&fast), stdout(&slow));
}

#[test]
fn usage_errors_exit_2() {
    let out = atac(&["bound", "--machines", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = atac(&["bound"]);
    assert_eq!(out.status.code(), Some(2));
    let out = atac(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    let out = atac(&["construct", "--type", "pg", "--order", "6"]);
    assert_eq!(out.status.code(), Some(1));
    let out = atac(&["verify", "--design", "/nonexistent/path.design"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn construct_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pg3.design");
    let out = atac(&["construct", "--type", "pg", "--order", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let out = atac(&["verify", "--design", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("2-(13,4,1)"));
}

#[test]
fn plan_known_cases() {
    let out = atac(&["--format", "json", "plan", "--machines", "7"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["limit"], "3/7");
    assert_eq!(json["optimal"], true);

    let out = atac(&["--format", "json", "plan", "--machines", "43"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["bound"], "7/43");
    assert!(json["note"].as_str().unwrap().contains("order 6"));
}

#[test]
fn distribute_schedule_simulate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let design = dir.path().join("fano.design");
    let schedule = dir.path().join("fano.schedule.csv");
    assert!(atac(&[
        "construct",
        "--type",
        "pg",
        "--order",
        "2",
        "--out",
        design.to_str().unwrap()
    ])
    .status
    .success());
    assert!(atac(&[
        "distribute",
        "--design",
        design.to_str().unwrap(),
        "--items",
        "14",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ])
    .status
    .success());
    let placement = dir.path().join("fano.placement.csv");
    let manifest = dir.path().join("fano.manifest.json");
    assert!(placement.exists() && manifest.exists());
    let man: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(man["limit"], "3/7");
    assert_eq!(man["optimal"], true);

    let out = atac(&[
        "schedule",
        "--design",
        design.to_str().unwrap(),
        "--items",
        "14",
        "--out",
        schedule.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("imbalance 0"));

    let out = atac(&[
        "simulate",
        "--schedule",
        schedule.to_str().unwrap(),
        "--placement",
        placement.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rep: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rep["completed"], true);
    assert_eq!(rep["makespan"], "13/1");

    let out = atac(&[
        "simulate",
        "--schedule",
        schedule.to_str().unwrap(),
        "--placement",
        placement.to_str().unwrap(),
        "--fail",
        "0:0",
    ]);
    assert!(out.status.success());
    let rep: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rep["completed"], true);
    assert_eq!(rep["per_machine_tasks"][0], 0);
}

#[test]
fn table_and_curve() {
    let out = atac(&["--format", "csv", "table", "--max-order", "10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("2,2^1,yes,7,3/7,1/2"));
    assert!(text.contains("6,,no,43,,"));
    assert!(text.contains("10,,no,111,,"));

    let out = atac(&["curve", "--max-machines", "64"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("bound,57,8/57,"));
    assert!(text.contains("design,7,3/7,PG(2;2)"));
    assert!(text.contains("heuristic,64,7/32,"));
}
