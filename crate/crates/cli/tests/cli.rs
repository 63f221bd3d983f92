//! End-to-end tests of the `neat-ann` binary: flags, exit codes, report
//! bytes, and the JSON config file.

use std::path::PathBuf;
use std::process::{Command, Output};

fn neat_ann(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_neat-ann"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn parsed(stdout: &[u8]) -> serde_json::Value {
    serde_json::from_slice(stdout).expect("stdout is JSON")
}

#[test]
fn ring_verify_passes_with_expected_dims() {
    let out = neat_ann(&[
        "verify", "--mode", "ring", "--s", "4", "--char", "0", "--check", "theorem6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = parsed(&out.stdout);
    assert_eq!(report["dims"]["annihilator"], "6");
    assert_eq!(report["dims"]["ambient"], "16");
    assert_eq!(report["equalities"]["ann_equals_generated_ideal"], true);
}

#[test]
fn exterior_verify_passes_with_expected_dims() {
    let out = neat_ann(&[
        "verify", "--mode", "exterior", "--blocks", "2,2", "--char", "0", "--check", "main",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = parsed(&out.stdout);
    assert_eq!(report["dims"]["mu_ideal"], "6");
    assert_eq!(report["dims"]["generated_ideal"], "10");
    assert_eq!(report["dims"]["ambient"], "16");
    assert_eq!(report["ledger"]["total"], "16");
}

#[test]
fn failing_equality_exits_three_and_serializes_a_witness() {
    let out = neat_ann(&[
        "verify", "--mode", "ring", "--s", "3", "--char", "2", "--check", "theorem6",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let report = parsed(&out.stdout);
    assert_eq!(report["equalities"]["ann_equals_generated_ideal"], false);
    let witnesses = report["witnesses"].as_array().unwrap();
    assert!(!witnesses.is_empty());
    assert!(witnesses[0]["element"].as_str().unwrap().contains("x1"));
}

#[test]
fn invalid_configs_exit_two_with_machine_readable_errors() {
    let composite = neat_ann(&["verify", "--mode", "ring", "--s", "3", "--char", "6"]);
    assert_eq!(composite.status.code(), Some(2));
    let error: serde_json::Value =
        serde_json::from_slice(&composite.stderr).expect("stderr is JSON");
    assert_eq!(error["error"]["kind"], "config");

    let wrong_check = neat_ann(&[
        "verify", "--mode", "exterior", "--blocks", "2,2", "--char", "0", "--check", "theorem6",
    ]);
    assert_eq!(wrong_check.status.code(), Some(2));

    let odd_blocks = neat_ann(&["verify", "--mode", "exterior", "--blocks", "2,3", "--char", "0"]);
    assert_eq!(odd_blocks.status.code(), Some(2));

    let over_cap = neat_ann(&[
        "verify", "--mode", "ring", "--s", "15", "--char", "0", "--check", "lemma2",
    ]);
    assert_eq!(over_cap.status.code(), Some(2));

    let unknown_flag = neat_ann(&["verify", "--mode", "ring", "--nope"]);
    assert_eq!(unknown_flag.status.code(), Some(2));
}

#[test]
fn identical_invocations_produce_identical_bytes() {
    let args = [
        "sweep", "--mode", "ring", "--s", "2,3", "--char", "0,5", "--check", "theorem6,minimal",
    ];
    let first = neat_ann(&args);
    let second = neat_ann(&args);
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn sweep_csv_has_one_row_per_configuration() {
    let out = neat_ann(&[
        "sweep", "--mode", "ring", "--s", "2,3,4", "--char", "0,5", "--check", "theorem6",
        "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim_end().lines().count(), 1 + 6);
}

#[test]
fn sweep_with_empty_grid_exits_zero() {
    let out = neat_ann(&["sweep", "--mode", "ring", "--check", "theorem6"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = parsed(&out.stdout);
    assert_eq!(reports.as_array().unwrap().len(), 0);
}

#[test]
fn sweep_continues_past_failing_cells() {
    let out = neat_ann(&[
        "sweep", "--mode", "ring", "--s", "2,3", "--char", "2", "--check", "theorem6",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let reports = parsed(&out.stdout);
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    // s=2 passes, s=3 fails, both reported.
    assert_eq!(reports[0]["equalities"]["ann_equals_generated_ideal"], true);
    assert_eq!(reports[1]["equalities"]["ann_equals_generated_ideal"], false);
}

#[test]
fn config_file_mirrors_flags_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let config_path: PathBuf = dir.path().join("run.json");
    std::fs::write(
        &config_path,
        r#"{
            "mode": "ring",
            "s": [2, 3],
            "char": [0, 5],
            "check": ["theorem6"],
            "stack-convention": "231",
            "max-ambient-dim": 4096
        }"#,
    )
    .unwrap();
    let from_file = neat_ann(&["sweep", "--config", config_path.to_str().unwrap()]);
    assert_eq!(from_file.status.code(), Some(0));
    let reports = parsed(&from_file.stdout);
    assert_eq!(reports.as_array().unwrap().len(), 4);

    // The --s flag overrides the file's list.
    let overridden = neat_ann(&[
        "sweep", "--config", config_path.to_str().unwrap(), "--s", "2",
    ]);
    let reports = parsed(&overridden.stdout);
    assert_eq!(reports.as_array().unwrap().len(), 2);
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = neat_ann(&[
        "verify", "--mode", "ring", "--s", "2", "--char", "0", "--check", "theorem6", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    let report: serde_json::Value = serde_json::from_slice(&written).unwrap();
    assert_eq!(report["dims"]["annihilator"], "2");
}

#[test]
fn ambient_cap_override_admits_larger_configurations() {
    let refused = neat_ann(&[
        "verify", "--mode", "ring", "--s", "9", "--char", "11", "--check", "lemma2",
        "--max-ambient-dim", "256",
    ]);
    assert_eq!(refused.status.code(), Some(2));

    let admitted = neat_ann(&[
        "verify", "--mode", "ring", "--s", "9", "--char", "11", "--check", "lemma2",
        "--max-ambient-dim", "512",
    ]);
    assert_eq!(admitted.status.code(), Some(0));
    let report = parsed(&admitted.stdout);
    assert_eq!(report["equalities"]["monomials_factor_through_mu"], true);
}

#[test]
fn stack_convention_flag_is_honored() {
    let out = neat_ann(&[
        "verify", "--mode", "ring", "--s", "4", "--char", "0", "--check", "theorem6",
        "--stack-convention", "312",
    ]);
    assert_eq!(out.status.code(), Some(0), "312-avoiding spans match too");
    let report = parsed(&out.stdout);
    assert_eq!(report["config"]["stack_convention"], "312");
}

#[test]
fn thread_env_bounds_the_pool_without_changing_output() {
    let args = [
        "sweep", "--mode", "ring", "--s", "2,3,4", "--char", "0,3", "--check", "theorem6",
    ];
    let parallel = neat_ann(&args);
    let serial = Command::new(env!("CARGO_BIN_EXE_neat-ann"))
        .args(args)
        .env("NEAT_ANN_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(parallel.stdout, serial.stdout);
    assert_eq!(parallel.status.code(), serial.status.code());
}
