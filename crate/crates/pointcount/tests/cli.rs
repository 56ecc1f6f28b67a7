//! Black-box tests of the command-line interface.

use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pointcount"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn pointcount")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn invariants_reports_balance_and_schema_version() {
    let dir = tempfile::tempdir().unwrap();
    let doc: serde_json::Value =
        serde_json::from_str(&stdout(&run(dir.path(), &["invariants", "--r", "3"]))).unwrap();
    assert_eq!(doc["spec_version"], "1");
    assert_eq!(doc["invariants"]["a"], "1/1");
    assert_eq!(doc["invariants"]["b"], 2);
    assert_eq!(doc["invariants"]["balanced"], true);

    let doc: serde_json::Value =
        serde_json::from_str(&stdout(&run(dir.path(), &["invariants", "--degrees", "4,8"])))
            .unwrap();
    assert_eq!(doc["invariants"]["balanced"], false);
    assert_eq!(doc["invariants"]["witness"], serde_json::json!([1, 3]));
}

#[test]
fn count_csv_is_warm_cache_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "count", "--r", "2", "--bound", "16", "--t-min", "256", "--t-max", "65536", "--ratio", "4",
    ];
    let cold = stdout(&run(dir.path(), &args));
    let warm = stdout(&run(dir.path(), &args));
    assert_eq!(cold, warm, "cache reuse must be byte-identical");
    let mut lines = cold.lines();
    assert_eq!(lines.next(), Some("T,N,N_diag_1_2"));
    assert_eq!(lines.next(), Some("256,2736,1"));
    assert!(!cold.contains('\r'), "CSV must use unix newlines");
    assert!(dir.path().join("cache/histogram.txt").exists());
}

#[test]
fn count_rejects_histogram_too_short_for_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["count", "--r", "2", "--bound", "8", "--t-min", "256", "--t-max", "65536"],
    );
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("histogram too short"), "stderr: {err}");
    assert!(err.contains("bound 8"), "stderr: {err}");
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "r = 2\nbound = 16\nt_min = 256\nt_max = 65536\nratio = 4.0\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&run(dir.path(), &["count", "--config", cfg]));
    assert!(from_file.lines().any(|l| l.starts_with("65536,")));
    let overridden = stdout(&run(dir.path(), &["count", "--config", cfg, "--t-max", "4096"]));
    assert!(!overridden.lines().any(|l| l.starts_with("65536,")));
    assert!(overridden.lines().any(|l| l.starts_with("4096,")));
}

#[test]
fn subgroups_requires_seed_for_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["subgroups", "--group", "A5", "--samples", "5"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));

    let doc: serde_json::Value = serde_json::from_str(&stdout(&run(
        dir.path(),
        &["subgroups", "--group", "A5", "--n", "2", "--samples", "5", "--seed", "7"],
    )))
    .unwrap();
    assert_eq!(doc["random_closures"]["admissible"], 5);
    assert_eq!(doc["intermediate_subgroups"].as_array().unwrap().len(), 2);
}

#[test]
fn subgroups_accepts_cycle_notation_generators() {
    let dir = tempfile::tempdir().unwrap();
    let doc: serde_json::Value = serde_json::from_str(&stdout(&run(
        dir.path(),
        &["subgroups", "--generators", "(1 2 3 4 5); (3 4 5)", "--n", "2"],
    )))
    .unwrap();
    assert_eq!(doc["group"]["order"], 60);
}

#[test]
fn output_flag_writes_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("inv.json");
    let out = run(
        dir.path(),
        &["invariants", "--r", "2", "--output", target.to_str().unwrap()],
    );
    assert!(stdout(&out).is_empty());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(doc["invariants"]["b"], 1);
}
