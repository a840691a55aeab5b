use std::path::Path;
use std::process::Command;

use minorlab::CSV_HEADER;
use serde_json::Value;

fn verify(args: &[&str], config: &str, dir: &Path) -> (i32, String) {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, config).unwrap();
    let out = dir.join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    let suite = args[0];
    let csv = std::fs::read_to_string(out.join(format!("{suite}.csv"))).unwrap_or_default();
    (status.status.code().unwrap(), csv)
}

const SMALL_THEOREM1: &str = r#"{
  "experiment": "theorem1", "master_seed": 5, "n_samples": 300, "n_steps": 64, "m": 2,
  "thresholds": {"w1": {"value": 0.5}, "ks_p": {"value": 1e-6}}
}"#;

#[test]
fn reruns_and_worker_counts_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (code, a) = verify(&["theorem1", "--workers", "1"], SMALL_THEOREM1, dir.path());
    assert_eq!(code, 0);
    let (_, b) = verify(&["theorem1", "--workers", "1"], SMALL_THEOREM1, dir.path());
    let (_, c) = verify(&["theorem1", "--workers", "3"], SMALL_THEOREM1, dir.path());
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a.lines().next(), Some(CSV_HEADER));
    // pairs (1,1), (1,2), (2,2), two rows each
    assert_eq!(a.lines().count(), 1 + 6);
}

#[test]
fn outputs_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let (code, csv) = verify(&["theorem1", "--seed", "77", "--samples", "200", "--steps", "32"], SMALL_THEOREM1, dir.path());
    assert_eq!(code, 0);
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row.len(), 12);
    assert_eq!((row[4], row[5], row[10], row[11]), ("200", "32", "77", "0"));
    let out = dir.path().join("out");
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(out.join("theorem1.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["suite"], "theorem1");
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["records"].as_array().unwrap().len(), 6);
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(out.join("theorem1.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["master_seed"], 77);
    assert_eq!(manifest["config"]["n_steps"], 32);
    assert!(manifest["version"].as_str().unwrap().starts_with('v'));
}

#[test]
fn statistical_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let strict = SMALL_THEOREM1.replace("\"value\": 0.5", "\"value\": 0.0");
    let (code, csv) = verify(&["theorem1"], &strict, dir.path());
    assert_eq!(code, 2);
    assert!(csv.contains(",false,"));
}

#[test]
fn invalid_configs_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        // p sums to 1 - 1e-9
        ("corollary1", r#"{"experiment": "corollary1", "master_seed": 1, "p": [0.5, 0.499999999],
            "thresholds": {"w1": {"value": 0.1}, "ks_p": {"value": 0.001}}}"#),
        ("corollary1", r#"{"experiment": "corollary1", "master_seed": 1, "thresholds": {"w1": {"value": 0.1}}}"#),
        ("theorem1", r#"{"experiment": "theorem1", "master_seed": 1, "m": 7,
            "thresholds": {"w1": {"value": 0.1}, "ks_p": {"value": 0.001}}}"#),
        ("markov", r#"{"experiment": "markov", "master_seed": 1, "markov": {"specs": [[0.5, 0.3, 0.2]]},
            "thresholds": {"corr_abs": {"value": 0.02}, "w1": {"value": 0.1}}}"#),
        ("theorem1", r#"{"experiment": "oracles", "master_seed": 1}"#),
        ("oracles", "{ not json"),
    ];
    for (suite, cfg) in cases {
        let (code, csv) = verify(&[suite], cfg, dir.path());
        assert_eq!(code, 4, "{cfg}");
        assert!(csv.is_empty());
    }
}

#[test]
fn oracles_pass() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"experiment": "oracles", "master_seed": 3,
        "oracles": {"int_arrays": 50, "real_arrays": 20, "rsk_arrays": 50, "path_collections": 200,
                    "gue_draws": 50, "forced_grids": 50}}"#;
    let (code, csv) = verify(&["oracles", "--workers", "2"], cfg, dir.path());
    assert_eq!(code, 0, "{csv}");
    assert_eq!(csv.lines().count(), 1 + 7);
}
