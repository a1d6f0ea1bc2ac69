use proptest::prelude::*;
use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qso-spectra")).args(args).env_remove("QSO_SPECTRA_JOBS").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn spectrum_table_example() {
    let o = run(&["spectrum", "table", "--n", "5", "--q", "11/10", "--params", "default", "--kmax", "5", "--lmax", "5"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let recs = v["records"].as_array().unwrap();
    assert_eq!(recs.len(), 36);
    assert_eq!((recs[0]["k"].as_u64(), recs[0]["l"].as_u64()), (Some(0), Some(0)));
    assert_eq!(recs[0]["value"], "0/1");
    assert_eq!(recs[0]["multiplicity"], 1);
}

#[test]
fn kappa_powers_signs() {
    let o = run(&["fiber", "kappa-powers", "--n", "7", "--l", "3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let entries = v["powers"][0]["entries"].as_array().unwrap();
    let diag: Vec<&Value> = entries.iter().filter(|e| e["plus"] == e["minus"]).collect();
    assert_eq!(diag.len(), 10);
    assert!(diag.iter().all(|e| e["f_at_1"] == "-6/1"));
    assert!(entries.iter().filter(|e| e["plus"] != e["minus"]).all(|e| e["f_at_1"] == "0/1"));
}

#[test]
fn definite_failure_exits_two() {
    // the printed sign of one relation family is refuted
    let o = run(&["verify", "rels", "--n", "5"]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    let f6 = v["families"].as_array().unwrap().iter().find(|f| f["family"] == "F6").unwrap();
    assert_eq!(f6["refuted"], 64);
}

#[test]
fn passing_suites_exit_zero() {
    for args in [
        &["verify", "rep", "--n", "6"][..],
        &["verify", "spherical", "--n", "5"],
        &["fiber", "lefschetz", "--n", "5", "--classical", "--q", "1", "--q", "11/10"],
        &["fiber", "nonprimitive", "--n", "6"],
        &["spectrum", "diverge", "--n", "5", "--bound", "100", "--shell-max", "60"],
    ] {
        assert_eq!(code(&run(args)), 0, "{args:?}");
    }
}

#[test]
fn warnings_exit_one() {
    let o = run(&["spectrum", "table", "--n", "5", "--theta1", "-1", "--kmax", "1", "--lmax", "1"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["validation"]["ok"], false);
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["verify", "rep", "--n", "4"][..],
        &["verify", "rep"],
        &["verify", "rep", "--n", "5", "--q", "1"],
        &["verify", "rep", "--n", "5", "--q", "abc"],
        &["verify", "rep", "--n", "5", "--q2", "q^3"],
        &["verify", "rep", "--n", "5", "--format", "csv"],
        &["fiber", "kappa-powers", "--n", "5", "--l", "9"],
        &["fiber", "lefschetz", "--n", "5", "--lambda-plus", "1,2"],
        &["spectrum", "table", "--n", "5", "--params", "nonsense"],
        &["nope"],
    ] {
        let o = run(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn boundary_divergence_is_not_cleared() {
    let o = run(&["spectrum", "diverge", "--n", "5", "--params", "boundary", "--shell-max", "80"]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_eq!(v["divergence"]["cleared"], false);
    assert_eq!(v["divergence"]["lane_l0"]["limit"], "121/21");
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = run(&["verify", "rels", "--n", "5", "--seed", "3", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 2);
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"N": 6, "q_samples": ["3/2"], "spectral": {"mu_y": "5/2"}, "format": "csv", "jobs": 1}"#,
    )
    .unwrap();
    let o = run(&["spectrum", "table", "--config", cfg.to_str().unwrap(), "--kmax", "1", "--lmax", "0"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("1,0,5/2,")), "{text}");
    let o = run(&["spectrum", "table", "--config", cfg.to_str().unwrap(), "--mu-y", "7", "--format", "json", "--kmax", "1", "--lmax", "0"]);
    let v = json(&o);
    assert_eq!(v["records"][1]["value"], "7/1");
    assert_eq!(v["params"]["n"], 6);
    std::fs::write(&cfg, r#"{"N": 6, "bogus": 1}"#).unwrap();
    assert_eq!(code(&run(&["verify", "rep", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn jobs_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_qso-spectra"))
        .args(["verify", "rep", "--n", "5"])
        .env("QSO_SPECTRA_JOBS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_qso-spectra"))
        .args(["verify", "rep", "--n", "5"])
        .env("QSO_SPECTRA_JOBS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn all_stops_at_first_definite_failure() {
    let o = run(&["all", "--n", "5"]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    let stages: Vec<&str> = v["stages"].as_array().unwrap().iter().map(|s| s["stage"].as_str().unwrap()).collect();
    assert_eq!(stages, ["verify rep", "verify rels"]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Valid parameters exit 0, admissible-but-invalid ones 1, malformed ones 2.
    #[test]
    fn exit_codes_follow_parameter_class(t1 in -3i64..4, mz in -3i64..4, malformed in prop::bool::weighted(0.2)) {
        let t1s = if malformed { "x/".to_string() } else { format!("{t1}/2") };
        let mzs = format!("{mz}/3");
        let o = run(&["spectrum", "table", "--n", "5", "--kmax", "1", "--lmax", "1", "--theta1", &t1s, "--mu-z", &mzs]);
        let want = if malformed { 2 } else if t1 > 0 && mz > 0 { 0 } else { 1 };
        prop_assert_eq!(code(&o), want);
    }
}
