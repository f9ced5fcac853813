use std::path::Path;
use std::process::{Command, Output};

const BROWNIAN: &str = r#""exponent": {"kind": "brownian", "b": -0.25, "sigma": 1.0}, "alpha": 2.0, "lambda": 1.0"#;

fn qinv(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("run.json");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_qinv")).args(args).arg("--config").arg(&path).output().unwrap()
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn eval_series_at_zero_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(r#"{{{BROWNIAN}, "grid": {{"z": [0.0, 0.0, 0.0]}}}}"#);
    let out = qinv(dir.path(), &cfg, &["eval-series"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert_eq!(row[1].parse::<f64>().unwrap(), 1.0);
    }
}

#[test]
fn fpt_on_the_barrier_is_one_and_rows_follow_grid_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(r#"{{{BROWNIAN}, "process": "u", "grid": {{"q": [2.0, 0.5, 1.0], "x": [0.7], "a": [0.7]}}}}"#);
    let out = qinv(dir.path(), &cfg, &["fpt"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    let qs: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(qs, [2.0, 0.5, 1.0]);
    assert!(rows.iter().all(|r| r[3].parse::<f64>().unwrap() == 1.0));
}

#[test]
fn validate_kummer_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = qinv(dir.path(), &format!("{{{BROWNIAN}}}"), &["validate", "--suite", "kummer"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    assert!(rows[0][2].contains("nu=0.25"));
    assert!(rows[0][3].parse::<f64>().unwrap() < 1e-9);
    assert_eq!(rows[0][5], "pass");
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(
        r#"{{{BROWNIAN}, "process": "u", "grid": {{"q": [0.7, 1.5], "x": [0.5], "a": [1.0]}},
            "simulation": {{"dt": 0.01, "horizon": 20.0, "scheme": "exact_bessel"}}}}"#
    );
    let run = |seed: &str, name: &str| {
        let out = dir.path().join(name);
        let o = qinv(dir.path(), &cfg, &["simulate", "--paths", "2000", "--seed", seed, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(out).unwrap()
    };
    let a = run("9", "a.csv");
    assert_eq!(a, run("9", "b.csv"));
    assert_ne!(a, run("10", "c.csv"));
}

#[test]
fn samples_csv_has_one_row_per_path() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("samples.csv");
    let cfg = format!(
        r#"{{{BROWNIAN}, "process": "u", "grid": {{"q": [0.7], "x": [0.5], "a": [1.0]}},
            "simulation": {{"dt": 0.01, "horizon": 20.0, "scheme": "exact_bessel", "samples_csv": {:?}}}}}"#,
        samples.to_str().unwrap()
    );
    let out = qinv(dir.path(), &cfg, &["simulate", "--paths", "300"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(samples).unwrap();
    assert_eq!(text.lines().next(), Some("hit_time,overshoot,killed"));
    assert_eq!(text.lines().count(), 301);
}

#[test]
fn json_output_has_columns_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(r#"{{{BROWNIAN}, "grid": {{"q": [0.7], "x": [0.5, 1.0]}}}}"#);
    let out = qinv(dir.path(), &cfg, &["gamma-transform", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["columns"][4], "rel_diff");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[4].as_f64().unwrap() < 1e-9));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qinv(dir.path(), r#"{"alpah": 2.0}"#, &["fpt"]).status.code(), Some(2));
    assert_eq!(qinv(dir.path(), &format!(r#"{{{BROWNIAN}, "grid": {{"z": []}}}}"#), &["eval-series"]).status.code(), Some(2));
    // θ = 2ν ≥ α: no recurrent extension
    let cfg = r#"{"exponent": {"kind": "brownian", "b": -1.5, "sigma": 1.0}, "alpha": 2.0, "lambda": 1.0, "process": "u",
                  "grid": {"q": [1.0], "x": [0.5], "a": [1.0]}}"#;
    assert_eq!(qinv(dir.path(), cfg, &["fpt"]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(r#"{{{BROWNIAN}, "grid": {{"z": [400.0]}}, "truncation": {{"rtol": 1e-12, "max_terms": 8}}}}"#);
    let out = qinv(dir.path(), &cfg, &["eval-series"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn failed_validation_exits_1_and_still_writes_the_table() {
    // two stable classes miss the 2% slope tolerance on [1e2, 1e4]
    let dir = tempfile::tempdir().unwrap();
    let out = qinv(dir.path(), "{}", &["validate", "--suite", "wiener_hopf"]);
    assert_eq!(out.status.code(), Some(1));
    let rows = csv_rows(&out);
    assert!(rows.iter().any(|r| r[5] == "FAIL"));
    assert!(rows.iter().filter(|r| r[1].starts_with("Psi^-")).all(|r| r[5] == "pass"));
}
