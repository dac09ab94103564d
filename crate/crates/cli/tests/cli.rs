use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cfr(args: &[&str]) -> Output {
    cfr_env(args, None)
}

fn cfr_env(args: &[&str], tol: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cfr"));
    cmd.args(args).env_remove("CFR_TOL");
    if let Some(t) = tol {
        cmd.env("CFR_TOL", t);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn gaussian_minimizers_print_one() {
    for (l, d) in [("2", "3"), ("1.5", "1")] {
        let o = cfr(&["gaussian", "--lambda", l, "--dim", d]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let cfr = json(&o)["cfr"].as_f64().unwrap();
        assert!((cfr - 1.0).abs() < 1e-6);
    }
}

#[test]
fn lambda_below_the_bound_is_a_domain_error() {
    let o = cfr(&["gaussian", "--lambda", "0.5", "--dim", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("lambda must exceed max{2/3, 3/5}"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn ground_state_both_paths() {
    let o = cfr(&["hydrogenic", "-n", "1", "-l", "0", "-m", "0", "--lambda", "2", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["method"], "both");
    assert!(v["discrepancy"].as_f64().unwrap() < 1e-8);
}

#[test]
fn circular_closed_form() {
    let o = cfr(&["hydrogenic", "-n", "2", "-l", "1", "-m", "1", "--lambda", "1.5", "--method", "closed"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["method"], "closed");
    let q = cfr(&["hydrogenic", "-n", "2", "-l", "1", "-m", "1", "--lambda", "1.5", "--method", "quadrature"]);
    let a = v["cfr"].as_f64().unwrap();
    let b = json(&q)["cfr"].as_f64().unwrap();
    assert!((a / b - 1.0).abs() < 1e-8, "{a} vs {b}");
}

#[test]
fn closed_request_without_a_formula_falls_back() {
    let o = cfr(&["hydrogenic", "-n", "3", "-l", "1", "-m", "-1", "--Z", "2", "--lambda", "1.5", "--method", "closed"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("notice: no closed form"));
    assert_eq!(json(&o)["method"], "quadrature");
}

#[test]
fn nodal_state_below_three_quarters_diverges() {
    let o = cfr(&["hydrogenic", "-n", "2", "-l", "0", "-m", "0", "--lambda", "0.7", "--method", "quadrature"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("divergent"));
}

#[test]
fn invalid_quantum_numbers_and_usage() {
    assert_eq!(cfr(&["hydrogenic", "-n", "1", "-l", "1", "-m", "0", "--lambda", "2"]).status.code(), Some(1));
    assert_eq!(cfr(&["hydrogenic", "-n", "1", "-l", "0", "-m", "0"]).status.code(), Some(1));
    assert_eq!(cfr(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cfr(&["--help"]).status.code(), Some(0));
}

#[test]
fn circular_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "circ.json",
        r#"{"command": "sweep", "lambdas": [2], "format": "csv",
            "states": [{"n":1,"l":0,"m":0},{"n":2,"l":1,"m":1},{"n":3,"l":2,"m":2},{"n":4,"l":3,"m":3}]}"#,
    );
    let o = cfr(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(
        rows[0].join(","),
        "lambda,n,l,m,fisher_lambda,renyi_power,d_norm,cfr,method,discrepancy,error"
    );
    assert_eq!(rows.len(), 5);
    for (i, r) in rows[1..].iter().enumerate() {
        assert_eq!(r[1], (i + 1).to_string());
        assert!(r[7].parse::<f64>().unwrap() >= 1.0);
        assert!(r[10].is_empty());
    }
}

#[test]
fn ground_state_lambda_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "ground.json",
        r#"{"states": [{"n":1,"l":0,"m":0}], "lambda_range": {"start": 1.1, "stop": 3.0, "step": 0.1}}"#,
    );
    let o = cfr(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 20);
    for (i, r) in rows.iter().enumerate() {
        let want = format!("{:.1}", 1.1 + 0.1 * i as f64);
        assert_eq!(r["lambda"].as_f64().unwrap(), want.parse::<f64>().unwrap());
        assert!(r["cfr"].as_f64().unwrap().is_finite());
        assert!(r["error"].is_null());
    }
}

#[test]
fn sweep_rows_are_state_major_and_failures_stay_in_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "mixed.json",
        r#"{"states": [{"n":2,"l":0,"m":0},{"n":1,"l":0,"m":0}], "lambdas": [0.7, 1.5], "format": "csv"}"#,
    );
    let o = cfr(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows = csv_rows(&text);
    let keys: Vec<(&str, &str)> = rows[1..].iter().map(|r| (r[1].as_str(), r[0].as_str())).collect();
    assert_eq!(keys, vec![("2", "0.7"), ("2", "1.5"), ("1", "0.7"), ("1", "1.5")]);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[1].contains(",\"divergent"), "{}", lines[1]);
    assert!(lines[2].ends_with(','));
}

#[test]
fn empty_lambda_list_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "e.json", r#"{"states": [{"n":1,"l":0,"m":0}], "lambdas": []}"#);
    let o = cfr(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("empty"));
    assert_eq!(cfr(&["sweep", "--config", "/nonexistent/cfg.json"]).status.code(), Some(1));
}

#[test]
fn csv_and_json_carry_identical_values() {
    let dir = tempfile::tempdir().unwrap();
    let body = |fmt: &str, out: &str| {
        format!(
            r#"{{"states": [{{"n":1,"l":0,"m":0}},{{"n":3,"l":2,"m":-1}}], "lambdas": [1.25, 2, 2.5],
                "method": "both", "format": "{fmt}", "output": "{out}"}}"#
        )
    };
    let csv_out = dir.path().join("t.csv");
    let json_out = dir.path().join("t.json");
    let c1 = write_config(dir.path(), "c.json", &body("csv", csv_out.to_str().unwrap()));
    let c2 = write_config(dir.path(), "j.json", &body("json", json_out.to_str().unwrap()));
    assert_eq!(cfr(&["sweep", "--config", &c1]).status.code(), Some(0));
    assert_eq!(cfr(&["sweep", "--config", &c2]).status.code(), Some(0));
    let rows = csv_rows(&fs::read_to_string(&csv_out).unwrap());
    let objs: Value = serde_json::from_str(&fs::read_to_string(&json_out).unwrap()).unwrap();
    let header = &rows[0];
    for (row, obj) in rows[1..].iter().zip(objs.as_array().unwrap()) {
        for (key, cell) in header.iter().zip(row) {
            let v = &obj[key.as_str()];
            match v {
                Value::Number(n) => assert_eq!(cell.parse::<f64>().unwrap(), n.as_f64().unwrap(), "{key}"),
                Value::String(s) => assert_eq!(cell, s),
                Value::Null => assert!(cell.is_empty()),
                other => panic!("unexpected {other}"),
            }
        }
    }
}

#[test]
fn reruns_are_bit_identical() {
    let args = ["hydrogenic", "-n", "3", "-l", "1", "-m", "0", "--lambda", "1.25", "--method", "quadrature", "--format", "csv"];
    assert_eq!(cfr(&args).stdout, cfr(&args).stdout);
}

#[test]
fn tolerance_from_the_environment() {
    let args = ["hydrogenic", "-n", "2", "-l", "1", "-m", "0", "--lambda", "1.5", "--method", "quadrature"];
    let tight = json(&cfr_env(&args, Some("1e-12")))["cfr"].as_f64().unwrap();
    let loose = json(&cfr_env(&args, Some("1e-3")))["cfr"].as_f64().unwrap();
    assert!((tight / loose - 1.0).abs() < 1e-3);
    assert_eq!(cfr_env(&args, Some("abc")).status.code(), Some(1));
    assert_eq!(cfr_env(&args, Some("-1")).status.code(), Some(1));
}

#[test]
fn verify_replication_reports_the_ratio() {
    let o = cfr(&["verify", "replication"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("C_FR ratio vs n^2 for truncated cosine, lambda=2, n=2: value 4.000000000000e0"), "{out}");
    assert!(out.contains("PASS criterion  6"));
}

#[test]
fn verify_bounds_and_unknown_suite() {
    let o = cfr(&["verify", "bounds"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("criterion")).count(), 3);
    assert_eq!(cfr(&["verify", "everything"]).status.code(), Some(1));
}

#[test]
fn verify_failure_exit_code() {
    // a tolerance this loose cannot meet the Shannon-limit criterion
    let o = cfr_env(&["verify", "bounds"], Some("0.1"));
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn verify_all_passes() {
    let o = cfr(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS criterion")).count(), 10);
}
