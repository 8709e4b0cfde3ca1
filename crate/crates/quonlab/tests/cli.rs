use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn quonlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quonlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn records(report: &Value) -> &Vec<Value> {
    report["records"].as_array().unwrap()
}

#[test]
fn default_sweep_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"twice_j": 2, "q_list": [-0.9, 0, 0.9], "n_max": 3, "series_order": 1}"#,
    );
    let report = dir.path().join("r.json");
    let summary = dir.path().join("s.txt");
    let o = quonlab(&[
        "run",
        "--config",
        &cfg,
        "--report",
        report.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["backend"], "float");
    assert_eq!(r["summary"]["failed"], 0);
    let suites: std::collections::BTreeSet<&str> = records(&r)
        .iter()
        .map(|x| x["suite"].as_str().unwrap())
        .collect();
    assert_eq!(suites.len(), 9);
    let independent = records(&r)
        .iter()
        .filter(|x| x["name"] == "eq10_q_independent")
        .count();
    assert_eq!(independent, 3);
    assert!(std::fs::read_to_string(&summary)
        .unwrap()
        .contains("0 failed"));
}

#[test]
fn exact_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"twice_j": 1, "q_list": ["1/2", "-1/3", "0"], "n_max": 3, "series_order": 2}"#,
    );
    let mut bodies = Vec::new();
    for name in ["a.json", "b.json"] {
        let out = dir.path().join(name);
        let o = quonlab(&["run", "--config", &cfg, "--report", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        bodies.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    let r: Value = serde_json::from_slice(&bodies[0]).unwrap();
    assert_eq!(r["backend"], "exact");
    assert!(records(&r).iter().all(|x| x["passed"] == true));
}

#[test]
fn series_at_the_endpoint_is_an_error_and_nothing_else_breaks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"twice_j": 1, "q_list": ["1", "1/2"], "n_max": 3, "series_order": 1, "checks": ["series", "eq2", "positivity", "eq10"]}"#,
    );
    let out = dir.path().join("r.json");
    let o = quonlab(&["run", "--config", &cfg, "--report", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let failing: Vec<&Value> = records(&r)
        .iter()
        .filter(|x| x["passed"] == false)
        .collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0]["suite"], "series");
    assert_eq!(failing[0]["q"], "1");
    assert!(failing[0]["error"].as_str().unwrap().contains("|q| = 1"));
    assert_eq!(r["summary"]["errors"], 1);
    assert!(records(&r)
        .iter()
        .any(|x| x["suite"] == "eq2" && x["q"] == "1"));
    assert!(records(&r)
        .iter()
        .any(|x| x["suite"] == "series" && x["q"] == "1/2" && x["passed"] == true));
}

#[test]
fn invalid_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [
        (
            "range.json",
            r#"{"twice_j": 2, "q_list": [1.5], "n_max": 2}"#,
        ),
        (
            "mixed.json",
            r#"{"twice_j": 2, "q_list": [0.5, "1/3"], "n_max": 2}"#,
        ),
        ("empty.json", r#"{"twice_j": 2, "q_list": [], "n_max": 2}"#),
        (
            "nmax.json",
            r#"{"twice_j": 2, "q_list": [0.5], "n_max": 0}"#,
        ),
        (
            "unknown.json",
            r#"{"twice_j": 2, "q_list": [0.5], "n_max": 2, "colour": 1}"#,
        ),
        (
            "suite.json",
            r#"{"twice_j": 2, "q_list": [0.5], "n_max": 2, "checks": ["eq99"]}"#,
        ),
        ("syntax.json", r#"{"twice_j": 2,"#),
    ] {
        let cfg = write_config(dir.path(), name, body);
        let o = quonlab(&["run", "--config", &cfg]);
        assert_eq!(code(&o), 2, "{}", name);
        assert!(!o.stderr.is_empty(), "{}", name);
    }
    let o = quonlab(&[
        "run",
        "--config",
        dir.path().join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn check_exit_codes_follow_the_verdict() {
    let pass = quonlab(&[
        "check",
        "--j",
        "2",
        "--q",
        "0.7",
        "--nmax",
        "3",
        "comm[N(1,0), N(0,1)] == N(1,1) - N(0,0)",
    ]);
    assert_eq!(code(&pass), 0);
    assert!(stdout(&pass).starts_with("PASS"));
    let exact = quonlab(&[
        "check",
        "--j",
        "3",
        "--q",
        "-2/5",
        "--nmax",
        "3",
        "qmut[b(3/2), bd(1/2)] == 0",
    ]);
    assert_eq!(code(&exact), 0);
    assert!(stdout(&exact).contains("exact zero"));
    let fail = quonlab(&[
        "check",
        "--j",
        "2",
        "--q",
        "1/2",
        "--nmax",
        "3",
        "comm[b(1), bd(1)] == 1",
    ]);
    assert_eq!(code(&fail), 1);
    assert!(stdout(&fail).starts_with("FAIL"));
    let syntax = quonlab(&[
        "check",
        "--j",
        "2",
        "--q",
        "1/2",
        "--nmax",
        "3",
        "comm[Jp, Jm] == 2 ** J0",
    ]);
    assert_eq!(code(&syntax), 2);
    assert!(String::from_utf8_lossy(&syntax.stderr).contains("column 20"));
    let range = quonlab(&[
        "check",
        "--j",
        "2",
        "--q",
        "1/2",
        "--nmax",
        "3",
        "bd(2) == 0",
    ]);
    assert_eq!(code(&range), 2);
    let q = quonlab(&[
        "check", "--j", "2", "--q", "-1.01", "--nmax", "3", "J0 == J0",
    ]);
    assert_eq!(code(&q), 2);
}

#[test]
fn gram_export_in_both_formats() {
    let csv = quonlab(&["gram", "--j", "1", "--q", "1/2", "--n", "2"]);
    assert_eq!(code(&csv), 0);
    let text = stdout(&csv);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# j=1/2, n=2, q=1/2, backend=exact");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[3], "\"(-1/2,1/2)\",0,1,1/2,0");

    let json = quonlab(&[
        "gram", "--j", "2", "--q", "-0.5", "--n", "2", "--format", "json",
    ]);
    assert_eq!(code(&json), 0);
    let v: Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["words"].as_array().unwrap().len(), 9);
    let m = v["matrix"].as_array().unwrap();
    let at = |i: usize, k: usize| m[i][k].as_f64().unwrap();
    for i in 0..9 {
        for k in 0..9 {
            assert_eq!(at(i, k), at(k, i));
        }
    }
    assert_eq!(at(1, 3), -0.5);
}

#[test]
fn coefficient_export() {
    let o = quonlab(&["coeffs", "--order", "2", "--q", "1/2"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coefficients"]["1"]["1"], "4/3");
    assert_eq!(v["coefficients"]["2"]["1 2"], "320/189");
    assert_eq!(v["coefficients"]["2"]["2 1"], "-128/189");

    let f = quonlab(&["coeffs", "--order", "1", "--q", "0.5", "--backend", "float"]);
    let v: Value = serde_json::from_str(&stdout(&f)).unwrap();
    assert!((v["coefficients"]["1"]["1"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-12);

    let endpoint = quonlab(&["coeffs", "--order", "1", "--q", "-1"]);
    assert_eq!(code(&endpoint), 2);
}

#[test]
fn clebsch_gordan_export() {
    let o = quonlab(&["cg", "--j1", "1", "--j2", "1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entries = v["entries"].as_array().unwrap();
    let singlet: Vec<&Value> = entries.iter().filter(|e| e["J"] == "0").collect();
    assert_eq!(singlet.len(), 2);
    assert_eq!(singlet[0]["value"]["sign"], -1);
    assert_eq!(singlet[1]["value"]["sign"], 1);
    assert!(singlet.iter().all(|e| e["value"]["radicand"] == "1/2"));
}
