mod common;

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use common::{run, validate, write};

fn sample(name: &str) -> String {
    common::crate_dir().join("data/samples").join(name).to_str().unwrap().to_string()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let doc: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{:?}: {}\n{}", args, e, String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), doc)
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn time_translation_is_a_symmetry_of_c1() {
    let (c1, tt) = (sample("c1.json"), sample("time_translation.json"));
    assert_eq!(code(&["check-symmetry", "--problem", &c1, "--generator", &tt]), 0);
}

#[test]
fn c1_conserved_vector_checks_out() {
    let (c1, t) = (sample("c1.json"), sample("c1_conserved.json"));
    let out = run(&["check-conservation", "--problem", &c1, "--conserved", &t]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("characteristic: x"));
}

#[test]
fn c2_candidate_fails_with_residuals_shown() {
    let (c2, s) = (sample("c2.json"), sample("c2_solution.json"));
    let out = run(&["check-solution", "--problem", &c2, "--solution", &s]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL solution"));
    assert!(text.contains("residual[0] = (3*x^4 - 1)/(x^5*t^4)"), "{}", text);
}

#[test]
fn c1_implicit_solution_passes() {
    let (c1, s) = (sample("c1.json"), sample("c1_solution.json"));
    assert_eq!(code(&["check-solution", "--problem", &c1, "--solution", &s]), 0);
}

#[test]
fn usage_and_validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let c1 = sample("c1.json");
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["check-symmetry", "--problem", &c1]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["--format", "xml", "paper-suite"]), 2);

    let missing = dir.path().join("absent.json");
    assert_eq!(code(&["derive-noether", "--problem", missing.to_str().unwrap()]), 2);
    let broken = write(dir.path(), "broken.json", "{\"f\": ");
    assert_eq!(code(&["derive-noether", "--problem", broken.to_str().unwrap()]), 2);
    let unknown = write(dir.path(), "unknown.json", r#"{"f":"1","g":"1","h":"0","k":"2"}"#);
    assert_eq!(code(&["derive-noether", "--problem", unknown.to_str().unwrap()]), 2);
    let bad_expr = write(dir.path(), "bad.json", r#"{"f":"1 +","g":"1","h":"0"}"#);
    let out = run(&["derive-noether", "--problem", bad_expr.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());
    let f_of_t = write(dir.path(), "ft.json", r#"{"f":"t","g":"1","h":"0"}"#);
    assert_eq!(code(&["derive-noether", "--problem", f_of_t.to_str().unwrap()]), 2);
    let both = write(dir.path(), "both.json", r#"{"u":"x","relation_u":"u","v":"0"}"#);
    assert_eq!(code(&["check-solution", "--problem", &c1, "--solution", both.to_str().unwrap()]), 2);
    assert_eq!(code(&["reduce", "--problem", &sample("c3.json"), "--csv", "x.csv"]), 2);
    assert_eq!(code(&["derive-determining", "--problem", &c1, "--reference"]), 2);
}

#[test]
fn help_and_version_exit_0() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("paper-suite"));
    let out = run(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("quasilin "));
}

fn text_verdicts(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter(|l| l.starts_with("PASS ") || l.starts_with("FAIL "))
        .map(|l| {
            let (status, rest) = l.split_once(' ').unwrap();
            let head = rest.split(" [").next().unwrap();
            (status.to_string(), head.to_string())
        })
        .collect()
}

fn json_verdicts(doc: &Value) -> Vec<(String, String)> {
    doc["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| {
            let name = v["name"].as_str().unwrap();
            let head = match v["check_id"].as_str() {
                Some(id) => format!("{} {}", id, name),
                None => name.to_string(),
            };
            (v["status"].as_str().unwrap().to_string(), head)
        })
        .collect()
}

fn command_matrix() -> Vec<Vec<String>> {
    let s = sample;
    let oracle = common::crate_dir().join("data/paper_oracle.json").to_str().unwrap().to_string();
    let rows: Vec<Vec<&str>> = vec![
        vec!["derive-determining", "--problem", "@abstract.json", "--reference"],
        vec!["derive-determining", "--problem", "@c1.json"],
        vec!["check-symmetry", "--problem", "@c2.json", "--generator", "@c2_x4.json"],
        vec!["check-symmetry", "--problem", "@w0.json", "--generator", "@w0_potential.json"],
        vec!["classify", "--generator", "@w0_potential.json"],
        vec!["solve-ansatz", "--problem", "@w0.json", "--basis", "@w0_potential.json", "@time_translation.json"],
        vec!["derive-noether", "--problem", "@c2.json"],
        vec!["build-conserved", "--problem", "@c1.json", "--alpha", "x", "--gamma", "exp(x)"],
        vec!["build-conserved", "--problem", "@c1.json", "--alpha", "x^2"],
        vec!["check-conservation", "--problem", "@c1.json", "--conserved", "@c1_conserved.json"],
        vec![
            "check-solution",
            "--problem",
            "@c2.json",
            "--solution",
            "@c2_solution.json",
            "--generator",
            "@c2_x4.json",
        ],
        vec!["reduce", "--problem", "@c3.json", "--integrate", "0", "1", "0.01", "2", "-1"],
        vec!["paper-suite", "--oracle", "ORACLE"],
    ];
    rows.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|a| match a.strip_prefix('@') {
                    Some(f) => s(f),
                    None if a == "ORACLE" => oracle.clone(),
                    None => a.to_string(),
                })
                .collect()
        })
        .collect()
}

#[test]
fn text_and_json_agree_and_json_validates() {
    let schema = common::schema();
    for args in command_matrix() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let text = run(&args);
        let (jcode, doc) = json(&args);
        assert_eq!(text.status.code(), Some(jcode), "{:?}", args);
        assert!(jcode == 0 || jcode == 1, "{:?}", args);
        validate(&schema, &doc).unwrap_or_else(|e| panic!("{:?}: {}", args, e));
        common::tallies_match(&doc).unwrap();
        let t = text_verdicts(&String::from_utf8_lossy(&text.stdout));
        assert_eq!(t, json_verdicts(&doc), "{:?}", args);
    }
}

#[test]
fn json_reports_are_deterministic() {
    for args in command_matrix() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(json(&args).1, json(&args).1, "{:?}", args);
    }
}

fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>, std::time::SystemTime)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let m = fs::metadata(&p).unwrap().modified().unwrap();
            (p.clone(), fs::read(&p).unwrap(), m)
        })
        .collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

#[test]
fn inputs_are_not_modified() {
    let dir = tempfile::tempdir().unwrap();
    let src = common::crate_dir().join("data/samples");
    for e in fs::read_dir(&src).unwrap() {
        let p = e.unwrap().path();
        fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    let d = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let before = snapshot(dir.path());
    for args in command_matrix() {
        let args: Vec<String> =
            args.into_iter().map(|a| a.replace(src.to_str().unwrap(), dir.path().to_str().unwrap())).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        run(&args);
    }
    run(&["check-solution", "--problem", &d("c1.json"), "--solution", &d("c1_solution.json")]);
    assert_eq!(snapshot(dir.path()), before);
}

#[test]
fn reduce_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("run.csv");
    let out = run(&[
        "reduce",
        "--problem",
        &sample("c3.json"),
        "--integrate",
        "0",
        "1",
        "0.1",
        "2",
        "-1",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["x", "F", "F'", "residual"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 11);
    for (k, row) in rows.iter().enumerate() {
        let x: f64 = row[0].parse().unwrap();
        let f: f64 = row[1].parse().unwrap();
        assert!((x - k as f64 * 0.1).abs() < 1e-12);
        assert!((f - (2.0 - x)).abs() < 1e-10);
        assert_eq!(row[3].is_empty(), k == 0 || k == 10);
    }
}

#[test]
fn reduce_binds_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", r#"{"params":["a"],"f":"a","g":"1","h":"a*x"}"#);
    let p = p.to_str().unwrap();
    // F'' + a = 0 from F(0) = 0, F'(0) = 0: F = -a x^2 / 2
    let (c, doc) = json(&["reduce", "--problem", p, "--integrate", "0", "1", "0.5", "0", "0", "--param", "a=2"]);
    assert_eq!(c, 0);
    let f1 = doc["results"].as_array().unwrap().iter().find(|r| r["label"] == "F(x1)").unwrap();
    let f1: f64 = f1["value"].as_str().unwrap().parse().unwrap();
    assert!((f1 + 1.0).abs() < 1e-12, "{}", f1);
    assert_eq!(code(&["reduce", "--problem", p, "--integrate", "0", "1", "0.5", "0", "0"]), 2);
}

#[test]
fn build_conserved_reports_violated_constraints() {
    let (c, doc) = json(&["build-conserved", "--problem", &sample("c1.json"), "--alpha", "x^2"]);
    assert_eq!(c, 1);
    let v = &doc["verdicts"][0];
    assert_eq!(v["status"], "FAIL");
    assert!(!v["residuals"].as_array().unwrap().is_empty());
}
