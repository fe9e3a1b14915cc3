use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn balanced(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_balanced"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn diagnostics(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("diagnostics are JSON")
}

#[test]
fn balance_on_p1_level_two() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    assert!(balanced(&["sample", "--kind", "p1", "--k", "2", "--out", "gen"], dir).status.success());
    let out = balanced(&["balance", "--sample", "gen/sample.json", "--out", "bal"], dir);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&dir.join("bal"));
    assert_eq!(r["results"]["status"], "converged");
    let expected = [1.0, 0.5, 1.0];
    let h = r["results"]["h"].as_array().unwrap();
    for (i, row) in h.iter().enumerate() {
        for (j, z) in row.as_array().unwrap().iter().enumerate() {
            let target = if i == j { expected[i] } else { 0.0 };
            assert!((z[0].as_f64().unwrap() - target).abs() < 1e-10);
            assert!(z[1].as_f64().unwrap().abs() < 1e-10);
        }
    }
    assert_eq!(r["tolerances"]["eps_bal"], 1e-12);
    assert!(dir.join("bal/residuals.csv").exists());
}

#[test]
fn missing_seed_in_config() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("g.json"), r#"{"lengths": [1], "pieces": [[1, 0]]}"#).unwrap();
    fs::write(dir.join("run.json"), r#"{"command": "chow", "toric": "g.json", "out": "res"}"#).unwrap();
    let out = balanced(&["run", "--config", "run.json"], dir);
    assert_eq!(out.status.code(), Some(2));
    let d = diagnostics(&out);
    assert_eq!(d["diagnostics"][0]["path"], "/seed");
    assert!(!dir.join("res").exists());
}

#[test]
fn chow_of_the_product_direction_is_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("g.json"), r#"{"lengths": [1], "pieces": [[1, 0]]}"#).unwrap();
    fs::write(
        dir.join("run.json"),
        r#"{"command": "chow", "toric": "g.json", "m_max": 20, "seed": 1, "out": "res"}"#,
    )
    .unwrap();
    let out = balanced(&["run", "--config", "run.json"], dir);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.join("res/weights.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("m,N_m,w_m,Chow_m"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|l| l.ends_with(",0/1")));
    assert_eq!(report(&dir.join("res"))["results"]["df"], "0/1");
}

#[test]
fn reports_are_deterministic_apart_from_timings() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    balanced(&["sample", "--kind", "random", "--sections", "3", "--seed", "5", "--out", "gen"], dir);
    let mut texts = Vec::new();
    for out in ["a", "b"] {
        let o = balanced(
            &["convexity", "--sample", "gen/sample.json", "--trials", "30", "--seed", "7", "--out", "c"],
            dir,
        );
        assert_eq!(o.status.code(), Some(0));
        let mut r = report(&dir.join("c"));
        r.as_object_mut().unwrap().remove("timings");
        texts.push((out, serde_json::to_string(&r).unwrap(), fs::read(dir.join("c/convexity.csv")).unwrap()));
    }
    assert_eq!(texts[0].1, texts[1].1);
    assert_eq!(texts[0].2, texts[1].2);
}

#[test]
fn degenerate_verdict_against_expectation() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let gen = ["sample", "--kind", "degenerate", "--sections", "3", "--hyperplane-dim", "1", "--seed", "2", "--out", "gen"];
    assert!(balanced(&gen, dir).status.success());
    let out = balanced(&["decide", "--sample", "gen/sample.json", "--expect", "minimizer", "--out", "d"], dir);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&dir.join("d"));
    assert_eq!(r["results"]["verdict"], "degenerate");
    assert!(r["results"]["certified_slope"].as_f64().unwrap() <= -1e-6);
    let out = balanced(&["decide", "--sample", "gen/sample.json", "--out", "d2"], dir);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bad_inputs_leave_no_report() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("bad.json"), r#"{"label": "x", "N": 2, "M": 1, "k": 1, "n": 1, "weights": [1], "evals": [[1, 0]]}"#)
        .unwrap();
    let out = balanced(&["balance", "--sample", "bad.json", "--out", "o"], dir);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostics(&out)["diagnostics"][0]["path"], "/sample");
    assert!(!dir.join("o/report.json").exists());

    let out = balanced(&["balance", "--sample", "bad.json", "--eps=-1"], dir);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostics(&out)["diagnostics"][0]["path"], "/eps_bal");

    let out = balanced(&["frobnicate"], dir);
    assert_eq!(out.status.code(), Some(2));
    assert!(diagnostics(&out)["diagnostics"].is_array());
}

#[test]
fn bergman_emits_curvature_table() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("p.json"), r#"{"perturbation": [6, -4], "margin": 0.5}"#).unwrap();
    let out = balanced(&["bergman", "--profile", "p.json", "--k", "8,16", "--out", "b"], dir);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&dir.join("b"));
    let ratio = r["results"]["ratios"][0].as_f64().unwrap();
    assert!((0.1..=0.8).contains(&ratio));
    let csv = fs::read_to_string(dir.join("b/curvature.csv")).unwrap();
    assert!(csv.starts_with("tau,S\n"));
}
