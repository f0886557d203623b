use std::io::Write;
use std::process::{Command, Output, Stdio};

use conic::cli::{Report, EXIT_INPUT, EXIT_MISMATCH, EXIT_OK};
use serde_json::Value;

const SQUARE: &str = "1,0,0;0,1,0;-1,0,1;0,-1,1";

fn conic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conic")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_reports_square_cone() {
    let v = json(&conic(&["analyze", "--rays", SQUARE]));
    assert_eq!(v["command"], "analyze");
    assert_eq!(v["cone"]["gorenstein"], true);
    assert_eq!(v["class_group"]["free_rank"], 1);
    assert_eq!(v["lattice_points"].as_array().unwrap().len(), 3);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_conic"))
            .args(["complexes", "--all", "--rays", SQUARE])
            .env("CONIC_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("1"));
}

#[test]
fn report_round_trips() {
    for args in [
        &["analyze", "--betas", "2,1,-1,-1,-1"][..],
        &["search", "--betas", "1,-1,1,-1"],
        &["classify-1d", "--betas", "2,2,2,-3,-3"],
        &["verify", "--example", "fms710"],
    ] {
        let out = conic(args);
        let v = json(&out);
        let report: Report = serde_json::from_value(v.clone()).unwrap();
        assert_eq!(serde_json::to_value(&report).unwrap(), v, "{args:?}");
    }
}

#[test]
fn classify_and_search() {
    let v = json(&conic(&["classify-1d", "--betas", "2,1,1,-2,-2"]));
    assert_eq!(v["classification"]["verdict"], "no_nccr");
    let v = json(&conic(&["classify-1d", "--rays", SQUARE]));
    assert_eq!(v["classification"]["verdict"], "has_nccr");
    assert_eq!(v["trapezoid"], serde_json::json!({"beta_pattern": true, "lattice_trapezoid": true}));
    let v = json(&conic(&["search", "--betas", "2,1,-1,-1,-1", "--mode", "first-found"]));
    assert_eq!(v["search"]["incredulous_sets"], serde_json::json!([[[-1], [0], [1]]]));
}

#[test]
fn cone_from_stdin_and_file_output() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_conic"))
        .args(["validate", "--cone", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"rays": [[1,0,0],[0,1,0],[-1,0,1],[0,-1,1]]}"#).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(json(&out)["cone"]["num_rays"], 4);

    let path = std::env::temp_dir().join(format!("conic-cli-{}.tsv", std::process::id()));
    let out = conic(&["--tsv", "--output", path.to_str().unwrap(), "complexes", "--betas", "1,-1,1,-1"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.contains("point\tdegree\tentry\tmult"));
}

#[test]
fn exit_codes() {
    let out = conic(&["validate", "--rays", "1,1;2,2"]);
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&out.stderr).contains("input schemas"));
    assert_eq!(conic(&["frobnicate"]).status.code(), Some(EXIT_INPUT));
    assert_eq!(conic(&["--help"]).status.code(), Some(EXIT_OK));
    assert_eq!(conic(&["classify-1d", "--betas", "1,1,-1"]).status.code(), Some(EXIT_INPUT));
    assert_eq!(conic(&["verify", "--example", "fms710"]).status.code(), Some(EXIT_OK));
    assert_eq!(conic(&["verify", "--example", "hexagon"]).status.code(), Some(EXIT_MISMATCH));
    let out = Command::new(env!("CARGO_BIN_EXE_conic"))
        .args(["analyze", "--rays", SQUARE])
        .env("CONIC_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}

#[test]
fn oracle_counts_square_chambers() {
    let v = json(&conic(&["oracle", "--rays", SQUARE]));
    assert_eq!(v["oracle"]["chambers"]["classes"], 3);
    assert_eq!(v["oracle"]["expected_classes"], 3);
}
