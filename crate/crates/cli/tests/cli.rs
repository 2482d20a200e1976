use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const CORPUS: &[&str] = &[
    "unit-interval",
    "unit-square",
    "unit-cube3",
    "simplex2",
    "simplex3",
    "segment-0-2",
    "rect-1x2",
    "join-tetrahedron",
    "birkhoff3",
    "hexagon",
    "point",
];

fn repo(path: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(path)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gorenstein")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json_report(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--json", "-"]);
    let text = String::from_utf8(run(&all).stdout).unwrap();
    serde_json::from_str(&text[text.find("\n{").expect("json follows the text") + 1..]).unwrap()
}

fn strings(v: &Value) -> Vec<&str> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect()
}

#[test]
fn hvector_command() {
    assert!(stdout(&["hvector", "unit-cube3"]).starts_with("h = 1 4 1\ncounts = 1 8 27 64\n"));
    assert!(stdout(&["hvector", "unit-square", "--boundary"]).contains("h_boundary = 1 2 1\n"));
    assert!(stdout(&["hvector", "point"]).starts_with("h = 1\n"));
    let square = repo("corpus/unit-square.poly");
    assert!(stdout(&["hvector", square.to_str().unwrap(), "--interior"]).contains("interior_counts = 0 1 4\n"));
}

#[test]
fn reduce_command_writes_a_polytope_file() {
    let out = stdout(&["reduce", "unit-square"]);
    let body: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body, vec!["dim 1", "lattice full", "0", "2"]);
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.poly");
    stdout(&["reduce", "birkhoff3", "-o", q.to_str().unwrap()]);
    assert!(stdout(&["hvector", q.to_str().unwrap()]).starts_with("h = 1 1 1\n"));
}

#[test]
fn triangulate_command() {
    let w = repo("corpus/unit-square.weights");
    let out = stdout(&["triangulate", "unit-square", "--weights", w.to_str().unwrap()]);
    let cells: Vec<&str> = out.lines().skip_while(|l| *l != "cells").skip(1).collect();
    assert_eq!(cells, vec!["0 1 2", "1 2 3"]);
    assert!(out.contains("# 2 cells, unimodular: yes"));
    assert!(out.contains("weight 0 assumed at (0,0) (0,1) (1,0)"));
}

#[test]
fn lift_command() {
    let w = repo("corpus/hexagon-fan.weights");
    let out = stdout(&["lift", "hexagon", "--weights", w.to_str().unwrap()]);
    let vertices: Vec<&str> = out.lines().skip_while(|l| *l != "vertices").skip(1).take_while(|l| *l != "facets").collect();
    assert_eq!(vertices.len(), 6);
    assert!(vertices.iter().any(|v| v.contains('/')));
    assert!(out.starts_with("# P': 6 vertices, 6 facets, boundary h = 1 4 1"));
}

#[test]
fn analyze_examples() {
    let r = json_report(&["analyze", "unit-square"]);
    assert_eq!(strings(&r["ehrhart"]["h_vector"]), vec!["1", "1"]);
    assert_eq!(r["gorenstein"]["gorenstein"], true);
    assert_eq!(r["gorenstein"]["certificate"]["m"], 2);

    let r = json_report(&["analyze", "birkhoff3"]);
    assert_eq!(strings(&r["ehrhart"]["h_vector"]), vec!["1", "1", "1"]);
    assert_eq!(r["gorenstein"]["certificate"]["m"], 3);
    assert_eq!(r["reduction"]["q_dim"], 2);

    let r = json_report(&["analyze", "rect-1x2"]);
    assert_eq!(r["gorenstein"]["gorenstein"], false);
    assert_eq!(r["reduction"], Value::Null);
    let stage = r["stages"].as_array().unwrap().iter().find(|s| s["name"] == "reduction").unwrap();
    assert_eq!(stage["status"], "skipped");
}

#[test]
fn reports_validate_against_the_schema() {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(repo("schema/analysis-report.schema.json")).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let w = repo("corpus/hexagon-fan.weights");
    let mut reports: Vec<Value> = CORPUS.iter().map(|n| json_report(&["analyze", n])).collect();
    reports.push(json_report(&["analyze", "hexagon", "--weights", w.to_str().unwrap(), "--timings", "--max-dilate", "4"]));
    for r in &reports {
        let errors: Vec<String> = validator.iter_errors(r).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{}: {errors:?}", r["name"]);
        assert_eq!(r["schema_version"], 1);
        if !r["lift"].is_null() {
            assert_eq!(r["lift"]["sphere_conditions"], true, "{}", r["name"]);
        }
    }
    let timed = reports.last().unwrap();
    assert!(timed["stages"][0]["elapsed_ms"].is_number());
    assert_eq!(timed["ehrhart"]["counts"].as_array().unwrap().len(), 5);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [&["analyze", "join-tetrahedron", "--json", "-"][..], &["lift", "unit-cube3"][..]] {
        assert_eq!(run(args).stdout, run(args).stdout);
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.poly");
    std::fs::write(&bad, "dim 2\n0 0\n1\n").unwrap();
    let out = run(&["hvector", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    assert_eq!(run(&["hvector", "no-such-polytope"]).status.code(), Some(2));
    assert_eq!(run(&["reduce", "rect-1x2"]).status.code(), Some(2));

    let flat = dir.path().join("flat.weights");
    std::fs::write(&flat, "0 0\n1 0\n2 0\n").unwrap();
    let out = run(&["analyze", "segment-0-2", "--weights", flat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stage triangulation failed"));
}
