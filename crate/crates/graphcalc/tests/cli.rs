use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const FIG1: &str = r#"{"vertices":[1,2,3,4],"edges":[[1,2],[2,3],[1,3],[1,4]]}"#;
const DIAG_RECT: &str = r#"{"vertices":[1,2,3,4],"edges":[[1,2],[2,3],[3,4],[4,1],[1,3]]}"#;
const TREE: &str = r#"{"vertices":[1,2,3,4,5],"edges":[[1,2],[1,3],[3,4],[3,5]]}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphcalc")).args(args).output().unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn tangent_of_fig1() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", FIG1);
    let dot = dir.path().join("t.dot");
    let out = run(&["tangent", "--graph", arg(&g), "--dot", arg(&dot)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["vertices"], 8);
    assert_eq!(v["directed_edges"].as_array().unwrap().len(), 8);
    assert!(fs::read_to_string(dot).unwrap().contains("label=\"14\""));
}

#[test]
fn malformed_input_exits_1() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", "{\"vertices\": [1, 2], \"edges\": [[1, 2]");
    let out = run(&["tangent", "--graph", arg(&g)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    let loop_edge = write(&dir, "l.json", r#"{"vertices":[1,2],"edges":[[1,1]]}"#);
    assert_eq!(run(&["tangent", "--graph", arg(&loop_edge)]).status.code(), Some(1));
    assert_eq!(run(&["tangent", "--graph", "/nonexistent/g.json"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn boundary_of_triangle() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", FIG1);
    let h = write(&dir, "h.json", r#"{"vertices":[1,2,3]}"#);
    let out = run(&["boundary", "--graph", arg(&g), "--subgraph", arg(&h)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["v_minus"], serde_json::json!([1]));
    assert_eq!(v["v_plus"], serde_json::json!([4]));
}

#[test]
fn decompose_on_a_tree_has_no_curl() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", TREE);
    let x = write(
        &dir,
        "x.json",
        r#"{"coefficients":[{"from":1,"to":2,"value":1.5},{"from":3,"to":1,"value":-2},{"from":4,"to":3,"value":0.25}]}"#,
    );
    let out = run(&["decompose", "--graph", arg(&g), "--field", arg(&x)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for c in v["curl_part"]["coefficients"].as_array().unwrap() {
        assert!(c["value"].as_f64().unwrap().abs() <= 1e-12);
    }
    assert_eq!(v["dimensions"]["curl"], 0);
}

#[test]
fn check_passes_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", DIAG_RECT);
    let args = ["check", "--graph", arg(&g), "--trials", "20", "--seed", "42"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["pass"], true);
}

#[test]
fn check_with_impossible_tolerance_exits_2() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", DIAG_RECT);
    let out = run(&["check", "--graph", arg(&g), "--suite", "hodge", "--trials", "3", "--tolerance=-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cycle_limit_exits_3() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", DIAG_RECT);
    assert_eq!(run(&["cycles", "--graph", arg(&g), "--cycle-limit", "1"]).status.code(), Some(3));
    let out = run(&["cycles", "--graph", arg(&g)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["cycles"].as_array().unwrap().len(), 3);
    assert_eq!(v["circulation_system"]["rows"], 6);
}

#[test]
fn greens_functions_verify() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", FIG1);
    let out = run(&["greens", "--graph", arg(&g)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["greens_functions"].as_array().unwrap().len(), 4);
    assert_eq!(run(&["greens", "--graph", arg(&g), "--pole", "9"]).status.code(), Some(1));
}

fn scenario(j: &str) -> String {
    format!(
        r#"{{"graph":{DIAG_RECT},
            "E0":{{"coefficients":[{{"from":1,"to":2,"value":0.5}},{{"from":3,"to":4,"value":-1}}]}},
            "B0":{{"coefficients":[{{"from":2,"to":3,"value":1}},{{"from":3,"to":2,"value":1}}]}},
            {j}
            "dt":0.01,"steps":1000,"record_every":100}}"#
    )
}

#[test]
fn maxwell_without_current_conserves() {
    let dir = TempDir::new().unwrap();
    let s = write(&dir, "s.json", &scenario(""));
    let out = run(&["maxwell", "--scenario", arg(&s)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 12);
    let report = &lines.last().unwrap()["report"];
    assert!(report["energy_drift"].as_f64().unwrap() <= 1e-8);
    assert!(report["gauss_drift"].as_f64().unwrap() <= 1e-8);
    assert!(report["magnetic_drift"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn maxwell_flags_divergent_current() {
    let dir = TempDir::new().unwrap();
    let s = write(&dir, "s.json", &scenario(r#""J":{"coefficients":[{"from":1,"to":2,"value":1}]},"#));
    let out = run(&["maxwell", "--scenario", arg(&s)]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    let report: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert!(report["report"]["current_divergence"].as_f64().unwrap() > 0.0);
    assert!(!out.stderr.is_empty());
}
