use std::process::{Command, Output};

use serde_json::Value;

const CUBE: &str = r#"{"cells":[[[0,0,0],[0,0,1],[0,1,0],[0,1,1],[1,0,0],[1,0,1],[1,1,0],[1,1,1]]]}"#;
const CORNER_HEIGHTS: &str =
    r#"{"heights":{"000":"1","001":0,"010":0,"011":0,"100":0,"101":0,"110":0,"111":0}}"#;
const ONES: &str = r#"{"coefficients":{"000":1,"001":1,"010":1,"011":1,"100":1,"101":1,"110":1,"111":1}}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubestrata")).args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn error_kind(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).expect("JSON error on stderr");
    v["error"]["kind"].as_str().expect("kind").to_string()
}

#[test]
fn enumerate_counts() {
    assert_eq!(json_ok(&["enumerate"])["count"], 349);
    assert_eq!(json_ok(&["enumerate", "--triangulations-only"])["count"], 74);
    assert_eq!(json_ok(&["enumerate", "--up-to-symmetry"])["count"], 23);
    assert_eq!(json_ok(&["enumerate", "--up-to-symmetry", "--corner-cut-free"])["count"], 7);
}

#[test]
fn bullet_on_inline_heights() {
    let v = json_ok(&["bullet", "--heights", CORNER_HEIGHTS]);
    assert_eq!(v["subdivision"]["cells"].as_array().unwrap().len(), 1);
    assert_eq!(v["drops"][0]["apex"], "000");
    assert_eq!(v["drops"][0]["q"], "1");
    assert!(v["heights"].as_object().unwrap().values().all(|h| h == "0"));
    let s = json_ok(&["bullet", "--subdivision", CUBE]);
    assert_eq!(s["subdivision"]["cells"].as_array().unwrap().len(), 1);
}

#[test]
fn classify_triple_point() {
    let v = json_ok(&["classify", "--subdivision", CUBE, "--coefficients", ONES]);
    assert_eq!((v["components"].as_u64(), v["case"].as_str(), v["cusp"].as_str()), (Some(3), Some("III"), Some("odd2")));
}

#[test]
fn input_errors_exit_1() {
    let out = run(&["h1", "--subdivision", r#"{"cells":[[[0,0,0],[1,1,1]]]}"#]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "invalid-input");
    let out = run(&["vinberg", "--gram", "[[-1,0],[0,-1]]"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["regularity", "--subdivision", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["classify", "--subdivision", CUBE, "--coefficients", r#"{"coefficients":{"000":1}}"#]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bounds_exit_2() {
    let out = run(&["vinberg", "--lattice", "odd1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "bound-exceeded");
    // a window makes the search finite, but no finite polytope appears
    let out = run(&["vinberg", "--lattice", "odd1", "--window", "2", "--max-height", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["run"]["terminated"], false);
}

#[test]
fn vinberg_even_and_dot_export() {
    let dir = std::env::temp_dir().join(format!("cubestrata-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dot = dir.join("even.dot");
    let v = json_ok(&["vinberg", "--lattice", "even", "--dot", dot.to_str().unwrap()]);
    assert_eq!(v["run"]["accepted"].as_array().unwrap().len(), 6);
    assert_eq!(v["run"]["terminated"], true);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("graph"));
    let v = json_ok(&["vinberg", "--gram", "[[1,0,0],[0,-1,0],[0,0,-1]]", "--v0", "1,0,0"]);
    assert!(v["run"]["accepted"].as_array().is_some());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_file_matches_stdout_and_seed_is_recorded() {
    let dir = std::env::temp_dir().join(format!("cubestrata-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("inv.json");
    let a = run(&["invariants", "--seed", "7"]);
    let b = run(&["invariants", "--seed", "7", "--output", path.to_str().unwrap()]);
    assert!(a.status.success() && b.status.success());
    assert!(b.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["all_ok"], true);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn same_seed_same_bytes() {
    let a = run(&["enumerate", "--up-to-symmetry", "--seed", "3"]);
    let b = run(&["enumerate", "--up-to-symmetry", "--seed", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn h1_json_lines() {
    let out = run(&["h1", "--all"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 349);
    assert!(lines.iter().all(|l| l["h1"]["rank"] == 0 && l["reduction"] == "trivial-by-reduction"));
}

#[test]
fn atlas_and_crosscheck() {
    let a = json_ok(&["atlas"]);
    assert_eq!(a["maximal_components"], serde_json::json!([3, 3, 1]));
    let c = json_ok(&["crosscheck", "all"]);
    assert_eq!(c["counts_equal"], true);
    let s = json_ok(&["subdiagrams", "--diagram", "odd1", "--rank", "4"]);
    assert!(s.to_string().contains("A1~+A1~"));
}

#[test]
fn verify_all_passes() {
    let out = Command::new(env!("CARGO_BIN_EXE_cubestrata"))
        .args(["verify-all", "--seed", "1"])
        .env("CUBESTRATA_WORKERS", "4")
        .output()
        .unwrap();
    let lines = String::from_utf8(out.stderr).unwrap();
    assert_eq!(lines.lines().filter(|l| l.starts_with("PASS")).count(), 12, "{lines}");
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_pass"], true);
}
