use std::fs;
use std::path::{Path, PathBuf};

use cohomod::cli::run_to_string;
use serde_json::Value;
use tempfile::TempDir;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn cohomod(args: &[&str]) -> (i32, String, String) {
    let mut full = vec!["cohomod"];
    full.extend_from_slice(args);
    run_to_string(full)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const KLEIN: &str = r#"{"p": 2, "generators": [[2,1,4,3],[3,4,1,2]]}"#;
const D8: &str = r#"{"p": 2, "generators": [[2,3,4,1],[4,3,2,1]]}"#;
const Z4: &str = r#"{"p": 2, "generators": [[2,3,4,1]]}"#;
const MICRO: &str = r#"{"p": 2, "generators": [{"name": "x", "degree": 1}, {"name": "y", "degree": 1}],
    "relations": [[{"c": 1, "m": [[0, 2]]}], [{"c": 1, "m": [[0, 1], [1, 1]]}]]}"#;
const Y: &str = r#"{"elements": [[{"c": 1, "m": [[1, 1]]}]]}"#;

#[test]
fn klein_completes() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "klein.json", KLEIN);
    let (code, out, _) = cohomod(&["cohomology", s(&g), "--json", "-"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["complete"], true);
    assert_eq!(v["N"], 3);
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn strict_inequality_needs_degree_four() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "klein.json", KLEIN);
    let (code, out, _) = cohomod(&["cohomology", s(&g), "--strict", "--json", "-"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["N"], 4);
}

#[test]
fn z4_and_d8() {
    let dir = TempDir::new().unwrap();
    let z4 = write(dir.path(), "z4.json", Z4);
    let (code, out, _) = cohomod(&["cohomology", s(&z4)]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("complete at N = 2"));
    let d8 = write(dir.path(), "d8.json", D8);
    assert_eq!(cohomod(&["cohomology", s(&d8)]).0, 0);
    let (code, out, _) = cohomod(&["cohomology", s(&d8), "--max-degree", "2"]);
    assert_eq!(code, 2);
    assert!(out.contains("incomplete"));
}

#[test]
fn json_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "d8.json", D8);
    let a = dir.path().join("a.json");
    assert_eq!(cohomod(&["cohomology", s(&g), "--json", s(&a)]).0, 0);
    let first = fs::read(&a).unwrap();
    assert_eq!(cohomod(&["cohomology", s(&g), "--json", s(&a)]).0, 0);
    assert_eq!(first, fs::read(&a).unwrap());
}

#[test]
fn analyze_micro_ring() {
    let dir = TempDir::new().unwrap();
    let ring = write(dir.path(), "micro.json", MICRO);
    let hsop = write(dir.path(), "y.json", Y);
    let (code, out, _) = cohomod(&["analyze-ring", s(&ring), s(&hsop), "--json", "-"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["measured"], serde_json::json!([1, 0]));
    assert_eq!(v["a0"], 1);
    assert_eq!(v["reg"], 1);
    assert_eq!(v["depth"], 0);
    let (code, out, _) = cohomod(&["koszul", s(&ring), s(&hsop), "--window", "6"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn dickson_subcommand() {
    let (code, out, _) = cohomod(&["dickson", "-p", "2", "-r", "2", "--json", "-"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let text = v.to_string();
    assert!(text.contains("x^2 + x*y + y^2"));
    assert!(text.contains("x^2*y + x*y^2"));
}

#[test]
fn exit_codes_for_bad_input() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(cohomod(&["cohomology", s(&missing)]).0, 64);
    let garbled = write(dir.path(), "bad.json", "{\"p\": 2, \"generators\": [[2,1]");
    assert_eq!(cohomod(&["cohomology", s(&garbled)]).0, 64);
    let unknown = write(dir.path(), "unknown.json", r#"{"p": 2, "gens": [[2,1]]}"#);
    assert_eq!(cohomod(&["cohomology", s(&unknown)]).0, 64);
    let not_p = write(dir.path(), "z2.json", r#"{"p": 3, "generators": [[2,1]]}"#);
    let (code, _, err) = cohomod(&["cohomology", s(&not_p)]);
    assert_eq!(code, 65);
    assert!(err.contains("not a 3-group"));
    assert_eq!(cohomod(&["no-such-command"]).0, 64);
    assert_eq!(cohomod(&["dickson", "-p", "4", "-r", "2"]).0, 65);
}

#[test]
fn non_parameter_is_rejected() {
    let dir = TempDir::new().unwrap();
    let ring = write(dir.path(), "micro.json", MICRO);
    let x = write(dir.path(), "x.json", r#"{"elements": [[{"c": 1, "m": [[0, 1]]}]]}"#);
    let (code, _, _) = cohomod(&["analyze-ring", s(&ring), s(&x)]);
    assert_ne!(code, 0);
}
