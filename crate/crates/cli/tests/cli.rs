use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(rel: &str) -> String {
    format!("{}/../../data/{rel}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcluster")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn write_quiver(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn mutate_reproduces_golden_a2() {
    let out = run(&["mutate", "--quiver", &data("quivers/a2.quiver"), "--word", "1,2,1,2,1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["schema"], "qcs-report/1");
    assert_eq!(report["seed"], 0);
    let golden: Value = serde_json::from_str(&std::fs::read_to_string(data("golden/a2.json")).unwrap()).unwrap();
    for entry in golden["entries"].as_array().unwrap() {
        let pos = entry["position"].as_u64().unwrap() as usize;
        let idx = entry["index"].as_u64().unwrap() as usize;
        assert_eq!(report["seeds"][pos]["variables"][idx - 1]["terms"], entry["variable"]);
    }
}

#[test]
fn mutate_empty_word_reports_initial_seed() {
    let report = json(&run(&["mutate", "--quiver", &data("quivers/a2.quiver")]));
    assert_eq!(report["seeds"].as_array().unwrap().len(), 1);
    assert_eq!(report["seeds"][0]["variables"][0]["g_vector"], serde_json::json!([1, 0, 0, 0]));
}

#[test]
fn index_zero_is_a_usage_error() {
    let out = run(&["mutate", "--quiver", &data("quivers/a2.quiver"), "--word", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("index 0"));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let q = write_quiver(&dir, "bad.quiver", "vertices 2\narrow 1 5\n");
    let out = run(&["mutate", "--quiver", q.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn verify_a2_walk_matches() {
    let out = run(&["verify", "--quiver", &data("quivers/a2.quiver"), "--word", "1,2,1,2,1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["all_match"], true);
    let vars = report["variables"].as_array().unwrap();
    assert_eq!(vars.len(), 5);
    assert!(vars.iter().all(|v| v["verdict"] == "match"));
}

#[test]
fn verify_refuses_cyclic_principal_part() {
    let dir = tempfile::tempdir().unwrap();
    let q = write_quiver(&dir, "cyc.quiver", "vertices 3\narrow 1 2\narrow 2 3\narrow 3 1\n");
    let out = run(&["verify", "--quiver", q.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("principal part not acyclic"));
}

#[test]
fn reproduce_tables() {
    for table in ["a2", "e6"] {
        let out = run(&["reproduce", "--table", table]);
        assert_eq!(out.status.code(), Some(0), "{table}: {}", String::from_utf8_lossy(&out.stderr));
        let report = json(&out);
        assert_eq!(report["all_match"], true);
        assert!(report["golden"].as_array().unwrap().iter().all(|g| g["variable_match"] == true));
    }
}

#[test]
fn count_one_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let q = write_quiver(&dir, "one.quiver", "vertices 1\n");
    let q = q.to_str().unwrap();
    let report = json(&run(&["count", "--quiver", q, "--dims", "2", "--e", "1"]));
    assert_eq!(report["result"]["polynomial"]["polynomial"], serde_json::json!([1, 1]));
    assert_eq!(report["result"]["polynomial"]["euler_characteristic"], 2);
    let empty = json(&run(&["count", "--quiver", q, "--dims", "2", "--e", "3"]));
    assert_eq!(empty["result"]["polynomial"]["polynomial"], serde_json::json!([]));
    let samples = empty["result"]["polynomial"]["samples"].as_array().unwrap();
    assert!(samples.iter().all(|s| s["count"] == 0));
}

#[test]
fn count_refute_mode() {
    let q = data("quivers/kronecker4.quiver");
    let out = run(&["count", "--quiver", &q, "--dims", "3,4", "--e", "2,1", "--refute"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["result"]["refutation"]["verdict"], "refutation at budget");
    assert!(report["result"]["refutation"]["genericity"].as_str().unwrap().starts_with("heuristic"));
}

#[test]
fn non_rigid_count_without_refute_fails() {
    let q = data("quivers/kronecker4.quiver");
    let out = run(&["count", "--quiver", &q, "--dims", "3,4", "--e", "1,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no rigid representation"));
}

#[test]
fn ceiling_exit_status() {
    let q = data("quivers/kronecker4.quiver");
    let out = run(&["count", "--quiver", &q, "--dims", "3,4", "--e", "2,1", "--refute", "--ceiling", "5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let q = data("quivers/a2.quiver");
    let base = ["verify", "--quiver", q.as_str(), "--word", "1,2,1", "--seed", "7"];
    let out = run(&[&base[..], &["--out", a.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    run(&[&base[..], &["--out", b.to_str().unwrap(), "--jobs", "1"]].concat());
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let report: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["seed"], 7);
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = run(&["mutate", "--quiver", "/nonexistent/q.quiver"]);
    assert_eq!(out.status.code(), Some(2));
}
