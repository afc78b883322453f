use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn weaklp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weaklp")).args(args).output().expect("binary runs")
}

fn weaklp_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_weaklp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn norm_of_three_atoms() {
    let out = weaklp(&["norm", "--p", "2", r#"{"atoms":[3,1,1]}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["weak"].as_f64().unwrap(), 3.0);
    assert_eq!(v["quasi"].as_f64().unwrap(), 3.0);
    // 3·√2 + √2(√2 − 1) + √2(√3 − √2) = 4 + 2√3 at q = 2.
    let lq1 = v["lq1"].as_f64().unwrap();
    assert!((lq1 - (4.0 + 2.0 * 3f64.sqrt())).abs() < 1e-12, "{lq1}");
}

#[test]
fn norm_reads_stdin_and_files() {
    let out = weaklp_stdin(&["norm", "--p", "2"], r#"{"k":1,"level":1,"values":[1,0]}"#);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["weak"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-15);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    std::fs::write(&path, r#"{"atoms":[3,1,1]}"#).unwrap();
    let out = weaklp(&["norm", "--p", "2", path.to_str().unwrap()]);
    assert_eq!(json(&out)["weak"].as_f64().unwrap(), 3.0);
}

#[test]
fn verify_sandwich_passes() {
    let out = weaklp(&["verify", "--suite", "sandwich", "--p", "2", "--trials", "100", "--seed", "42"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["records"].as_array().unwrap().len(), 100);
    assert!(v["max_ratio"].as_f64().unwrap() <= 2.0);
}

#[test]
fn verify_is_reproducible_except_timing() {
    let args = ["verify", "--suite", "t_embed", "--p", "3", "--trials", "20", "--seed", "7"];
    let mut a = json(&weaklp(&args));
    let mut b = json(&weaklp(&args));
    a["wall_time_ms"] = Value::Null;
    b["wall_time_ms"] = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn verification_failure_exits_one() {
    // At coarse sizes the block-embedding constant is still rising.
    let out = weaklp(&["chain", "--p", "2", "--sizes", "2,4", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], Value::Bool(false));
}

#[test]
fn chain_report_passes_at_desk_sizes() {
    let out = weaklp(&["chain", "--p", "2", "--sizes", "2,4,6,8", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["links"].as_array().unwrap().len(), 5);
}

#[test]
fn usage_and_input_errors_exit_two() {
    let out = weaklp(&["norm", "--p", "1", r#"{"atoms":[1]}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--p"));

    let out = weaklp(&["norm", "--p", "2", r#"{"atoms":[1,"x"]}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("atoms[1]"));

    let out = weaklp(&["norm", "--p", "2", "{\"atoms\":[1,"]);
    assert_eq!(out.status.code(), Some(2));

    let out = weaklp(&["verify", "--suite", "bogus", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sandwich"));

    let out = weaklp(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    let out = weaklp(&["project-pk", "--p", "2", r#"{"atoms":[1]}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("level stack"));

    let out = weaklp(&["project-w", r#"{"atoms":[1]}"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("layout"));
}

#[test]
fn transform_outputs_round_trip() {
    let stack = weaklp(&["embed-tk", "--p", "2", r#"{"k":1,"level":2,"values":[1,-2,0.5,3]}"#]);
    assert_eq!(stack.status.code(), Some(0));
    let stack_text = String::from_utf8(stack.stdout).unwrap();

    let projected = weaklp(&["project-pk", "--p", "2", &stack_text]);
    assert_eq!(projected.status.code(), Some(0));
    // A consistent stack is fixed by the projection.
    assert_eq!(json(&projected), serde_json::from_str::<Value>(&stack_text).unwrap());

    let embedded = weaklp(&["embed-r", "--p", "2", &stack_text]);
    assert_eq!(embedded.status.code(), Some(0), "{}", stderr(&embedded));
    let embedded_text = String::from_utf8(embedded.stdout).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&embedded_text).unwrap()["layout"]["N"], 2);

    let w = weaklp(&["project-w", &embedded_text]);
    assert_eq!(w.status.code(), Some(0));
    let w_text = String::from_utf8(w.stdout).unwrap();
    // The embedded sequence is block constant, so projecting changes nothing.
    assert_eq!(serde_json::from_str::<Value>(&w_text).unwrap(), serde_json::from_str::<Value>(&embedded_text).unwrap());

    assert_eq!(weaklp(&["norm", "--p", "2", &w_text]).status.code(), Some(0));
    assert_eq!(weaklp(&["project-w", "--N", "2", &w_text]).status.code(), Some(0));
    assert_eq!(weaklp(&["project-w", "--N", "3", &w_text]).status.code(), Some(2));
}

#[test]
fn atoms_reinterpreted_as_step() {
    let out = weaklp(&["embed-tk", "--p", "2", "--k", "1", "--N", "1", r#"{"atoms":[1,2]}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["N"], 1);
    let out = weaklp(&["embed-tk", "--p", "2", r#"{"atoms":[1,2]}"#]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = weaklp(&[
        "verify", "--suite", "pairing", "--p", "1.5", "--trials", "5", "--format", "csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert!(reader.headers().unwrap().iter().any(|h| h == "margin"));
    assert_eq!(reader.records().count(), 5);
}
