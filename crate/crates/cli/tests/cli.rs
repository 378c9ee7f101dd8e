use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conwon")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

struct Files {
    dir: TempDir,
    model: PathBuf,
    context: PathBuf,
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path
}

/// Three worlds, `p = {a, b}`, `q = {a}`, one default `{a, b}`.
fn files() -> Files {
    let dir = tempfile::tempdir().unwrap();
    let model = write(dir.path(), "model.json", &json!({"worlds": ["a", "b", "c"], "valuation": {"p": ["a", "b"], "q": ["a"]}}));
    let context = write(dir.path(), "context.json", &json!({"kind": "sequence", "sequence": [["a", "b"]]}));
    Files { dir, model, context }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_reads_model_and_context_files() {
    let f = files();
    let o = run(&["eval", "--model", s(&f.model), "--context", s(&f.context), "--world", "c", "--formula", "[p] q"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "false");
    let o = run(&["--output", "json", "eval", "--model", s(&f.model), "--context", s(&f.context), "--world", "c", "--formula", "[p] p"]);
    assert_eq!(code(&o), 0);
    let v = json_out(&o);
    assert_eq!(v["value"], true);
    assert_eq!(v["world"], "c");
}

#[test]
fn expected_reports_the_prefix() {
    let f = files();
    let o = run(&["--output", "json", "expected", "--model", s(&f.model), "--context", s(&f.context)]);
    assert_eq!(code(&o), 0);
    let v = json_out(&o);
    assert_eq!(v["expected"], json!(["a", "b"]));
    assert_eq!(v["prefix_len"], 1);
}

#[test]
fn update_output_loads_back_as_a_context() {
    let f = files();
    let o = run(&["--output", "json", "update", "--model", s(&f.model), "--context", s(&f.context), "--alpha", "q"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let updated = write(f.dir.path(), "updated.json", &json_out(&o));
    let o = run(&["--output", "json", "expected", "--model", s(&f.model), "--context", s(&updated)]);
    assert_eq!(json_out(&o)["expected"], json!(["a"]));
    // the new default settles `[p] q`
    let o = run(&["eval", "--model", s(&f.model), "--context", s(&updated), "--world", "b", "--formula", "[p] q"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn reduce_prints_a_flat_formula() {
    let o = run(&["--output", "json", "reduce", "--formula", "[p] [q] r"]);
    assert_eq!(code(&o), 0);
    let v = json_out(&o);
    assert_eq!(v["modal_depth"], 1);
    let text = v["output"].as_str().unwrap().to_string();
    let o = run(&["--output", "json", "parse", &text]);
    assert_eq!(code(&o), 0);
    let o = run(&["falsify", "--formula", &format!("([p] [q] r) <-> ({text})"), "--max-worlds", "2", "--max-context-len", "3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn falsify_and_compare_exit_codes() {
    assert_eq!(code(&run(&["falsify", "--formula", "[p] p"])), 0);
    assert_eq!(code(&run(&["falsify", "--formula", "[p] q -> [p & ~q] q"])), 1);
    assert_eq!(code(&run(&["compare-v", "--formula", "[p] q | ~[p] q", "--max-worlds", "2", "--max-context-len", "3"])), 0);
    let o = run(&["compare-v", "--formula", "[p] [q] r"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).starts_with("error:"), "{}", stderr(&o));
}

#[test]
fn bad_input_exits_with_two() {
    let f = files();
    let broken = f.dir.path().join("broken.json");
    fs::write(&broken, "{\"worlds\": [\"a\",}").unwrap();
    let o = run(&["expected", "--model", s(&broken), "--context", s(&f.context)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));

    let o = run(&["eval", "--model", s(&f.model), "--context", s(&f.context), "--world", "z", "--formula", "p"]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&run(&["eval", "--model", s(&f.model)])), 2);
    assert_eq!(code(&run(&["examples", "run", "nowhere"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn examples_are_listed() {
    let o = run(&["--output", "json", "examples", "list"]);
    assert_eq!(json_out(&o), json!(["tiger", "reagan", "nonmono", "fact16", "figure1"]));
}
