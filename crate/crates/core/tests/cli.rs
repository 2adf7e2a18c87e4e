//! End-to-end smoke tests for the `privcal` binary.

use std::path::Path;
use std::process::{Command, Output};

fn fixture(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
        .display()
        .to_string()
}

fn privcal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_privcal"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn validate_clean_exits_zero() {
    let out = privcal(&["validate", &fixture("validator/clean.bpmn")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn validate_reports_code_id_message() {
    let out = privcal(&["validate", &fixture("validator/orphan_node.bpmn")]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1);
    assert!(lines[0].starts_with("ORPHAN_NODE e2 "));
}

#[test]
fn validate_missing_file_exits_one() {
    let out = privcal(&["validate", "/nonexistent.bpmn"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error: "));
}

#[test]
fn convert_writes_module_to_stdout() {
    let out = privcal(&[
        "convert",
        &fixture("diagrams/sequence.bpmn"),
        "--config",
        &fixture("configs/sequence.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("mod PRIVACY-MODULE is\n"));
    assert!(text.contains("  eq S = "));
    assert!(text.ends_with("endm\n"));
}

#[test]
fn convert_writes_output_file() {
    let dir = std::env::temp_dir().join("privcal-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sequence.maude");
    let out = privcal(&[
        "convert",
        &fixture("diagrams/sequence.bpmn"),
        "--config",
        &fixture("configs/sequence.json"),
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("endm"));
    assert!(!dir.join("sequence.maude.tmp").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn trace_prints_counts_and_scenarios() {
    let out = privcal(&[
        "trace",
        &fixture("diagrams/conditional.bpmn"),
        "--config",
        &fixture("configs/conditional.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "[E=ok]\n1 trace(s)\n[E=no]\n1 trace(s)\n");
}

#[test]
fn trace_all_traces_lists_labels() {
    let out = privcal(&[
        "trace",
        &fixture("diagrams/message_events.bpmn"),
        "--config",
        &fixture("configs/message_events.json"),
        "--all-traces",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "trace: tau tau tau tau tau tau tau\n");
}

#[test]
fn trace_truncation_exits_two() {
    let out = privcal(&[
        "trace",
        &fixture("diagrams/subprocess_multi.bpmn"),
        "--config",
        &fixture("configs/sequence.json"),
        "--max-states",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("truncated"));
}

#[test]
fn parse_term_prints_canonical_form() {
    let dir = std::env::temp_dir().join("privcal-parse-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("term.pc");
    std::fs::write(&path, "(new z:T)0 | 0 | x!<y>.0\n").unwrap();
    let out = privcal(&["parse-term", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "x!<y>.0\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn parse_term_syntax_error_exits_one() {
    let dir = std::env::temp_dir().join("privcal-parse-err-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.pc");
    std::fs::write(&path, "x!<y>").unwrap();
    let out = privcal(&["parse-term", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
