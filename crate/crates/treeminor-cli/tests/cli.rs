//! End-to-end tests against the compiled binary.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_treeminor"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn minor_true_exits_zero() {
    let out = run(&["minor", "(())", "((()))"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("true"));
}

#[test]
fn minor_false_exits_one() {
    let out = run(&["minor", "((()))", "(())"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("false"));
}

#[test]
fn equiv_of_equal_presentations() {
    let out = run(&["equiv", "S(2)", "S(2)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("true"));
}

#[test]
fn sequence_inputs_use_the_sequence_order() {
    let out = run(&["minor", "seq(prefix:[]; cycle:[(())])", "seq(prefix:[]; cycle:[((()))])"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["minor", "seq(prefix:[]; cycle:[((()))])", "seq(prefix:[]; cycle:[(())])"]);
    assert_eq!(out.status.code(), Some(1));
    // a sequence compared against a tree is a semantic input error
    let out = run(&["minor", "seq(prefix:[]; cycle:[()])", "S(1)"]);
    assert_eq!(out.status.code(), Some(65));
}

#[test]
fn json_report_shape() {
    let out = run(&["--format", "json", "minor", "(())", "((()))"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["command"], "minor");
    assert_eq!(v["inputs"], serde_json::json!(["(())", "((()))"]));
    assert_eq!(v["verdict"], "true");
    assert!(v["certificate"].is_string());
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn out_file_holds_the_report() {
    let dir = std::env::temp_dir().join(format!("treeminor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&["--out", path.to_str().unwrap(), "order", "S(w+1)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "w+1");
    let body = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["command"], "order");
    assert_eq!(v["verdict"], "w+1");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_error_exits_64() {
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["selftest", "--only", "99"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn parse_error_exits_65() {
    let out = run(&["minor", "(()", "(())"]);
    assert_eq!(out.status.code(), Some(65));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("parse error"), "stderr was: {err}");
}

#[test]
fn resource_bound_exits_70_and_env_raises_it() {
    let out = run(&["enumerate", "--nodes", "11"]);
    assert_eq!(out.status.code(), Some(70));
    let out = bin()
        .args(["enumerate", "--nodes", "11"])
        .env("TREEMINOR_ENUM_CAP", "11")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 1842);
}

#[test]
fn enumerate_matches_the_known_counts() {
    let out = run(&["enumerate", "--nodes", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 9);
}

#[test]
fn classes_cover_relation_is_printed() {
    let out = run(&["classes", "--max-nodes", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    // 1 + 1 + 2 isomorphism classes, each its own equivalence class
    assert_eq!(text.lines().filter(|l| l.starts_with("class ")).count(), 4);
    assert!(text.contains("cover: 0 < 1"));
    // the path and the star of size 3 are incomparable, both above the path of size 2
    assert!(text.contains("cover: 1 < 2"));
    assert!(text.contains("cover: 1 < 3"));
    assert!(!text.contains("cover: 2 < 3"));
}

#[test]
fn dot_output_is_stable_across_runs() {
    let a = run(&["dot", "(()())"]);
    let b = run(&["dot", "(()())"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("digraph tree {"));
    assert_eq!(text.matches("->").count(), 2);
}

#[test]
fn dot_truncates_infinite_inputs() {
    let out = run(&["dot", "S(1)", "--spine", "3", "--depth", "1"]);
    assert_eq!(out.status.code(), Some(0));
    // a ray window of three spine nodes is a path with two edges
    assert_eq!(stdout(&out).matches("->").count(), 2);
}

#[test]
fn truncate_prints_a_finite_tree() {
    let out = run(&["truncate", "--spine", "2", "--depth", "1", "S(w)"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with('(') && text.trim_end().ends_with(')'));
}

#[test]
fn family_members_reparse_to_distinct_expressions() {
    let out = run(&["family", "--size", "3", "spine[attach](prefix:[]; cycle:[S(1)])"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    for (i, l) in lines.iter().enumerate() {
        assert!(l.starts_with("sf("), "line {i} was: {l}");
        // each member is itself valid input
        let again = run(&["order", l]);
        assert_eq!(again.status.code(), Some(0));
        assert_eq!(stdout(&again).trim(), "2");
    }
    assert_ne!(lines[0], lines[1]);
    assert_ne!(lines[1], lines[2]);
}

#[test]
fn tstar_prints_the_extracted_presentation() {
    let out = run(&["tstar", "--alpha", "3", "hairycomb(4)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "spine[attach](prefix:[]; cycle:[_])");
    // width above every node degree leaves nothing
    let out = run(&["tstar", "--alpha", "9", "hairycomb(4)"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn classify_reports_order_and_rays() {
    let out = run(&["--format", "json", "classify", "hairycomb(3)"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"]["order"], "1");
    assert_eq!(v["verdict"]["rays"], 1);
}

#[test]
fn selftest_reports_single_criteria() {
    let out = run(&["selftest", "--only", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("ok"));
    assert!(text.contains("1/1 criteria passed"));
}
