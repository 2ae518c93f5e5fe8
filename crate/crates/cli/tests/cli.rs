//! End-to-end behavior of the binary: exit codes, output routing, and the
//! documented console listings.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fano-scrolls"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fano-scrolls"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn bad_configurations_exit_with_code_2() {
    let cases: &[&[&str]] = &[
        &["classify", "--bound", "9"],
        &["classify", "--scan-prime", "100"],
        &["classify", "--scan-prime", "1"],
        &["classify", "--workers", "0"],
        &["germ", "7", "5", "--point", "2:1"],
        &["germ", "2", "2", "--scan-prime", "60"],
        &["basis", "2", "2", "0", "--class", "1"],
        &["basis", "2", "2", "0", "--class", "1,0", "--invariant", "--involution", "+,-"],
        &["basis", "1", "2", "0", "--class", "1,0"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "args {args:?}: stderr {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty(), "args {args:?}: silent failure");
    }
}

#[test]
fn classify_writes_where_asked_and_respects_the_outdir_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_env(
        &["classify", "--bound", "10", "--output", "report.json", "--research"],
        "FANO_SCROLLS_OUTDIR",
        dir.path().to_str().unwrap(),
    );
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(doc["matches_reference"], serde_json::Value::Bool(true));
    assert_eq!(doc["config"]["bound"], 10);
    assert_eq!(
        doc["classification"]["accepted"].as_array().unwrap().len(),
        11
    );
    assert!(fano_scrolls_cli::validate_classification_json(&written).is_ok());
}

#[test]
fn classify_markdown_renders_the_table_and_workers_flag_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.md");
    let out = run(&[
        "classify",
        "--bound",
        "10",
        "--format",
        "markdown",
        "--workers",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("| d1 | d2 | d3 | -K^3 | genus | model |"));
    assert!(text.contains("matches reference: true"));
    assert!(text.contains("(2,1,1,8)"));
    assert!(text.contains("- excluded: true"));
}

#[test]
fn basis_lists_the_documented_rows() {
    let out = run(&["basis", "8", "6", "0", "--class", "4,-24", "--invariant"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("system: |4M-24L| on F(8,6,0)"));
    for lead in ["x0^3 x2", "x1^4", "t0^8 x0^4", "t1^8 x0^4"] {
        assert!(text.lines().any(|l| l == lead), "missing {lead}");
    }

    let out = run(&["basis", "2", "2", "0", "--class", "1,0"]);
    let text = stdout_of(&out);
    assert!(text.contains("h0: 7"));
    assert_eq!(text.lines().count(), 2 + 7, "header, count, 7 monomials");

    let out = run(&["basis", "1", "1", "1", "--class", "0,0"]);
    let text = stdout_of(&out);
    assert!(text.contains("h0: 1"));
    assert!(text.lines().any(|l| l == "1"), "the constant section");
}

#[test]
fn basis_parity_parts_partition_the_basis_under_an_explicit_pattern() {
    let base: Vec<String> = stdout_of(&run(&["basis", "2", "2", "0", "--class", "1,0"]))
        .lines()
        .skip(2)
        .map(str::to_string)
        .collect();
    let pattern = "+,-,+,+,-";
    let plus: Vec<String> = stdout_of(&run(&[
        "basis", "2", "2", "0", "--class", "1,0", "--invariant", "--involution", pattern,
    ]))
    .lines()
    .skip(4)
    .map(str::to_string)
    .collect();
    let minus: Vec<String> = stdout_of(&run(&[
        "basis", "2", "2", "0", "--class", "1,0", "--anti-invariant", "--involution", pattern,
    ]))
    .lines()
    .skip(4)
    .map(str::to_string)
    .collect();

    let mut union = plus.clone();
    union.extend(minus.clone());
    union.sort();
    let mut full = base;
    full.sort();
    assert_eq!(union, full, "the two parts partition the basis");
    assert!(!plus.is_empty() && !minus.is_empty());
}

#[test]
fn germ_prints_the_family_and_the_symbolic_verdict() {
    let out = run(&["germ", "2", "2", "--point", "generic"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(doc["family"].as_str().unwrap().starts_with("x^2"));
    assert_eq!(doc["point"], "generic");
    assert_eq!(doc["assessment"]["cdv"]["verdict"], "cA1");
    assert_eq!(doc["assessment"]["evidence"], "SYMBOLIC");
    assert_eq!(doc["assessment"]["established"], true);
    assert_eq!(
        doc["assessment"]["cdv"]["seeds"].as_array().unwrap().len(),
        3
    );
}

#[test]
fn germ_accepts_bracketed_point_tokens() {
    let out = run(&["germ", "3", "1", "--point", "[1:0]"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["point"], "[1:0]");
    assert_eq!(doc["assessment"]["established"], true);
}
