use std::io::Write;
use std::process::{Command, Output};

fn bentkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bentkit")).args(args).env_remove("BENTKIT_CATALOG").output().unwrap()
}

fn with_catalog(text: &str, args: &[&str]) -> Output {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    Command::new(env!("CARGO_BIN_EXE_bentkit")).args(args).env("BENTKIT_CATALOG", file.path()).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_reports_indices() {
    let out = bentkit(&["analyze", "h10_4", "--index", "--relaxed-index", "--fp"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("ind     2"), "{text}");
    assert!(text.contains("rind    4"), "{text}");
    assert!(text.contains("dim FP  0"), "{text}");
}

#[test]
fn structured_output_is_json() {
    let out = bentkit(&["--format", "structured", "analyze", "0000", "--bent"]);
    assert_eq!(out.status.code(), Some(0));
    let value = json(&out);
    assert_eq!(value["num_vars"], 4);
    let bent = value["invariants"].as_array().unwrap().iter().find(|i| i["name"] == "bent").unwrap();
    assert_eq!(bent["value"], "false");
}

#[test]
fn anf_input() {
    let out = bentkit(&["--format", "json", "analyze", "anf:01+23", "--bent"]);
    let value = json(&out);
    let bent = value["invariants"].as_array().unwrap().iter().find(|i| i["name"] == "bent").unwrap();
    assert_eq!(bent["value"], "true");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(bentkit(&["analyze"]).status.code(), Some(2));
    assert_eq!(bentkit(&["analyze", "tt:zz@4", "--bent"]).status.code(), Some(2));
    assert_eq!(bentkit(&["analyze", "no_such_entry", "--bent"]).status.code(), Some(2));
    assert_eq!(bentkit(&["construct", "--samples", "3"]).status.code(), Some(2));
    assert_eq!(bentkit(&["construct", "--concat", "0,0,1,0", "--product-check", "Q2", "Q4"]).status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_with_three() {
    let out = bentkit(&["analyze", "h10_1", "--ms", "5", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn flats_reproduce() {
    let out = bentkit(&["verify-paper", "flats"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("all published values reproduced"));
}

#[test]
fn mismatching_catalog_exits_with_one() {
    let out = with_catalog("[f]\nn = 4\nanf = 01 + 23\nind = 1\n", &["verify-paper"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
    let out = with_catalog("[f]\nn = 4\nanf = 01 + 23\nind = 2\n", &["--format", "json", "verify-paper"]);
    assert_eq!(out.status.code(), Some(0));
    let value = json(&out);
    assert_eq!(value["passed"], true);
    assert_eq!(value["bit_order"], serde_json::Value::Null);
}

#[test]
fn unreadable_catalog_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_bentkit"))
        .args(["catalog"])
        .env("BENTKIT_CATALOG", "/nonexistent/catalog.txt")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn catalog_listing() {
    let out = bentkit(&["--format", "json", "catalog"]);
    let rows = json(&out);
    let r3 = rows.as_array().unwrap().iter().find(|r| r["name"] == "R3").unwrap();
    assert_eq!(r3["sourced"], false);
}

#[test]
fn product_check() {
    let out = bentkit(&["--format", "json", "construct", "--product-check", "h10_4", "Q2"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json(&out);
    assert_eq!(cert["verdict"], "outside_completed_class");
}

#[test]
fn concatenation_written_as_catalog_block() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("concat.txt");
    let out = bentkit(&["construct", "--concat", "0,0,1,0", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let block = std::fs::read_to_string(&path).unwrap();
    assert!(block.starts_with("[concat]\nn = 10\n"), "{block}");
    // the written block is a loadable catalog whose function equals h10_4
    let out = with_catalog(&block, &["--format", "json", "analyze", "concat", "--gamma-rank"]);
    let reference = bentkit(&["--format", "json", "analyze", "h10_4", "--gamma-rank"]);
    assert_eq!(json(&out)["anf"], json(&reference)["anf"]);
}

#[test]
fn unsourced_slot_in_recipe() {
    let out = bentkit(&["construct", "--concat", "1,0,1,0"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("R3"));
}
