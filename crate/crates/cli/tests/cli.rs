use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qperm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qperm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_tmp(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qperm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let o = qperm(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn eval_all_ones() {
    let m = write_tmp("j2.json", r#"{"n": 2, "entries": [["1", "1"], ["1", "1"]]}"#);
    let o = qperm(&["eval", "--matrix", m.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1 + q");
    let o = qperm(&["eval", "--matrix", m.to_str().unwrap(), "--q", "-1"]);
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn hess_eval_agrees_with_eval() {
    let m = write_tmp(
        "h3.json",
        r#"{"n": 3, "entries": [["2", "q", 0], ["1/2", "1 - q", "3"], ["q^-1", "4", "5"]]}"#,
    );
    let p = m.to_str().unwrap();
    assert_eq!(
        stdout(&qperm(&["eval", "--matrix", p])),
        stdout(&qperm(&["hess-eval", "--matrix", p]))
    );
    assert_eq!(
        stdout(&qperm(&["eval", "--matrix", p, "--q", "3/2"])),
        stdout(&qperm(&["hess-eval", "--matrix", p, "--q", "3/2"]))
    );
}

#[test]
fn mixed_search_counts_and_out_file() {
    let r = json(&["mixed-search", "--n", "3"]);
    assert_eq!(r["results"]["count"], 15);
    assert_eq!(r["subcommand"], "mixed-search");
    let out = write_tmp("m2.json", "");
    let o = qperm(&["mixed-search", "--n", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(written["count"], 4);
    assert_eq!(written["components"].as_array().unwrap().len(), 4);
    assert!(written["components"][0]["M0"].is_array());
}

#[test]
fn mixed_search_is_independent_of_jobs() {
    let a = json(&["mixed-search", "--n", "4", "--jobs", "1"]);
    let b = json(&["mixed-search", "--n", "4", "--jobs", "3"]);
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["results"]["count"], 8);
}

#[test]
fn tau_convert_transposition_at_four_is_empty() {
    let r = json(&["tau-convert", "--n", "4", "--tau", "(12)"]);
    let sol = &r["results"]["solution"];
    assert_eq!(sol["status"], "empty");
    assert!(sol["certificate"]["gap"].as_i64().unwrap() != 0);
    let r = json(&["tau-convert", "--n", "4", "--tau", "[4,3,2,1]"]);
    assert_eq!(r["results"]["solution"]["status"], "converter");
}

#[test]
fn preserver_basis_and_sheet() {
    let r = json(&["preserver-basis", "--n", "4"]);
    assert_eq!(r["results"]["dimension"], 6);
    let r = json(&["sheet-solve", "--n", "2", "--theta", "1/3", "--k", "0,1"]);
    assert_eq!(r["results"]["status"], "solution");
}

#[test]
fn membership_of_the_superdiagonal() {
    let h = write_tmp("h0.json", r#"{"n": 3, "entries": [[0, 1, 0], [0, 0, 1], [0, 0, 0]]}"#);
    let r = json(&["hess-membership", "--matrix", h.to_str().unwrap()]);
    assert_eq!(r["results"]["classification"], "PlusAndMinus");
}

#[test]
fn classify2_family_ii() {
    let m = write_tmp(
        "f2.json",
        r#"{"n": 4, "entries": [[0, 0, "q", 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]}"#,
    );
    let r = json(&["classify2", "--matrix", m.to_str().unwrap()]);
    assert_eq!(r["results"]["family"], "II");
    assert_eq!(r["results"]["mu"], "0");
    let id = write_tmp(
        "id4.json",
        r#"{"n": 4, "entries": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]}"#,
    );
    let r = json(&["classify2", "--matrix", id.to_str().unwrap()]);
    assert_eq!(r["results"]["family"], "none");
}

#[test]
fn acceptance_subset() {
    let o = qperm(&["verify-paper", "--only", "2,5,13"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.matches("PASS").count(), 3);
    assert!(text.contains("3/3 passed"));
}

#[test]
fn reports_are_deterministic() {
    let a = json(&["tau-convert", "--n", "3", "--tau", "(13)", "--seed", "5"]);
    let b = json(&["tau-convert", "--n", "3", "--tau", "(13)", "--seed", "5"]);
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["inputs_digest"], b["inputs_digest"]);
}

#[test]
fn exit_codes() {
    let bad = write_tmp("bad.json", "{\"n\": 1,\n \"entries\": [[\"2 q\"]]}");
    let o = qperm(&["eval", "--matrix", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 18"));
    assert_eq!(qperm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        qperm(&["eval", "--matrix", "/nonexistent/m.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        qperm(&["tau-convert", "--n", "3", "--tau", "(14)"]).status.code(),
        Some(2)
    );
    assert_eq!(qperm(&["mixed-search", "--n", "5"]).status.code(), Some(2));
    assert_eq!(
        qperm(&["sheet-solve", "--n", "2", "--theta", "1/3", "--k", "0,1,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qperm(&["verify-paper", "--only", "99"]).status.code(), Some(2));
}
