use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

const K1: &str = "p & q\n!p & r\n!q | !r\n";
const K2: &str = "p\n!p\n!p | q\n";

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_occlogic"))
        .args(args)
        .env_remove("OCCLOGIC_BOOL_CAP")
        .env_remove("OCCLOGIC_LPM_CAP")
        .env_remove("OCCLOGIC_OCC_CAP")
        .env_remove("OCCLOGIC_RELATION_CAP")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn analyze_reports_schema_and_counts() {
    let k1 = file(K1);
    let out = run(&["analyze", "--json", "--stats", path(&k1)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "occlogic.analyze/1");
    assert_eq!(v["consistent"], false);
    assert_eq!(v["stats"]["occurrences"], 6);
    assert_eq!(v["stats"]["mirs"], 2);
    assert_eq!(v["stats"]["mcrs"], 2);
    assert_eq!(v["occurrences"][0]["id"], "p@f0#1+");
    assert_eq!(v["occurrences"][1]["label"], "q1+");
    assert_eq!(v["duality"]["passed"], true);
    assert!(v.get("timing_ms").is_none());
}

#[test]
fn analyze_human_output_lists_mirs() {
    let k1 = file(K1);
    let out = run(&["analyze", path(&k1)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("p@f0#1+"), "{text}");
}

#[test]
fn timing_is_opt_in() {
    let k1 = file(K1);
    let v = json(&run(&["--timing", "analyze", "--json", path(&k1)]));
    assert!(v["timing_ms"].is_number());
}

#[test]
fn entail_exit_codes_follow_the_verdict() {
    let k2 = file(K2);
    for (relation, query, code) in [
        ("m1", "p", 0),
        ("m2", "p", 1),
        ("mb2", "q", 0),
        ("m1", "q", 1),
        ("lpm", "q", 1),
        ("classical", "q", 0),
    ] {
        let out = run(&["entail", path(&k2), "-q", query, "-r", relation]);
        assert_eq!(out.status.code(), Some(code), "{relation} {query}");
    }
}

#[test]
fn entail_json_carries_a_witness() {
    let k2 = file(K2);
    let v = json(&run(&[
        "entail",
        path(&k2),
        "-q",
        "q",
        "-r",
        "lpm",
        "--json",
    ]));
    assert_eq!(v["schema"], "occlogic.entail/1");
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"]["kind"], "lpm_counter_model");

    let v = json(&run(&[
        "entail",
        path(&k2),
        "-q",
        "p",
        "-r",
        "m2",
        "--json",
    ]));
    assert_eq!(v["witness"]["kind"], "renaming");

    let consistent = file("p | q\n");
    let v = json(&run(&["entail", path(&consistent), "-q", "p", "--json"]));
    assert_eq!(v["witness"]["kind"], "counter_model");
    assert_eq!(v["witness"]["valuation"]["p"], false);
}

#[test]
fn duality_check_exit_codes() {
    let k1 = file(K1);
    let out = run(&["duality-check", path(&k1), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["schema"], "occlogic.duality/1");

    let k2 = file(K2);
    let out = run(&["duality-check", path(&k2), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["duality"]["mcrs_are_h_maximal"], true);
    assert_eq!(v["duality"]["mirs_are_h_minimal"], true);
    assert_eq!(v["duality"]["h_minimal_are_mirs"], false);
}

#[test]
fn compare_reproduces_the_k2_table() {
    let k2 = file(K2);
    let queries = file("p\nq\n");
    let out = run(&["compare", path(&k2), "--queries", path(&queries), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "occlogic.compare/1");
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    let row = |i: usize, r: &str| v["rows"][i]["verdicts"][r].as_bool().unwrap();
    assert_eq!(
        [row(0, "m1"), row(0, "m2"), row(0, "mb1"), row(0, "mb2")],
        [true, false, true, false]
    );
    assert_eq!(
        [row(1, "m1"), row(1, "m2"), row(1, "mb1"), row(1, "mb2")],
        [false, false, true, true]
    );
}

#[test]
fn input_errors_exit_two() {
    let bad = file("p &\n");
    let out = run(&["analyze", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    assert_eq!(
        run(&["analyze", "/nonexistent/base.txt"]).status.code(),
        Some(2)
    );
    let k2 = file(K2);
    assert_eq!(
        run(&["entail", path(&k2), "-q", "p", "-r", "m3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["entail", path(&k2), "-q", "p &"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn caps_exit_three() {
    let k1 = file(K1);
    assert_eq!(
        run(&["--occ-cap", "3", "analyze", path(&k1)]).status.code(),
        Some(3)
    );

    let out = Command::new(env!("CARGO_BIN_EXE_occlogic"))
        .args(["analyze", path(&k1)])
        .env("OCCLOGIC_OCC_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn json_output_is_deterministic() {
    let k1 = file(K1);
    let a = run(&["analyze", "--json", path(&k1)]);
    let b = run(&["analyze", "--json", path(&k1)]);
    assert_eq!(a.stdout, b.stdout);
}
