use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ion(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ion"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.ion"), "Print('x'").unwrap();
    std::fs::write(dir.path().join("open.ion"), "Print(X);End").unwrap();
    let cases: &[(&[&str], i32)] = &[
        (&["compile", "w^2+1"], 0),
        (&["compile", "w^"], 1),
        (&["compare", "1", "w"], 0),
        (&["compare", "1", "q"], 1),
        (&["run", "bad.ion"], 1),
        (&["run", "open.ion"], 1),
        (&["run", "missing.ion"], 1),
        (&["value", "bad.ion"], 1),
        (&["hydra", "(()())"], 0),
        (&["hydra", "(("], 1),
        (&["lineage", "--policy", "sideways"], 2),
        (&["run", "x.ion", "--max-steps", "0"], 2),
        (&["frobnicate"], 2),
    ];
    for (args, code) in cases {
        let o = ion(dir.path(), args);
        assert_eq!(o.status.code(), Some(*code), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn compile_run_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    assert!(ion(dir.path(), &["compile", "w", "-o", "pw.ion"]).status.success());
    assert!(dir.path().join("pw.cert").exists());

    let o = ion(dir.path(), &["run", "pw.ion", "--max-outputs", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);

    let o = ion(dir.path(), &["compare", "w*2", "w+5"]);
    assert_eq!(stdout(&o).trim(), "Greater");
}

#[test]
fn verify_enumerator_is_inconclusive_with_proven_children() {
    let dir = tempfile::tempdir().unwrap();
    ion(dir.path(), &["compile", "w", "-o", "pw.ion"]);
    let v = json(&ion(
        dir.path(),
        &["verify", "pw.ion", "--max-outputs", "10", "--depth", "12", "--json"],
    ));
    assert_eq!(v["verdict"]["kind"], "inconclusive");
    let children = v["children"].as_array().unwrap();
    assert_eq!(children.len(), 10);
    for (n, c) in children.iter().enumerate() {
        assert_eq!(c["verdict"]["kind"], "provenMember");
        assert_eq!(c["verdict"]["value"], n.to_string());
    }
}

#[test]
fn expect_checks_the_certificate() {
    let dir = tempfile::tempdir().unwrap();
    ion(dir.path(), &["compile", "w+2", "-o", "a.ion"]);
    ion(dir.path(), &["compile", "w+3", "-o", "b.ion"]);
    assert!(ion(dir.path(), &["verify", "a.ion", "--expect", "a.cert"]).status.success());
    let o = ion(dir.path(), &["verify", "a.ion", "--expect", "b.cert"]);
    assert_eq!(o.status.code(), Some(1));

    // Same program text with a trailing byte: parses, but the hash differs.
    let mut text = std::fs::read(dir.path().join("a.ion")).unwrap();
    text.push(b'\n');
    std::fs::write(dir.path().join("c.ion"), text).unwrap();
    let o = ion(dir.path(), &["verify", "c.ion", "--expect", "a.cert", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["expect"]["sha256Matches"], false);
}

#[test]
fn refuted_programs_report_their_path() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("p.ion"), "Print('End');Print('(');End").unwrap();
    let v = json(&ion(dir.path(), &["verify", "p.ion", "--json"]));
    assert_eq!(v["verdict"]["kind"], "refuted");
    assert_eq!(v["verdict"]["path"], serde_json::json!([1]));
    let v = json(&ion(dir.path(), &["value", "p.ion", "--json"]));
    assert_eq!(v["refuted"], true);
    assert_eq!(v["bound"], "0");
}

#[test]
fn value_and_hydra_json() {
    let dir = tempfile::tempdir().unwrap();
    ion(dir.path(), &["compile", "5", "-o", "five.ion"]);
    let v = json(&ion(dir.path(), &["value", "five.ion", "--json"]));
    assert_eq!(v["bound"], "5");
    assert_eq!(v["exact"], "5");

    let h = json(&ion(dir.path(), &["hydra", "((()))", "--json"]));
    assert_eq!(h["dead"], true);
    assert_eq!(h["stages"][0]["ordinal"], "w");
}

#[test]
fn lineage_log_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"founderIntelligences":["3"],"policy":"asexual","maxEvents":50}"#,
    )
    .unwrap();
    let v = json(&ion(dir.path(), &["lineage", "--config", "cfg.json", "-o", "a.jsonl", "--json"]));
    assert_eq!(v["termination"]["kind"], "sterile");
    assert_eq!(v["stats"]["totalAgents"], 4);

    let args = ["lineage", "--founder", "w", "--policy", "mixed:3", "--max-events", "30", "--seed", "5"];
    let a = ion(dir.path(), &[&args[..], &["-o", "x.jsonl"]].concat());
    let b = ion(dir.path(), &[&args[..], &["-o", "y.jsonl"]].concat());
    assert!(a.status.success() && b.status.success());
    let x = std::fs::read(dir.path().join("x.jsonl")).unwrap();
    assert_eq!(x, std::fs::read(dir.path().join("y.jsonl")).unwrap());
    assert_eq!(String::from_utf8(x).unwrap().lines().count(), 1 + 30 + 1);
}
