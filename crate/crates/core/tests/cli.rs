use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use endomorph::config::SpecConfig;
use endomorph::ktheory::{pv_assemble, AbelianGroupDescriptor, PvResult};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_endomorph")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn cfg(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

#[test]
fn bunce_deddens_text() {
    let out = run(&["iota", "z", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("[[0,1],[z,0]]"), "{}", stdout(&out));
}

#[test]
fn pv_json_round_trips() {
    for name in ["ex1-zN.cfg", "ex2-shift.cfg", "ex3-dihedral.cfg"] {
        let out = run(&["--config", &cfg(name), "--format", "json", "ktheory", "pv"]);
        assert!(out.status.success(), "{name}");
        let parsed: PvResult = serde_json::from_str(&stdout(&out)).unwrap();
        let c = SpecConfig::load(&configs().join(name)).unwrap();
        assert_eq!(parsed, pv_assemble(&c.k0, &c.k1).unwrap(), "{name}");
    }
}

#[test]
fn identify_json_round_trips() {
    let out = run(&["--config", &cfg("ex3-dihedral.cfg"), "--format", "json", "ktheory", "identify"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let d: AbelianGroupDescriptor = serde_json::from_value(v["descriptor"].clone()).unwrap();
    assert_eq!(d.to_string(), v["group"].as_str().unwrap());
    assert_eq!(d.to_string(), "Z^2 (+) Z[1/3]");
}

#[test]
fn snf_json_entries_are_exact_strings() {
    let out = run(&["--format", "json", "ktheory", "snf", "--matrix", "[[2,1,1],[0,-1,1],[0,1,-1]]"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["d"], serde_json::json!(["1", "2", "0"]));
}

#[test]
fn negative_arguments_parse() {
    let out = run(&["rseq", "-1", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_is_deterministic_and_passes() {
    let args = ["--config", &cfg("ex2-shift.cfg"), "--format", "json", "--seed", "5", "verify"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn failing_check_exits_one() {
    // the dihedral fiber census is not uniform
    let out = run(&["--config", &cfg("ex3-dihedral.cfg"), "dynamics", "psi", "1", "2"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn usage_and_config_errors_exit_two() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["--config", "/nonexistent.cfg", "verify"]).status.code(), Some(2));
    assert_eq!(run(&["decompose", "not-a-number", "2"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "[group]\nfamily = \"integer\"\nmultiplier = 2\n\n[ktheory]\nk0 = [[1, 2]]\n").unwrap();
    let out = run(&["--config", bad.to_str().unwrap(), "ktheory", "pv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 6"), "{}", String::from_utf8_lossy(&out.stderr));
}
