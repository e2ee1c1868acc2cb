use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn symdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symdyn")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--json", "--no-timing"]);
    let o = symdyn(&all);
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn verify_thue_morse_relation() {
    let o = symdyn(&["qfp", "verify", &data("tm.sub"), "--seed", "interior a=0 i=5 m=4", "--radius", "10000"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("OK: T^5(φ^4(z))=z"));
}

#[test]
fn kadic_relation_and_expansion() {
    let o = symdyn(&["kadic", "--relation", "5", "4", "2", "--no-timing"]);
    assert_eq!(stdout(&o), "-1/3; digits pre= cyc=10\n");
    let o = symdyn(&["kadic", "--expand", "-1/3", "2", "--no-timing"]);
    assert_eq!(stdout(&o), "-1/3; digits pre= cyc=10\n");
    // -3/(1-2) = 3 = 11 in binary, then zeros.
    let o = symdyn(&["kadic", "--relation", "-3", "1", "2", "--no-timing"]);
    assert_eq!(stdout(&o), "3/1; digits pre=11 cyc=0\n");
}

#[test]
fn analyze_reports_letters_of_the_subshift() {
    let o = symdyn(&["analyze", &data("remark.sub"), "--no-timing"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("L¹={1,2}"), "{out}");
    assert!(out.contains("L²={11,12,21,22}"), "{out}");
    let v = json(&["analyze", &data("remark.sub")]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["letters"], serde_json::json!(["1", "2"]));
}

#[test]
fn text_reports_are_deterministic() {
    let args = ["qfp", "list", &data("tm.sub"), "--period", "2", "--dedup", "--no-timing"];
    let a = symdyn(&args);
    let b = symdyn(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("time:"));
    let timed = symdyn(&args[..6]);
    assert!(stdout(&timed).lines().last().unwrap().starts_with("time: "));
}

#[test]
fn json_reports_carry_schema_and_command() {
    let v = json(&["qfp", "show", &data("tm.sub"), "--seed", "interior a=0 i=5 m=4", "--radius", "5"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["ok"], true);
    assert_eq!(v["command"][0], "qfp");
    assert_eq!(v["result"]["relation"], "T^5(φ^4(z))=z");
    assert_eq!(v["result"]["window"], "pos=-5 01101001100");
    assert_eq!(v["result"]["address"], "-1/3");
    assert!(v.get("timing_ms").is_none());
}

#[test]
fn validation_failures_exit_with_one() {
    let o = symdyn(&["analyze", &data("missing.sub")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.sub"));
    let o = symdyn(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(1));
    let o = symdyn(&["qfp", "show", &data("tm.sub"), "--seed", "interior a=0 i=1 m=1"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&["kadic", "--expand", "1/2", "2"]);
    assert_eq!(v["ok"], false);
    assert_eq!(v["error"]["kind"], "validation");
}

#[test]
fn failed_block_law_exits_with_one_and_names_the_counterexample() {
    let o = symdyn(&["block", &data("transient.sub"), "--r", "1", "--verify", "--no-timing"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL: "));
    let o = symdyn(&["block", &data("tm.sub"), "--r", "2", "--verify", "--no-timing"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("map 01 -> 01 11"));
}

#[test]
fn kernel_exports() {
    let o = symdyn(&["kernel", &data("tm.sub"), "--seed", "interior a=0 i=5 m=4", "--export", "dot", "--no-timing"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("kernel size: "));
    assert!(out.contains("digraph"));
    let v = json(&["kernel", &data("tm.sub"), "--seed", "interior a=0 i=5 m=4", "--eval-radius", "5"]);
    // Here z_n = φ^4(0)[n + 5], the Thue-Morse prefix of length 11.
    assert_eq!(v["result"]["eval"], "pos=-5 01101001100");
}

#[test]
fn factor_push_and_fiber() {
    let o = symdyn(&[
        "factor",
        &data("tm.sub"),
        "--code",
        &data("tm_parity.code"),
        "--push",
        "interior a=0 i=5 m=4",
        "--no-timing",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("image: pos=-20 "));
    let v = json(&["factor", &data("fiber.sub"), "--fiber", "pos=0 2222222222222222"]);
    assert!(v["result"]["count"].as_u64().unwrap() > 8);
    let v = json(&["factor", &data("tm.sub"), "--code", &data("tm_parity.code"), "--push", "interior a=0 i=5 m=4", "--certify", "--radius", "40"]);
    assert_eq!(v["ok"], true);
    assert!(!v["result"]["branches"].as_array().unwrap().is_empty());
}

#[test]
fn onesided_subcommands() {
    let o = symdyn(&["onesided", "prolong", &data("tm.sub"), "--period", "2", "--offset", "0", "--prefix", "0110100110010110", "--no-timing"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("parent: qfp m=2 form=bridge"));
    let o = symdyn(&["onesided", "show", &data("tm.sub"), "--seed", "bridge b=0 a=0 m=2", "--len", "8", "--no-timing"]);
    assert!(stdout(&o).starts_with("start=0 01101001\n"));
    let v = json(&["onesided", "desub", &data("tm.sub"), "--window", "start=0 0110100110010110"]);
    assert_eq!(v["result"]["steps"][0]["pred"], "01101001");
}

#[test]
fn paper_examples_club() {
    let o = symdyn(&["paper-examples", "--only", "club", "--no-timing"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("PASS club"));
    assert!(out.contains("pre=1 cyc=0"));
    let o = symdyn(&["paper-examples", "--only", "nope"]);
    assert_eq!(o.status.code(), Some(1));
}
