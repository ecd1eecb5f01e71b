use std::process::{Command, Output};

use serde_json::Value;

fn starline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starline")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn limit_of_reciprocal() {
    let out = starline(&["limit", "1/n"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["outcome"], "converges");
    assert_eq!(v["limit"], "0");
    assert!(v["engines"].as_array().unwrap().len() >= 3);
}

#[test]
fn witness_for_one_hundredth() {
    let out = starline(&["witness-nu", "1/n", "--L", "0", "--eps", "1/100"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#"{"nu":101}"#);
}

#[test]
fn alternating_sign_diverges_with_both_counterexamples() {
    let v = json(&starline(&["limit", "(-1)^n"]));
    assert_eq!(v["outcome"], "diverges");
    let ce = &v["counterexample"];
    assert!(!ce["bad_omega"].as_array().unwrap().is_empty());
    assert!(ce["bad_epsilon"].is_object());
}

#[test]
fn output_is_byte_identical_across_runs() {
    let cases: [&[&str]; 4] = [
        &["limit", "case(3; 0, 1, 2)"],
        &["squeeze", "-1/n", "(-1)^n/n", "1/n", "--L", "0", "--eps", "1/10"],
        &["model-check", "--k", "3"],
        &["--format", "text", "s-epsilon", "1/n", "--L", "0", "--eps", "1/7"],
    ];
    for args in cases {
        let (a, b) = (starline(args), starline(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(a.status.success(), "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(starline(&["limit"]).status.code(), Some(1));
    assert_eq!(starline(&["limit", "1/(n"]).status.code(), Some(1));
    assert_eq!(starline(&["std-part", "n"]).status.code(), Some(2));
    assert_eq!(starline(&["model-check", "--k", "9"]).status.code(), Some(2));
    let text = starline(&["--format", "text", "std-part", "n"]);
    assert_eq!(text.status.code(), Some(2));
    assert!(text.stdout.is_empty() && !text.stderr.is_empty());
}

#[test]
fn set_operations_and_measure() {
    let v = json(&starline(&["set-op", "union", "evens", "odds"]));
    assert_eq!(v["cofinite"], true);
    let v = json(&starline(&["set-op", "cofinite", "evens"]));
    assert_eq!(v["cofinite"], false);
    assert!(v["witness"].is_null());
    let v = json(&starline(&["set-op", "subset", "evens", "N"]));
    assert_eq!(v["holds"], true);
    let v = json(&starline(&["--fragment", "2:1", "measure", "odds"]));
    assert_eq!(v["measure"], 1);
}

#[test]
fn star_membership_and_compose() {
    let v = json(&starline(&["star-member", "1/n", "(0,1)"]));
    assert_eq!(v["member"], true);
    let v = json(&starline(&["star-member", "1/n", "{0}"]));
    assert_eq!(v["member"], false);
    let out = starline(&["compose", "1/n", "2*n + 1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}
