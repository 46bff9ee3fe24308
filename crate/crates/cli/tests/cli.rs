use std::process::{Command, Output};

use serde_json::Value;

fn doubling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doubling")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_reports_doubling_and_best_witness() {
    let out = doubling(&["analyze", "12:0,1,5", "--no-timing"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["doubling"]["doubled"], 6);
    assert_eq!(v["witness_search"]["hypothesis_holds"], true);
    assert_eq!(v["witness_search"]["best"]["variant"], "Regular");
    assert_eq!(v["vsds"], false);
}

#[test]
fn analyze_accepts_group_and_set_flags() {
    let a = doubling(&["analyze", "12:0,3,6,9", "--no-timing"]);
    let b = doubling(&["analyze", "--group", "12", "--set", "0,3,6,9", "--no-timing"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["witness_search"]["best"]["variant"], "DenseCoset");
}

#[test]
fn tightness_example_has_no_structure() {
    let out = doubling(&["analyze", "130000:129999,0,1,10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["doubling"]["doubled"], 9);
    assert_eq!(v["doubling"]["ratio"]["num"], 9);
    assert_eq!(v["doubling"]["ratio"]["den"], 4);
    assert!(v["witness_search"]["best"].is_null());
}

#[test]
fn invalid_input_exits_with_2() {
    for args in [
        &["analyze", "12:0,1,13"][..],
        &["analyze", "12:0,1", "--group", "12", "--set", "0"],
        &["sweep", "--n-max", "30"],
        &["lemmas", "--suite", "nonexistent"],
        &["analyze", "12:0", "--const-c", "5", "--const-c0", "5"],
        &["bogus"],
    ] {
        let out = doubling(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn broken_constants_make_the_sweep_fail() {
    let out = doubling(&["sweep", "--n-max", "6", "--const-c", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!json(&out)["violations"].as_array().unwrap().is_empty());
}

#[test]
fn clean_runs_exit_0() {
    for args in [
        &["sweep", "--n-max", "12"][..],
        &["sweep", "--n-max", "12", "--mode", "aux"],
        &["lemmas", "--suite", "triple", "--n-max", "30"],
        &["phi-scan"],
    ] {
        assert_eq!(doubling(args).status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn known_lemma_counterexamples_exit_1() {
    let out = doubling(&["lemmas", "--suite", "mantel", "--no-timing"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v["violations"].as_array().unwrap().iter().any(|x| x["instance"] == "A=10:0,1,2,5"));
}

#[test]
fn no_timing_runs_are_byte_identical() {
    let args = ["lemmas", "--suite", "kneser", "--n-max", "6", "--trials", "300", "--seed", "5", "--no-timing"];
    let (a, b) = (doubling(&args), doubling(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a).get("runtime_ms").is_none());
}

#[test]
fn csv_and_text_formats() {
    let out = doubling(&["sweep", "--n-max", "8", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("kind,"));
    assert!(lines.next().unwrap().starts_with("sweep,"));

    let out = doubling(&["phi-scan", "--from", "92400", "--to", "92500", "--format", "text"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("0 violations"));
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("doubling-cli-test-{}.json", std::process::id()));
    let out = doubling(&["rectify", "4:0,1,2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["verdict"]["rectifiable"], false);
    assert!(v["verdict"]["obstruction"].is_object());
}

#[test]
fn extremal_and_bias() {
    let v = json(&doubling(&["extremal", "-n", "10", "--size", "5"]));
    assert_eq!(v["rows"][0]["min_doubled"], 5);

    let set = format!("100:{}", (0..10).map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    let v = json(&doubling(&["bias", &set, "--min-index", "50"]));
    assert_eq!(v["witness"]["coverage"], 1.0);
}
