use std::process::{Command, Output};

use binsum::rational::{parse_rat, rat};
use binsum::VerificationReport;
use serde_json::Value;

fn binsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binsum")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn seq_csv_rows() {
    let out = binsum(&["seq", "--m", "3", "--a", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(&out.stdout[..]);
    let headers = reader.headers().unwrap().clone();
    let value_col = headers.iter().position(|h| h == "value").unwrap();
    let values: Vec<String> = reader.records().map(|r| r.unwrap()[value_col].to_string()).collect();
    assert_eq!(values, ["1", "2", "7/4", "1"]);
}

#[test]
fn verify_remainder_identity_passes() {
    let out = binsum(&["verify", "prop41", "--a", "1:4", "--l", "0:12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"][0]["check_id"], "prop41");
    assert_eq!(v["reports"][0]["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn peak_flags_exceptional_m() {
    let out = binsum(&["peak", "--a", "1", "--m", "2:20"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let flagged: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["exceptional"] == true)
        .map(|r| r["m"].as_u64().unwrap())
        .collect();
    assert_eq!(flagged, [3, 6, 9, 12]);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["exceptional"] == true || r["matches"] == true));
}

#[test]
fn json_rationals_round_trip() {
    let out = binsum(&["dist", "--m", "3", "--a", "5/2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let pmf: Vec<_> = v["rows"].as_array().unwrap().iter().map(|r| parse_rat(r["pmf"].as_str().unwrap()).unwrap()).collect();
    let direct = binsum::distribution::pmf(3, &rat(5, 2)).unwrap().pmf;
    assert_eq!(pmf, direct);
    assert_eq!(parse_rat(v["summary"][0]["a"].as_str().unwrap()).unwrap(), rat(5, 2));

    let out = binsum(&["verify", "normalizer", "--a", "5/2", "--m", "0:6"]);
    let v = json(&out);
    let report: VerificationReport = serde_json::from_value(v["reports"][0].clone()).unwrap();
    assert!(report.passed());
    assert_eq!(report.cases(), 7);
}

#[test]
fn known_failures_are_expected() {
    let out = binsum(&["verify", "lemma35", "--a", "1", "--k", "3:5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["reports"][0]["skipped"], 1);
    assert_eq!(v["reports"][1]["check_id"], "lemma35-probe");
    assert_eq!(v["reports"][1]["passed"], true);

    let out = binsum(&["peak", "--a", "1", "--m", "12"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rows"][0]["shift"], 1);
}

#[test]
fn usage_and_scope_errors_exit_two() {
    assert_eq!(binsum(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(binsum(&["seq", "--m", "5:2"]).status.code(), Some(2));
    assert_eq!(binsum(&["seq", "--m", "60000"]).status.code(), Some(2));
    assert_eq!(binsum(&["verify", "prop31", "--a", "1", "--m", "3"]).status.code(), Some(2));
    assert_eq!(binsum(&["asym", "--a", "5/2", "--m", "100"]).status.code(), Some(2));
    assert_eq!(binsum(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_apart_from_metadata() {
    let strip = |out: &Output| {
        let mut v = json(out);
        v.as_object_mut().unwrap().remove("metadata");
        v
    };
    let args = ["verify", "chain", "--a", "1:2", "--k", "1:3"];
    assert_eq!(strip(&binsum(&args)), strip(&binsum(&args)));
}

#[test]
fn out_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rm.csv");
    let out = binsum(&["rm", "--m", "3", "--r", "1", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), "r,m,n,k,d,kd_over_n,kd_over_n_decimal");
    assert!(text.lines().nth(1).unwrap().starts_with("1,3,8,4,4,2,"));

    let out = binsum(&["pq", "--n", "2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("-a^2"), "{s}");
    assert!(s.contains("[PASS] pq-closed-forms"));
}

#[test]
fn asym_rows_use_requested_digits() {
    let out = binsum(&["asym", "--a", "1", "--m", "101,203", "--digits", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rows"][0]["limit"], "1.69256875064");
    assert_eq!(v["rows"][1]["residue"], 2);
}
