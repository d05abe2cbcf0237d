use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosmetic")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (String, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap();
    (text, value)
}

#[test]
fn d3_of_half_surgery_on_the_standard_unknot() {
    let (_, v) = json(&["d3", "--tb", "-1", "--rot", "0", "--slope", "-1/2"]);
    assert_eq!(v["command"], "d3");
    assert_eq!(v["results"]["contact_coeff"], "1/2");
    assert_eq!(v["results"]["spectrum"], serde_json::json!(["1"]));
}

#[test]
fn d3_accepts_a_contact_coefficient_and_explicit_signs() {
    let (_, v) = json(&["d3", "--tb", "-2", "--rot", "1", "--coeff", "1"]);
    assert_eq!(v["results"]["smooth_slope"], "-1");
    let (_, w) = json(&["d3", "--tb", "-1", "--rot", "0", "--slope", "-5/2", "--signs", "-,"]);
    assert_eq!(w["results"]["table"]["entries"].as_array().unwrap().len(), 1);
    assert_eq!(w["results"]["spectrum"], serde_json::json!(["2/5"]));
}

#[test]
fn json_output_round_trips_byte_for_byte() {
    for args in [
        &["d3", "--tb", "-3", "--rot", "0", "--slope", "2"][..],
        &["cs-set", "5", "2"],
        &["unknot", "--tb", "-1", "--rot", "0", "--slope", "5/3"],
    ] {
        let (text, v) = json(args);
        let again = serde_json::to_string_pretty(&v).unwrap();
        assert_eq!(text.trim_end(), again);
    }
}

#[test]
fn cs_set_sizes() {
    let (_, v) = json(&["cs-set", "3", "1"]);
    assert_eq!(v["results"]["count"], 7);
    let (_, v) = json(&["cs-set", "2", "1", "--bound", "5"]);
    assert_eq!(v["results"]["count"], 6);
}

#[test]
fn unknot_surgery_to_a_lens_space() {
    let (_, v) = json(&["unknot", "--tb", "-1", "--rot", "0", "--slope", "5/3"]);
    let r = &v["results"];
    assert_eq!(r["tightness"], "tight");
    assert_eq!(r["regime"], "boundary");
}

#[test]
fn domain_errors_exit_with_two() {
    let cases: [&[&str]; 4] = [
        &["d3", "--tb", "-1", "--rot", "0", "--slope", "0"],
        &["d3", "--tb", "-2", "--rot", "0", "--slope", "-1"],
        &["cs-set", "3", "4"],
        &["d3", "--tb", "-1"],
    ];
    for args in cases {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_passes_and_detects_corruption() {
    let ok = run(&["verify", "--k-max", "3", "--n-max", "3"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let bad = run(&["verify", "--k-max", "3", "--n-max", "3", "--corrupt", "tbk_plus_one"]);
    assert_eq!(bad.status.code(), Some(1));
}
