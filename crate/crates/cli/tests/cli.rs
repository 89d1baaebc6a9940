use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn dreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dreg"))
        .args(args)
        .current_dir(data_dir())
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas/dreg-report-1.json"))
        .unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &Value) {
    let errors: Vec<String> = validator().iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{v:#}");
}

#[test]
fn compare_euler_at_origin() {
    let out = dreg(&["compare", "x*d - 5", "--point", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid(&v);
    let verdict = &v["verdicts"][0];
    assert_eq!(verdict["fuchs"], "regular");
    assert_eq!(verdict["kashiwara"], "regular");
    assert_eq!(verdict["agree"], true);
}

#[test]
fn charvar_of_the_exponential_module() {
    let out = dreg(&["charvar", "--vars", "x,y", "y*dx - 1 ; y^2*dy + x"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid(&v);
    let comps: Vec<&Value> = v["verdicts"].as_array().unwrap().iter().filter(|c| c.get("component").is_some()).collect();
    assert_eq!(comps.len(), 3);
    let kinds: Vec<&str> = comps.iter().map(|c| c["component"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["zero_section", "conormal_to_divisor", "conormal_to_point"]);
    assert_eq!(comps[1]["equation"], "y");
}

#[test]
fn airy_system_is_irregular_at_infinity() {
    let out = dreg(&["system", "--file", "airy.sys"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid(&v);
    let verdicts = v["verdicts"].as_array().unwrap();
    let inf = verdicts.iter().find(|p| p["point"] == "inf").unwrap();
    assert_eq!(inf["fuchs"], "irregular");
    assert_eq!(inf["saturation"], "exceeded_bound");
    let zero = verdicts.iter().find(|p| p["point"] == "0").unwrap();
    assert_eq!(zero["fuchs"], "regular");
    assert_eq!(verdicts.last().unwrap()["global"], "irregular");

    let text = dreg(&["--format", "text", "system", "--file", "airy.sys"]);
    let s = String::from_utf8(text.stdout).unwrap();
    assert!(s.contains("fuchs=irregular  point=inf  saturation=exceeded_bound"), "{s}");
}

#[test]
fn every_verb_emits_schema_valid_json() {
    let runs: &[&[&str]] = &[
        &["fuchs", "d^2 - x"],
        &["fuchs", "--file", "euler.op", "--point", "0"],
        &["theta", "x^2*d + 1"],
        &["newton", "--file", "exp_twist.op"],
        &["kashiwara", "x*(1 - x)*d^2 + (1 - 2*x)*d - 1/4", "--point", "1"],
        &["compare", "d^2 - x"],
        &["holonomic", "--file", "emodule.op"],
        &["polelattice", "--n", "2", "--r", "1"],
        &["polelattice", "--file", "log_curve.chart", "-N", "4"],
        &["theorem", "--file", "log_surface.chart"],
        &["theorem", "x^2*d - 1", "--s", "2"],
        &["system", "--file", "hypergeometric.sys"],
        &["system", "d^2 - x", "--point", "inf"],
        &["corpus", "airy"],
    ];
    for args in runs {
        let out = dreg(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_valid(&json(&out));
    }
}

#[test]
fn full_corpus_passes() {
    let out = dreg(&["corpus"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["verdicts"].as_array().unwrap().iter().all(|r| r["matches"] == true && r["agree"] == true));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["charvar", "--vars", "x,y", "y*dx - 1 ; y^2*dy + x"][..],
        &["system", "--file", "airy.sys"],
        &["polelattice", "--n", "3", "--r", "3", "-N", "4"],
        &["corpus"],
    ] {
        let a = dreg(args);
        let b = dreg(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn error_exit_codes() {
    // syntax error, with position
    let out = dreg(&["fuchs", "x*d +"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_valid(&v);
    assert_eq!(v["error"]["kind"], "input");
    assert!(v["error"]["message"].as_str().unwrap().contains("1:6"));
    // arity mismatch
    let out = dreg(&["charvar", "--vars", "x,y", "y*d3"]);
    assert_eq!(out.status.code(), Some(1));
    // missing file
    assert_eq!(dreg(&["system", "--file", "missing.sys"]).status.code(), Some(1));
    // S-pair budget
    let out = dreg(&["--budget", "1", "charvar", "--vars", "x,y", "y*dx - 1 ; y^2*dy + x"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "budget_exceeded");
    // unknown verb
    assert_eq!(dreg(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(dreg(&["--help"]).status.code(), Some(0));
}
