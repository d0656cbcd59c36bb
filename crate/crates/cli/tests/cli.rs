use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn tatek(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tatek")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn class_values(component: &Value, term: usize) -> Vec<String> {
    component["series"]["terms"][term]["coeff"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["value"]["coeffs"][0].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn j_to_order_two() {
    let out = tatek(&["moonshine", "j", "--order", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let body = json_of(&out);
    assert_eq!(body["terms"], json!({ "-1": "1", "1": "196884" }));
}

#[test]
fn output_is_deterministic() {
    let args = ["tate", "sympow", "--torder", "3", "--qorder", "2", &data("c2_element.json")];
    let first = tatek(&args);
    let second = tatek(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn sympow_pipelines_match_on_c2() {
    let out = tatek(&["tate", "sympow", "--torder", "3", "--qorder", "2", "--via", "both", &data("c2_element.json")]);
    assert_eq!(out.status.code(), Some(0));
    let body = json_of(&out);
    assert_eq!(body["match"], json!(true));
    assert_eq!(body["coefficients"].as_array().unwrap().len(), 4);
}

#[test]
fn sympow_single_pipelines_agree() {
    let file = data("c2_element.json");
    let product = json_of(&tatek(&["tate", "sympow", "--torder", "2", "--qorder", "2", "--via", "product", &file]));
    let hecke = json_of(&tatek(&["tate", "sympow", "--torder", "2", "--qorder", "2", "--via", "hecke", &file]));
    assert_eq!(product["coefficients"], hecke["coefficients"]);
}

#[test]
fn validate_reports_sign_mismatch() {
    let ok = tatek(&["tate", "validate", &data("c2_element.json")]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = tatek(&["tate", "validate", &data("c2_sign_mismatch.json")]);
    assert_eq!(bad.status.code(), Some(1));
    let violation = &json_of(&bad)["violation"];
    assert_eq!(violation["representative"], json!(1));
    assert_eq!(violation["exponent"], json!("1/2"));
}

#[test]
fn precision_errors_exit_two() {
    let out = tatek(&["tate", "hecke", "-m", "2", "--order", "4", &data("c2_element.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("precision"));
    let out = tatek(&["tate", "sympow", "--torder", "4", "--qorder", "2", &data("c2_element.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = tatek(&["tate", "beta", "-k", "2", "--order", "4", &data("c2_element.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_exits_two() {
    let out = tatek(&["group", "info", &data("absent.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn group_info_for_s3() {
    let body = json_of(&tatek(&["group", "info", &data("s3.json")]));
    assert_eq!(body["order"], json!(6));
    assert_eq!(body["class_count"], json!(3));
    assert_eq!(body["commuting_pairs"], json!(18));
}

#[test]
fn inertia_levels_for_s3() {
    let body = json_of(&tatek(&["inertia", &data("s3.json"), "-n", "2"]));
    let levels = body["levels"].as_array().unwrap();
    assert_eq!(levels[0]["iso_classes"], json!(3));
    assert_eq!(levels[1]["iso_classes"], json!(8));
}

#[test]
fn groupoid_equivalences_verify() {
    for k in ["1", "2", "3"] {
        let out = tatek(&["gpd", "verify-ek", &data("s3.json"), "-k", k]);
        assert_eq!(out.status.code(), Some(0), "k = {k}");
    }
    let out = tatek(&["gpd", "verify-q", &data("c2.json"), "--nmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn beta_one_is_identity() {
    let input: Value = serde_json::from_str(&std::fs::read_to_string(data("c2_element.json")).unwrap()).unwrap();
    let body = json_of(&tatek(&["tate", "beta", "-k", "1", &data("c2_element.json")]));
    let components = body["result"]["components"].as_array().unwrap();
    assert_eq!(components.len(), 2);
    for (ours, theirs) in components.iter().zip(input["components"].as_array().unwrap()) {
        for t in 0..2 {
            assert_eq!(class_values(ours, t), class_values_plain(theirs, t));
        }
    }
}

fn class_values_plain(component: &Value, term: usize) -> Vec<String> {
    component["series"]["terms"][term]["coeff"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["value"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn induce_permutation_character() {
    let out = tatek(&[
        "tate",
        "induce",
        &data("c2_in_s3_element.json"),
        "--sub",
        &data("c2_in_s3.json"),
        "--amb",
        &data("s3.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let components = json_of(&out)["result"]["components"].clone();
    assert_eq!(class_values(&components[0], 0), ["3", "1", "0"]);
    assert_eq!(class_values(&components[0], 1), ["6", "0", "0"]);
    assert_eq!(components[2]["series"]["terms"], json!([]));
}

#[test]
fn induce_rejects_mismatched_subgroup() {
    let out = tatek(&[
        "tate",
        "induce",
        &data("c2_element.json"),
        "--sub",
        &data("c2_in_s3.json"),
        "--amb",
        &data("s3.json"),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn faber_and_replicability_of_j() {
    let faber = json_of(&tatek(&["moonshine", "faber", &data("j_scalar.json"), "--mmax", "2"]));
    let phi2 = &faber["polynomials"][1]["coefficients"];
    assert_eq!(phi2[0]["coeffs"][0], json!("-393768"));
    let out = tatek(&["moonshine", "replicable", &data("j_scalar.json"), "--mmax", "2", "--qorder", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["two_variable"]["verdict"], json!("pass"));
}

#[test]
fn approx_is_display_only() {
    let exact = json_of(&tatek(&["moonshine", "j", "--order", "2"]));
    assert!(!String::from_utf8_lossy(&tatek(&["moonshine", "j", "--order", "2"]).stdout).contains('.'));
    let approx = json_of(&tatek(&["--approx", "moonshine", "j", "--order", "2"]));
    assert_eq!(approx["terms"]["1"]["exact"], exact["terms"]["1"]);
    assert_eq!(approx["known_below"], exact["known_below"]);
}
