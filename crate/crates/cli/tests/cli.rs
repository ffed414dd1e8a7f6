use std::process::Command;

use num_bigint::BigInt;
use serde_json::Value;
use tgroups::parse::{parse_element, parse_generators};
use tgroups::{Element, TriBool};

fn tg(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_tg")).args(args).output().expect("run tg");
    let text = String::from_utf8(out.stdout).expect("utf-8");
    let doc: Value = serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("bad JSON {text:?}: {e}"));
    assert_eq!(doc["schema"], "tg/1");
    assert!(doc["elapsed_ms"].is_u64());
    assert!(doc.get("precision_bits").is_some() && doc.get("evidence").is_some());
    (doc, out.status.code().expect("exit code"))
}

fn coeffs(v: &Value) -> Vec<BigInt> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|c| BigInt::from(c.as_i64().expect("small coefficient")))
        .collect()
}

fn without_elapsed(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[test]
fn certify_refutes_translates() {
    let (doc, code) = tg(&["certify", "T, T + 1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["verdict"], "refuted");
    assert_eq!(doc["witness"]["coeffs"], serde_json::json!([-1, 1]));
    assert_eq!(doc["witness"]["value"], "1");
    let gens = parse_generators("T, T + 1").unwrap();
    let m = coeffs(&doc["witness"]["coeffs"]);
    assert_eq!(Element::combination(&gens, &m).unwrap(), parse_element("1").unwrap());
}

#[test]
fn certify_unknown_exits_zero() {
    let (doc, code) = tg(&["certify", "exp(1), pi"]);
    assert_eq!(code, 0);
    assert_eq!(doc["verdict"], "unknown");
    assert_eq!(doc["no_relation_height"], 1_000_000);
    assert!(doc["evidence"].is_object());
}

#[test]
fn cyclic_pair_generator() {
    let (doc, code) = tg(&["cyclic", "1/2*T", "3/5*T"]);
    assert_eq!(code, 0);
    assert_eq!(doc["cyclic"], true);
    assert_eq!(doc["generator"], "1/10*T");
    let d = parse_element("1/10*T").unwrap();
    let k = coeffs(&doc["witness"]["multiples"]);
    assert_eq!(d.scale_int(&k[0]), parse_element("1/2*T").unwrap());
    assert_eq!(d.scale_int(&k[1]), parse_element("3/5*T").unwrap());
}

#[test]
fn classify_log_pair_is_dense() {
    let (doc, code) = tg(&["classify", "log(2), log(3)"]);
    assert_eq!(code, 0);
    assert_eq!(doc["class"], "QLike");
    assert_eq!(doc["rank"]["exact"], 2);
    assert_eq!(doc["span_dim"], 1);
    let m = coeffs(&doc["witness"]["coeffs"]);
    let x = Element::combination(&parse_generators("log(2), log(3)").unwrap(), &m).unwrap();
    assert!(matches!(x.is_zero(), TriBool::False));
}

#[test]
fn classify_gaussian_lattice() {
    let (doc, _) = tg(&["classify", "T, i*T", "--bind", "T=e"]);
    assert_eq!(doc["class"], "ZxZ");
    let lo: f64 = doc["min_norm"][0].as_str().unwrap().parse().unwrap();
    assert!((lo - std::f64::consts::E).abs() < 1e-15);
}

#[test]
fn sample_counts_box_points() {
    let (doc, code) = tg(&["sample", "T, i*T", "--bind", "T=e", "--coeff-bound", "5"]);
    assert_eq!(code, 0);
    assert_eq!(doc["count"], 121);
    let pts = doc["points"].as_array().unwrap();
    assert_eq!(pts.len(), 121);
    let p = pts.iter().find(|p| p["coeffs"] == serde_json::json!([1, -2])).unwrap();
    assert!((p["re"].as_f64().unwrap() - std::f64::consts::E).abs() < 1e-12);
    assert!((p["im"].as_f64().unwrap() + 2.0 * std::f64::consts::E).abs() < 1e-12);
}

#[test]
fn member_and_oracle_agree() {
    let (main, _) = tg(&["member", "1/2*T, 3/5*T", "1/10*T"]);
    let (brute, _) = tg(&["oracle", "member", "1/2*T, 3/5*T", "1/10*T", "--coeff-bound", "10"]);
    assert_eq!(main["verdict"], "yes");
    assert_eq!(brute["verdict"], "yes");
    let gens = parse_generators("1/2*T, 3/5*T").unwrap();
    let target = parse_element("1/10*T").unwrap();
    for doc in [&main, &brute] {
        assert_eq!(Element::combination(&gens, &coeffs(&doc["witness"]["coeffs"])).unwrap(), target);
    }
    let (no, _) = tg(&["member", "1/2*T, 3/5*T", "1/20*T"]);
    assert_eq!(no["verdict"], "no");
}

#[test]
fn small_with_scientific_eps() {
    let (doc, code) = tg(&["small", "log(2), log(3)", "--eps", "1e-4"]);
    assert_eq!(code, 0);
    let hi: f64 = doc["witness"]["abs"][1].as_str().unwrap().parse().unwrap();
    assert!(hi < 1e-4 && hi > 0.0);
}

#[test]
fn relations_reports_log_identity() {
    let (doc, _) = tg(&["relations", "log(2), log(3), log(6)"]);
    assert_eq!(doc["verdict"], "relation");
    assert_eq!(doc["witness"]["coeffs"], serde_json::json!([1, 1, -1]));
    assert_eq!(doc["witness"]["certified"], true);
}

#[test]
fn parse_errors_carry_position() {
    let (doc, code) = tg(&["certify", "T, (1 +"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "parse");
    assert_eq!(doc["error"]["line"], 1);
    assert_eq!(doc["error"]["column"], 8);
    let (doc, code) = tg(&["certify", "log(-2)"]);
    assert_eq!(code, 2);
    assert!(doc["error"]["line"].is_u64());
}

#[test]
fn exhaustion_exits_three() {
    let (doc, code) = tg(&["small", "exp(1)"]);
    assert_eq!(code, 3);
    assert_eq!(doc["error"]["kind"], "search_exhausted");
}

#[test]
fn bad_binding_is_usage_error() {
    let (_, code) = tg(&["sample", "T", "--bind", "T=gamma"]);
    assert_eq!(code, 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["classify", "exp(1), exp(2), exp(3), pi"];
    assert_eq!(without_elapsed(tg(&args).0), without_elapsed(tg(&args).0));
}
