use pcentral_web::{chi_f, chi_f_value, classify, classify_value, decompose_value, harmonic_decompose};
use serde_json::{json, Value};

#[test]
fn classify_returns_report_json() {
    let v = classify_value("comm", 2, 0);
    assert_eq!(v["ok"], true);
    assert_eq!(v["result"]["classification"], "NonCentral");
    assert_eq!(v["result"]["dim_lower_bound"], 3);

    let v: Value = serde_json::from_str(&classify("s4", 2, 0)).unwrap();
    assert_eq!(v["result"]["classification"], "PI");

    let v = classify_value("x1**x2", 2, 0);
    assert_eq!(v["ok"], false);
    assert_eq!(v["position"], 3);

    assert_eq!(classify_value("comm", 9, 0)["ok"], false);
}

#[test]
fn decomposition_of_plus_minus_pattern() {
    let v = decompose_value(4, "1, 1, -1, -1");
    assert_eq!(v["ok"], true);
    assert_eq!(v["reconstructs"], true);
    assert_eq!(v["result"]["support"], json!([1, 3]));
    assert_eq!(v["result"]["coefficients"][1], "1/2 - 1/2*e");

    let v: Value = serde_json::from_str(&harmonic_decompose(3, "1,2")).unwrap();
    assert_eq!(v["ok"], false);
    assert_eq!(decompose_value(4, "1,1,x,1")["ok"], false);
}

#[test]
fn chi_f_lands_on_cyclic_support() {
    let v: Value = serde_json::from_str(&chi_f("comm", 3, "1,1;1,2", 0)).unwrap();
    assert_eq!(v["ok"], true);
    assert_eq!(v["iota_sum_mod_n"], 1);
    assert_eq!(v["cyclic_spectrum"], true);
    assert_eq!(chi_f_value("comm", 3, "1,1", 0)["ok"], false);
    assert_eq!(chi_f_value("comm", 3, "1,1;1,7", 0)["ok"], false);
}
