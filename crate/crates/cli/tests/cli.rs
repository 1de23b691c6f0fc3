use std::process::Command;

use pcentral_cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, Value) {
    let argv = std::iter::once("pcentral").chain(args.iter().copied());
    let out = run(argv);
    let json = serde_json::from_str(&out.json).unwrap_or_else(|e| panic!("{e}: {}", out.json));
    (out.code, json)
}

#[test]
fn classify_examples() {
    let (code, v) = call(&["classify", "--poly", "x1*x2-x2*x1", "--n", "2", "--seed", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["result"]["classification"], "NonCentral");
    assert_eq!(v["result"]["dim_lower_bound"], 3);
    for key in ["command", "config", "result", "warnings", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }

    let (code, v) = call(&["classify", "--poly", "s4", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["classification"], "PI");
    assert_eq!(v["result"]["dim_lower_bound"], 0);

    let (code, v) = call(&["classify", "--poly", "c4m", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["classification"], "Central");
}

#[test]
fn parse_errors_exit_2_with_position() {
    let (code, v) = call(&["classify", "--poly", "x1**x2", "--n", "2"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["position"], 3);

    let (code, v) = call(&["verify-2pol0", "--a", "i+q", "--b", "j", "--alpha", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(call(&["classify", "--poly", "comm"]).0, 2);
    assert_eq!(call(&["classify", "--poly", "comm", "--n", "2", "--box", "0"]).0, 2);
    assert_eq!(call(&["classify", "--poly", "comm", "--n", "2", "--trials", "0"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    let (code, v) = call(&["verify-2pol0", "--a", "i", "--b", "0", "--alpha", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "usage");
    let (code, _) = call(&["classify", "--poly", "x1*x1", "--n", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn scan_units_counts() {
    let (code, v) = call(&["scan-units", "--poly", "comm", "--n", "2"]);
    assert_eq!(code, 0);
    let r = &v["result"];
    assert_eq!(r["total"], 16);
    assert_eq!(r["zero"], 6);
    assert_eq!(r["diagonal"], 2);
    assert_eq!(r["unit_multiple"], 8);
    assert_eq!(r["exhaustive"], true);

    let (code, v) = call(&["scan-units", "--poly", "c4m", "--n", "3", "--budget", "100"]);
    assert_eq!(code, 2, "{v}");
    let (code, v) = call(&[
        "scan-units",
        "--poly",
        "c4m",
        "--n",
        "3",
        "--budget",
        "100",
        "--allow-sampling",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["exhaustive"], false);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn image_dim_ranks() {
    let (code, v) = call(&["image-dim", "--poly", "comm", "--n", "3", "--trials", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["ranks"].as_array().unwrap().len(), 3);
    assert_eq!(v["result"]["dim_lower_bound"], 8);
    assert_eq!(v["result"]["theorem_bound"], Value::Null);
}

#[test]
fn power_central_reports() {
    let (code, v) = call(&["power-central", "--poly", "comm", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["order"], 2);
    let probe = &v["result"]["steps"][0];
    assert_eq!(probe["nu"], 2);
    assert_eq!(probe["result"]["verdict"], "ProbablyCentral");
    assert_eq!(
        probe["result"]["failure_bound"],
        "95367431640625/278218429446951548637196401"
    );

    let (code, v) = call(&["power-central", "--poly", "comm", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["order"], Value::Null);
    let steps = v["result"]["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 7);
    assert_eq!(steps[1]["reason"], "gcd_filter");
    assert_eq!(steps[2]["result"]["verdict"], "NotCentral");

    let (code, v) = call(&["power-central", "--poly", "comm", "--n", "3", "--nu", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"], "NotCentral");

    let (code, v) = call(&["power-central", "--poly", "c4m", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["order"], 1);
}

#[test]
fn chi_f_and_harmonic() {
    let (code, v) = call(&["chi-f", "--poly", "comm", "--n", "3", "--base", "1,1;1,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["iota_sum_mod_n"], 1);
    assert_eq!(v["result"]["cyclic_spectrum"], true);

    let (code, v) = call(&["chi-f", "--poly", "c4m", "--n", "4", "--base", "1,2;2,1;1,3;3,1"]);
    assert_eq!(code, 0);
    assert!(v["result"]["delta"].as_u64().unwrap() >= 2);

    assert_eq!(call(&["chi-f", "--poly", "comm", "--n", "3", "--base", "1,1;4,2"]).0, 2);

    let (code, v) = call(&["harmonic", "--n", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["q_identity"], true);
    assert_eq!(v["result"]["r_identity"], true);

    let (_, v) = call(&["harmonic", "--n", "4", "--diag", "1,1,-1,-1"]);
    assert_eq!(v["result"]["decomposition"]["support"], serde_json::json!([1, 3]));
}

#[test]
fn verify_2pol0_example() {
    let (code, v) = call(&["verify-2pol0", "--a", "i", "--b", "j", "--alpha", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["A"], serde_json::json!([["i", "j"], ["-3*j", "i"]]));
    assert_eq!(v["result"]["A_squared"], serde_json::json!([["2", "0"], ["0", "2"]]));
    assert_eq!(v["result"]["form"]["alpha"], "2");
}

#[test]
fn binary_output_is_deterministic_and_honours_json_out() {
    let bin = env!("CARGO_BIN_EXE_pcentral");
    let args = ["classify", "--poly", "s3", "--n", "3", "--seed", "7"];
    let a = Command::new(bin).args(args).output().unwrap();
    let b = Command::new(bin).args(args).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());

    let path = std::env::temp_dir().join(format!("pcentral-cli-test-{}.json", std::process::id()));
    let c = Command::new(bin)
        .args(args)
        .arg("--json-out")
        .arg(&path)
        .output()
        .unwrap();
    assert!(c.status.success());
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    std::fs::remove_file(&path).unwrap();

    let bad = Command::new(bin)
        .args(["classify", "--poly", "x1**x2", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
