use std::process::{Command, Output};

use rug::Float;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lucas-series"));
    cmd.args(args).env_remove("LUCAS_PREC");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn eval_zeta_fibonacci_odd_indices() {
    let out = run(&[
        "eval-zeta",
        "--P",
        "1",
        "--Q",
        "-1",
        "--q",
        "2",
        "--r",
        "1",
        "--s",
        "2",
        "--prec",
        "128",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(v["value"]["re"]
        .as_str()
        .unwrap()
        .starts_with("1.2969300248114"));
    assert_eq!(v["value"]["im"], "0");
    assert!(v["error_bound"].as_f64().unwrap() < 1e-19);
    assert!(v["terms_used"].as_u64().unwrap() > 0);
}

#[test]
fn special_fibonacci_minus_one() {
    let out = run(&[
        "special", "--P", "1", "--Q", "-1", "--q", "2", "--r", "1", "--m", "1",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["value"], "0/1");
    assert_eq!(v["rational"], true);
    assert_eq!(v["galois_ok"], true);
}

#[test]
fn special_singular_point_is_reported() {
    let out = run(&[
        "special", "--P", "1", "--Q", "-1", "--q", "2", "--r", "1", "--m", "2",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["singular"], true);
    assert_eq!(v["value"], Value::Null);
}

#[test]
fn special_quadratic_character() {
    let out = run(&[
        "special",
        "--P",
        "2",
        "--Q",
        "-1",
        "--chars",
        "3:quadratic,3:quadratic",
        "--m",
        "1,1",
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["rational"], true);
}

#[test]
fn residue_at_origin() {
    let out = run(&["residue", "--P", "1", "--Q", "-1", "--chars", "2:0"]);
    assert!(out.status.success());
    let v = json(&out);
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let closed: f64 = v["closed_form"]["re"].as_str().unwrap().parse().unwrap();
    assert!((closed - 1.0 / (2.0 * golden.ln())).abs() < 1e-12);
    assert!(v["rel_error"].as_f64().unwrap() < 1e-8);
}

#[test]
fn poles_csv_columns() {
    let out = run(&[
        "poles",
        "--P",
        "1",
        "--Q",
        "-1",
        "--q",
        "2",
        "--r",
        "1",
        "--window=-5,1,-3,3",
        "--k-max",
        "2",
        "--n-max",
        "1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("target,inputs,value_re,value_im,bound,status")
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn characters_listing() {
    let out = run(&["characters", "--q", "5"]);
    assert!(out.status.success());
    let v = json(&out);
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 4);
    assert_eq!(list[0]["label"], "5:0");
    assert_eq!(
        list[2]["values"],
        serde_json::json!(["0", "1", "-1", "-1", "1"])
    );
}

#[test]
fn usage_error_goes_to_stderr_as_json() {
    let out = run(&["eval-zeta", "--P", "1"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(out.stdout.is_empty());
    let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["error"], "usage");
}

#[test]
fn evaluation_error_exit_code() {
    let out = run(&[
        "eval-zeta",
        "--P",
        "1",
        "--Q",
        "-1",
        "--q",
        "2",
        "--r",
        "1",
        "--s",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["error"], "pole-proximity");

    let out = run(&["eval-zeta", "--P", "1", "--Q", "0", "--s", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn precision_from_environment() {
    let out = run_env(
        &["eval-zeta", "--P", "3", "--Q", "1", "--s", "1.5"],
        &[("LUCAS_PREC", "64")],
    );
    assert!(out.status.success());
    assert_eq!(json(&out)["value"]["prec"], 64);
    let low = run_env(
        &["eval-zeta", "--P", "3", "--Q", "1", "--s", "1.5"],
        &[("LUCAS_PREC", "16")],
    );
    assert_eq!(low.status.code(), Some(64));
}

#[test]
fn output_is_identical_across_thread_counts() {
    let args = [
        "eval-L",
        "--P",
        "1",
        "--Q",
        "-1",
        "--chars",
        "5:1,5:2",
        "--s",
        "0.3+0.2i,0.8",
        "--method",
        "continued",
    ];
    let one = run_env(&args, &[("RAYON_NUM_THREADS", "1")]);
    let four = run_env(&args, &[("RAYON_NUM_THREADS", "4")]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn complex_strings_round_trip() {
    let out = run(&[
        "eval-additive",
        "--P",
        "1",
        "--Q",
        "-3",
        "--f",
        "0.6+0.8i",
        "--s",
        "1.2-0.5i",
        "--prec",
        "96",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    for part in ["re", "im"] {
        let text = v["value"][part].as_str().unwrap();
        let x = Float::with_val(96, Float::parse(text).unwrap());
        assert_eq!(lucas_dirichlet::numeric::format_float(&x), text);
    }
}

#[test]
fn verify_suites_pass() {
    let out = run(&[
        "verify",
        "--suite",
        "classical,predicate,holomorphy",
        "--max-depth",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 3);
    let table = String::from_utf8(out.stderr).unwrap();
    assert!(table.starts_with("suite"));
}

#[test]
fn verify_unknown_suite() {
    let out = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
}
