use std::process::{Command, Output};

use serde_json::Value;

fn foxlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foxlie")).args(args).output().expect("binary runs")
}

fn foxlie_with_workers(args: &[&str], workers: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foxlie"))
        .args(args)
        .env("FOXLIE_WORKERS", workers)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--json", "-"]);
    let out = foxlie(&full);
    (out.status.code().expect("exit code"), serde_json::from_slice(&out.stdout).expect("stdout is JSON"))
}

#[test]
fn stable_surjectivity_four_two() {
    let (code, report) = json_report(&["verify", "stable-surjectivity", "--n", "4", "--k", "2"]);
    assert_eq!(code, 0);
    let coker = report["claims"].as_array().unwrap().iter().find(|c| c["claim"] == "cokernel-free").unwrap();
    assert_eq!(coker["status"], "pass");
    assert_eq!(coker["result"]["free_rank"], 10);
    assert_eq!(coker["result"]["torsion"], Value::Array(vec![]));
}

#[test]
fn dark_product_passes() {
    let (code, report) = json_report(&["verify", "dark", "--variant", "product", "--alpha-max", "5"]);
    assert_eq!(code, 0);
    assert_eq!(report["claims"][0]["claim"], "dark-product");
    assert_eq!(report["claims"][0]["status"], "pass");
}

#[test]
fn chainrule_passes() {
    let (code, report) = json_report(&["verify", "chainrule", "--n", "3", "--pairs", "200", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(report["seed"], 7);
    assert!(report["claims"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn json_is_byte_identical_across_runs_and_worker_counts() {
    let args = ["verify", "chainrule", "--n", "3", "--pairs", "50", "--seed", "11", "--json", "-"];
    let a = foxlie_with_workers(&args, "1");
    let b = foxlie_with_workers(&args, "4");
    let c = foxlie(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn json_written_to_file() {
    let path = std::env::temp_dir().join(format!("foxlie-cli-test-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = foxlie(&["verify", "dark", "--alpha-max", "3", "--beta-max", "2", "--json", p]);
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(report["suite"], "dark");
    assert_eq!(report["claims"].as_array().unwrap().len(), 2);
}

#[test]
fn invalid_parameters_exit_two() {
    for args in [
        vec!["verify", "stable-surjectivity", "--n", "7", "--k", "2"],
        vec!["verify", "p-concentration", "--p", "4"],
        vec!["verify", "stable-surjectivity", "--n", "5", "--k", "3"],
        vec!["verify", "no-such-suite"],
        vec!["fox", "x1 x9", "--n", "2"],
        vec!["johnson", "x1 x2; x2", "--n", "2"],
    ] {
        let out = foxlie(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn fox_derivatives_of_commutator() {
    let out = foxlie(&["fox", "x1 x2 x1^-1 x2^-1", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "∂/∂x1 = 1 - x1 x2 x1^-1\n∂/∂x2 = x1 - x1 x2 x1^-1 x2^-1\n");
}

#[test]
fn jacobian_of_conjugation() {
    let out = foxlie(&["fox", "--endo", "x2 x1 x2^-1; x2", "--n", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("∂f(x1)/∂x1 = x2\n"));
    assert!(text.contains("∂f(x1)/∂x2 = 1 - x2 x1 x2^-1\n"));
    assert!(text.contains("∂f(x2)/∂x1 = 0\n"));
}

#[test]
fn johnson_and_trace_of_conjugation() {
    let out = foxlie(&["johnson", "x2 x1 x2^-1; x2", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "depth: 1\nX1*⊗(-[X1,X2])\n");
    let out = foxlie(&["trace", "x2 x1 x2^-1; x2; x3", "--n", "3"]);
    assert!(stdout(&out).contains("agree: true"));
}

#[test]
fn restricted_trace_of_power_transvection() {
    let out = foxlie(&["trace", "--p", "3", "x2^3 x1; x2; x3", "--n", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "depth: 2\ntrace: 0\n");
}
