use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn qlogic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlogic")).args(args).output().expect("spawn qlogic")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn line_pair_env(dir: &tempfile::TempDir) -> String {
    let path = dir.path().join("env.json");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let json = serde_json::json!({
        "ambient": 2,
        "bindings": {
            "a": { "ambient": 2, "basis": [[[1.0, 0.0], [0.0, 0.0]]] },
            "b": { "ambient": 2, "basis": [[[h, 0.0], [h, 0.0]]] },
        }
    });
    fs::write(&path, json.to_string()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn construct_p() {
    let o = qlogic(&["construct", "P", "a", "b"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(a | !b) & b\n");
}

#[test]
fn construct_separator_emits_certificate() {
    let o = qlogic(&["construct", "separator", "2", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let stages = v["certificate"]["stages"].as_array().unwrap();
    assert_eq!(stages.len(), 2);
    assert_eq!(stages[0]["before"], serde_json::json!([2, 3]));
    assert_eq!(stages[1]["after"], serde_json::json!([0, 1]));
}

#[test]
fn bad_construct_params_exit_2() {
    assert_eq!(qlogic(&["construct", "beta", "0"]).status.code(), Some(2));
    assert_eq!(qlogic(&["construct", "separator", "3", "3"]).status.code(), Some(2));
    assert_eq!(qlogic(&["construct", "alpha", "a", "a"]).status.code(), Some(2));
    assert_eq!(qlogic(&["construct", "alpha", "a"]).status.code(), Some(2));
}

#[test]
fn eval_contradiction_and_p() {
    let dir = tempfile::tempdir().unwrap();
    let env = line_pair_env(&dir);
    let o = qlogic(&["eval", "a & !a", "--env", &env]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("dim 0 in C^2"));

    let o = qlogic(&["eval", "(a | !b) & b", "--env", &env, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], 1);
}

#[test]
fn eval_formula_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let env = line_pair_env(&dir);
    let f = dir.path().join("f.txt");
    fs::write(&f, "(a | !b) & b\n").unwrap();
    let o = qlogic(&["eval", &format!("@{}", f.display()), "--env", &env]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("dim 1 in C^2"));
}

#[test]
fn eval_errors() {
    let dir = tempfile::tempdir().unwrap();
    let env = line_pair_env(&dir);
    let o = qlogic(&["eval", "a & !c", "--env", &env]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"c\""));

    let o = qlogic(&["eval", "a & (b", "--env", &env, "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["kind"], "parse");
}

#[test]
fn dbar_alpha_in_c5() {
    let o = qlogic(&["dbar", "(b | !a) & a & !(a & b)", "5", "--trials", "2000", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["outcome"]["max_found"], 2);
}

#[test]
fn separate_is_replayable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let args = ["separate", "4", "5", "--trials", "500", "--seed", "7", "--json"];
    let first = qlogic(&args);
    assert_eq!(first.status.code(), Some(0));
    let mut with_out = args.to_vec();
    with_out.extend(["--out", out.to_str().unwrap()]);
    assert_eq!(qlogic(&with_out).status.code(), Some(0));
    assert_eq!(first.stdout, fs::read(&out).unwrap());
    let v: Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(v["witness"]["achieved"], 1);
    assert_eq!(v["zero_test"]["max_dim_seen"], 0);
}

#[test]
fn verify_all_passes() {
    let o = qlogic(&["verify", "all", "--trials", "50", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(qlogic(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(qlogic(&["dbar", "a", "2", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(qlogic(&["dbar", "a", "2", "--rank-threshold", "-1"]).status.code(), Some(2));
}
