use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expcarm")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn eval_examples() {
    assert_eq!(json(&["eval", "lambda-e", "12"])["values"][0]["value"], "1");
    assert_eq!(json(&["eval", "tau", "1,3,5,5", "32"])["values"][0]["value"], "4");
    assert_eq!(json(&["eval", "lambda", "8"])["values"][0]["value"], "2");
    assert_eq!(stdout(&["eval", "phi-e", "1..4", "--format", "csv"]), "n,value\n1,1\n2,1\n3,1\n4,1\n");
}

#[test]
fn eval_errors() {
    let out = run(&["eval", "sigma", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let rec: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(rec["error"], "domain");
    assert_eq!(run(&["eval", "lambda-e", "0"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "tau", "32"]).status.code(), Some(2));
}

#[test]
fn sum_defaults_to_csv() {
    assert_eq!(stdout(&["sum", "2", "10"]), "x,value\n10,5\n");
    // agrees with adding up eval over the range
    let vals = json(&["eval", "lambda-e", "1..100"]);
    let total: u64 = vals["values"].as_array().unwrap().iter().map(|r| r["value"].as_str().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(stdout(&["sum", "lambda-e", "100", "--checkpoints", "1,10"]), format!("x,value\n1,1\n10,11\n100,{total}\n"));
    let v = json(&["sum", "lambda-e4", "1000", "--format", "json"]);
    assert_eq!(v["function"], "lambda-e4");
}

#[test]
fn verify_series_exit_codes() {
    let out = run(&["verify-series", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["v"], 6);
    for r in ["2", "3", "4"] {
        assert!(run(&["verify-series", r]).status.success());
    }
}

#[test]
fn exponent_pair_commands() {
    let w = json(&["ep", "word", "ABA"]);
    assert_eq!((w["k"].as_str(), w["l"].as_str()), (Some("269/2434"), Some("1755/2434")));
    assert_eq!(json(&["ep", "word", "B", "--seed", "trivial"])["k"], "1/2");
    assert_eq!(json(&["ep", "mu", "1/2"])["value"], "32/205");
    assert_eq!(json(&["ep", "mu", "0.6", "--depth", "3"])["value"], "1409/12170");
    let o = json(&["ep", "optimize", "--objective", "1,1,-1/2,0,0,2", "--constraint", "-1,1,-1/2"]);
    assert_eq!(o["value"], "32/205");
    assert_eq!(run(&["ep", "word", "AC"]).status.code(), Some(2));
}

#[test]
fn kratzel_command() {
    let v = json(&["kratzel", "1,3,5,5"]);
    assert_eq!(v["exponent"], "1153/6073");
    assert_eq!(json(&["kratzel", "2,3,3,4"])["exponent"], "1153/5586");
    let out = run(&["kratzel", "1,3,5,5", "--seed", "trivial"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["c1"], false);
    assert_eq!(v["formula_value"], "1/5");
}

#[test]
fn moments_commands() {
    let t = json(&["moments", "table", "1/2", "2/3", "7/8"]);
    assert_eq!(t[1]["value"], "19/2");
    assert_eq!(t[2]["value"], "98/3");
    assert!(run(&["moments", "gate-check"]).status.success());
    let p = json(&["moments", "pointwise", "0.8", "--depth", "3"]);
    assert!(p[0]["value"].as_str().unwrap().parse::<f64>().unwrap() >= 4.0);
    assert_eq!(run(&["moments", "table", "1"]).status.code(), Some(2));
}

#[test]
fn c4_table_report() {
    let v = json(&["c4"]);
    assert_eq!(v["closed_form_match"], true);
    assert_eq!(v["contour_threshold"], "1591066/12296785");
    let c = v["C"].as_f64().unwrap();
    assert!(c > 0.125 && c < 1.0 / 7.0);
}

#[test]
fn output_file_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# settings\ndepth = 3\nformat = csv\n").unwrap();
    let out = dir.path().join("out.csv");
    let c = cfg.to_str().unwrap();
    let o = out.to_str().unwrap();
    assert!(run(&["eval", "lambda-e2", "1..4", "--config", c, "--out", o]).status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "n,value\n1,1\n2,0\n3,0\n4,1\n");
    // flag beats the file
    let v = json(&["ep", "mu", "3/5", "--config", c, "--format", "json", "--depth", "2"]);
    assert_eq!(v["depth"], 2);
    std::fs::write(&cfg, "depth = 40\n").unwrap();
    assert_eq!(run(&["ep", "mu", "3/5", "--config", c]).status.code(), Some(2));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let a = run(&["sum", "3", "20000", "--per-decade", "3"]);
    let b = run(&["sum", "3", "20000", "--per-decade", "3", "--threads", "1"]);
    assert_eq!(a.stdout, b.stdout);
}
