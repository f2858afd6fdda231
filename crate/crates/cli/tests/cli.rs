use std::path::PathBuf;
use std::process::{Command, Output};

use beq_core::cumulants::CumulantSpec;
use beq_core::definetti::forward_family;
use beq_core::scalar::{int, rational};
use beq_core::CategoryId;
use serde_json::Value;

fn beq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beq")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("beq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn haar_word() {
    let out = beq(&["haar", "--category", "s", "--n", "3", "--word", "p;11,22;p"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "1/6");
}

#[test]
fn haar_verify_mode_agrees() {
    for x in ["s", "o", "h"] {
        let out = beq(&["haar", "--category", x, "--n", "3", "--word", "p;11,22,11,22;p;12,12;p", "--verify"]);
        assert_eq!(out.status.code(), Some(0), "{x}");
    }
}

#[test]
fn enumerate_h4() {
    let out = beq(&["enumerate", "--category", "h", "--k", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!([[[1, 2, 3, 4]], [[1, 2], [3, 4]]]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(beq(&["haar", "--category", "q", "--n", "2", "--word", "p"]).status.code(), Some(2));
    assert_eq!(beq(&["haar", "--category", "s", "--n", "2", "--word", "p;13;p"]).status.code(), Some(2));
    assert_eq!(beq(&["definetti", "--category", "o", "--kappa", "1:1", "--k", "2", "--n", "2"]).status.code(), Some(2));
    assert_eq!(beq(&["verify"]).status.code(), Some(2));
    assert_eq!(beq(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn cell_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_beq"))
        .args(["projection", "--category", "s", "--k", "3", "--n", "3"])
        .env("BW_MAX_CELLS", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = beq(&["projection", "--category", "s", "--k", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let m = &json(&out)["matrix"];
    assert_eq!(m[0], serde_json::json!(["1/2", "0/1", "0/1", "1/2"]));
    assert_eq!(m[1], serde_json::json!(["0/1", "1/2", "1/2", "0/1"]));
}

#[test]
fn projection_entry_and_gram() {
    let out = beq(&["projection", "--category", "s", "--k", "2", "--n", "3", "--i", "1,2", "--j", "2,1"]);
    assert_eq!(json(&out)["value"], "1/6");
    let out = beq(&["gram", "--category", "s", "--k", "2", "--n", "3"]);
    assert_eq!(json(&out)["matrix"], serde_json::json!([["3/1", "3/1"], ["3/1", "9/1"]]));
    let out = beq(&["gram", "--category", "s", "--k", "2", "--n", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(2), Some("3/1,9/1"));
}

#[test]
fn rep_check_reports_every_relation() {
    let out = beq(&["rep-check", "--category", "o", "--n", "3", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().len() >= 4);
    assert_eq!(beq(&["rep-check", "--category", "o", "--n", "3", "--k", "3"]).status.code(), Some(2));
}

#[test]
fn bernoulli_and_cumulants() {
    let out = beq(&["bernoulli", "--mu", "1", "--var", "2", "--upto", "5"]);
    assert_eq!(json(&out)["moments"], serde_json::json!(["1/1", "3/1", "5/1", "11/1", "21/1"]));
    let out = beq(&["cumulants", "--moments", "0,3,0,9", "--category", "o"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["kappa"], serde_json::json!({"2": "3/1"}));
    let out = beq(&["cumulants", "--moments", "0,1,0,2", "--category", "o"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["violations"], serde_json::json!([4]));
    let out = beq(&["cumulants", "--moments", "1,2", "--category", "o"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["violations"], serde_json::json!([1]));
}

#[test]
fn definetti_table() {
    let out = beq(&["definetti", "--category", "s", "--kappa", "1:1,2:1", "--k", "2", "--n", "2..5"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["invariance_residual"] == "0/1"));
}

#[test]
fn recover_round_trip_and_rejection() {
    let spec = CumulantSpec::new(CategoryId::S, [(1, int(1)), (2, int(2)), (3, rational(-1, 2))]);
    let family = forward_family(&spec, 3, 3).unwrap();
    let good = scratch("good.json");
    std::fs::write(&good, serde_json::to_string(&family).unwrap()).unwrap();
    let out = beq(&["definetti-recover", "--moments", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["recovered"]["kappa"], serde_json::json!({"1": "1/1", "2": "2/1", "3": "-1/2"}));

    let mut broken = family;
    broken.vectors[1].values[3] = int(7);
    let bad = scratch("bad.json");
    std::fs::write(&bad, serde_json::to_string(&broken).unwrap()).unwrap();
    let out = beq(&["definetti-recover", "--moments", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "inconsistent moments");

    let out = beq(&["definetti-recover", "--moments", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_small_grid() {
    let out = beq(&["verify", "--all", "--max-k", "3", "--max-n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 11);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--criterion", "9", "--max-k", "3", "--max-n", "3", "--seed", "9"];
    assert_eq!(beq(&args).stdout, beq(&args).stdout);
    let args = ["wein-residual", "--k", "3", "--n", "5"];
    assert_eq!(beq(&args).stdout, beq(&args).stdout);
}
