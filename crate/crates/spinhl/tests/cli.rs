use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn spinhl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinhl")).args(args).env_remove("SPINHL_SEED").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn asm_count_through_the_cli() {
    let out = spinhl(&[
        "eval-robbins",
        "--bottom",
        "1,2,3,4",
        "--mode",
        "enum",
        "--x",
        "1,1,1,1",
        "--u",
        "1",
        "--v",
        "1",
        "--w",
        "-1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "42");
}

#[test]
fn full_suite_passes() {
    let out = spinhl(&["verify", "all", "--n", "2", "--p", "1", "--D", "4", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    assert!(v["reports"].as_array().unwrap().len() > 20);
}

#[test]
fn output_is_independent_of_jobs() {
    let args = ["verify", "rec2", "--n", "2", "--p", "1", "--D", "3", "--seed", "5"];
    let one = spinhl(&[&args[..], &["--jobs", "1"]].concat());
    let four = spinhl(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn pfaffian_of_the_sample_file() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/pfaffian_2x2.json");
    let out = spinhl(&["pfaffian", "--file", path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "3/4");
}

#[test]
fn rejects_a_non_skew_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    fs::write(&path, r#"{"entries": [["0", "1"], ["1", "0"]]}"#).unwrap();
    let out = spinhl(&["pfaffian", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_sources() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spinhl.toml");
    fs::write(&cfg, "seed = 13\nn = 1\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = json(&spinhl(&["--config", cfg, "verify", "lemma1"]));
    assert_eq!(from_file["settings"]["seed"], 13);
    assert_eq!(from_file["settings"]["n"], 1);

    let env = Command::new(env!("CARGO_BIN_EXE_spinhl"))
        .args(["--config", cfg, "verify", "lemma1"])
        .env("SPINHL_SEED", "21")
        .output()
        .unwrap();
    assert_eq!(json(&env)["settings"]["seed"], 21);

    let flag = json(&spinhl(&["--config", cfg, "verify", "lemma1", "--seed", "3"]));
    assert_eq!(flag["settings"]["seed"], 3);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(spinhl(&["verify", "nothing"]).status.code(), Some(2));
    assert_eq!(spinhl(&["eval-f", "--lambda", "1,0", "--spin", "1/3", "--t", "1/2"]).status.code(), Some(2));
    assert_eq!(spinhl(&["enumerate", "damts"]).status.code(), Some(2));
}

#[test]
fn evaluation_routes_agree() {
    let base = ["eval-f", "--lambda", "3,1,1", "--spin", "1/3,-2/5,1/4", "--u", "1/2,-1/7,2/9", "--t", "3/5"];
    let sym = json(&spinhl(&base));
    let vertex = json(&spinhl(&[&base[..], &["--route", "vertex"]].concat()));
    assert_eq!(sym["value"], vertex["value"]);
}

#[test]
fn series_and_enumeration_shapes() {
    let s = json(&spinhl(&["eval-f", "--lambda", "1,0", "--spin", "1/3", "--t", "1/2", "--series", "--D", "2"]));
    assert_eq!(s["series"]["D"], 2);
    assert_eq!(s["series"]["variables"], 2);
    let t = json(&spinhl(&["enumerate", "triangles", "--bottom", "1,2,3"]));
    assert_eq!(t["count"], 7);
    let e = json(&spinhl(&["enumerate", "ensembles", "--lambda", "2,0"]));
    assert_eq!(e["count"].as_u64().unwrap(), e["items"].as_array().unwrap().len() as u64);
}

#[test]
fn bijection_pairs_agree() {
    let out = spinhl(&["bijection", "--lambda", "2,1,0", "--t", "1/3", "--x", "1/2,-2/5,3/7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["weights_agree"], true);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 7);
}
