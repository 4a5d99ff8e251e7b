use std::process::{Command, Output};

use serde_json::Value;

fn dwbc(args: &[&str]) -> (Output, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_dwbc")).args(args).output().unwrap();
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out, doc)
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn exact_fz_check_passes() {
    let (out, doc) = dwbc(&["verify", "--check", "fz", "--size", "2", "--backend", "exact"]);
    assert_eq!(code(&out), 0, "{doc}");
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["results"][0]["residual_text"], "0");
    assert_eq!(doc["provenance"]["rng"], "ChaCha8Rng (rand_chacha 0.3)");
}

#[test]
fn count_only_enumeration() {
    let (out, doc) = dwbc(&["enumerate", "--size", "3", "--count-only"]);
    assert_eq!(code(&out), 0);
    assert_eq!(doc["count"], 7);
}

#[test]
fn l1_compute_is_c() {
    let (out, doc) = dwbc(&["compute", "--size", "1"]);
    assert_eq!(code(&out), 0);
    let p = dwbc_json_poly(&doc["value"]["terms"]);
    assert_eq!(p, "1/2*q - 1/2*q^-1".parse().unwrap());
}

fn dwbc_json_poly(v: &Value) -> dwbc_core::LaurentPoly {
    dwbc::json::parse_poly(v).unwrap()
}

#[test]
fn solve_l2_reproduces_the_table() {
    let (out, doc) = dwbc(&["solve", "--size", "2"]);
    assert_eq!(code(&out), 0, "{doc}");
    assert_eq!(doc["reference_check"]["pass"], true);
    assert_eq!(doc["matches_direct_expansion"], true);
    assert_eq!(doc["symmetric"], true);
    assert_eq!(doc["support_size"], 4);
}

#[test]
fn float_runs_are_deterministic() {
    let args = [
        "verify",
        "--check",
        "fz",
        "--size",
        "3",
        "--backend",
        "float",
        "--seed",
        "11",
        "--trials",
        "4",
    ];
    let (a, da) = dwbc(&args);
    let (b, db) = dwbc(&args);
    assert_eq!(code(&a), 0, "{da}");
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(da["results"].as_array().unwrap().len(), 4);
    assert_eq!(db["provenance"]["seed"], 11);
}

#[test]
fn config_errors_exit_2() {
    let (out, _) = dwbc(&["solve", "--size", "9", "--backend", "exact"]);
    assert_eq!(code(&out), 2);
    let (out, _) = dwbc(&["compute", "--size", "2", "--lambda", "u1"]);
    assert_eq!(code(&out), 2);
    let (out, _) = dwbc(&["verify", "--check", "nope"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unattainable_tolerance_fails_with_exit_1() {
    let (out, doc) = dwbc(&[
        "verify",
        "--check",
        "rtt",
        "--size",
        "3",
        "--backend",
        "float",
        "--tolerance",
        "1e-300",
    ]);
    assert_eq!(code(&out), 1, "{doc}");
    assert_eq!(doc["pass"], false);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("dwbc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ode.json");
    let (out, _) = dwbc(&["ode", "--size", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["residual"], "0");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn oversized_runs_are_rejected_up_front() {
    let (out, doc) = dwbc(&["verify", "--check", "z0", "--size", "9"]);
    assert_eq!(code(&out), 2);
    assert_eq!(doc["error"], "config");
    let (out, _) = dwbc(&["verify", "--check", "z0", "--size", "11", "--backend", "float"]);
    assert_eq!(code(&out), 2);
}
