use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trop-moduli"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), json)
}

#[test]
fn aut_n4_is_s3() {
    let (code, r) = report(&["aut", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["subcommand"], "aut");
    assert_eq!(r["verdict"], "PASS");
    assert_eq!(r["payload"]["order"], 6);
    assert_eq!(r["payload"]["expected"], 6);
}

#[test]
fn aut_methods() {
    let (code, r) = report(&["aut", "--n", "5", "--method", "poset"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["order"], 120);
    let (code, r) = report(&["aut", "--n", "3", "--method", "graph"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["order"], 1);
    let (code, _) = report(&["aut", "--n", "7", "--method", "poset"]);
    assert_eq!(code, 3);
}

#[test]
fn enumerate_outputs() {
    let (code, r) = report(&["enumerate", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["f_vector"], serde_json::json!([1]));
    assert_eq!(r["verdict"], "N-A");

    let (_, r) = report(&["enumerate", "--n", "5", "--dim", "1"]);
    assert_eq!(r["payload"]["f_vector"], serde_json::json!([1, 10, 15]));
    let strata = r["payload"]["strata"].as_object().unwrap();
    assert_eq!(strata.len(), 1);
    assert_eq!(strata["1"].as_array().unwrap().len(), 10);
    assert_eq!(
        strata["1"][0],
        serde_json::json!({ "n": 5, "splits": [[2, 3]] })
    );

    let out = run(&["enumerate", "--n", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "dimension,index,splits\n0,0,*\n1,0,\"{2,3}\"\n1,1,\"{2,4}\"\n1,2,\"{3,4}\"\n"
    );
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["enumerate", "--n", "9"]).status.code(), Some(3));
    assert_eq!(run(&["report", "--max-n", "8"]).status.code(), Some(3));
    assert_eq!(run(&["enumerate"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--check", "formula"]).status.code(), Some(2));
}

#[test]
fn complex_exports() {
    let out = run(&["complex", "--n", "4", "--dot", "hasse"]);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    let out = run(&["complex", "--n", "5", "--dot", "compat"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.matches(" -- ").count(), 15);
    let (code, r) = report(&["complex", "--n", "4"]);
    assert_eq!(code, 0);
    assert!(r["payload"].is_object());
}

#[test]
fn count_checks() {
    let (code, r) = report(&["count", "--n", "5", "--check", "formula"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "PASS");
    assert_eq!(r["payload"]["expansion_mismatches"], 0);
    let (code, r) = report(&["count", "--check", "lemma", "--bound", "8"]);
    assert_eq!(code, 0);
    assert_eq!(
        r["payload"]["sweep"]["counterexamples"],
        serde_json::json!([])
    );
}

#[test]
fn genus2_verify() {
    let (code, r) = report(&["genus2", "--verify", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["cells"], 7);
    assert_eq!(r["payload"]["aut_order"], 1);
    assert_eq!(r["payload"]["verdict"], "PASS");
}

#[test]
fn thread_count_does_not_change_payloads() {
    let (_, a) = report(&["--threads", "1", "aut", "--n", "6"]);
    let (_, b) = report(&["--threads", "4", "aut", "--n", "6"]);
    assert_eq!(a["payload"], b["payload"]);
    assert_eq!(a["payload"]["order"], 720);
}
