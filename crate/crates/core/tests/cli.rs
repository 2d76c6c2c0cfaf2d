use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use monodromy_lab::cli::{dispatch, Outcome};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn scratch(contents: &str) -> String {
    static N: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!("monodromy-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("input{}.json", N.fetch_add(1, Ordering::SeqCst)));
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

fn run(args: &[&str]) -> Outcome {
    dispatch(std::iter::once("monodromy-lab").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    (out.code, serde_json::from_str(&out.stdout).unwrap_or(Value::Null))
}

#[test]
fn homology_of_fixtures() {
    for (name, betti) in [
        ("circle.json", vec![1, 1]),
        ("sphere.json", vec![1, 0, 1]),
        ("torus.json", vec![1, 2, 1]),
        ("klein_bottle.json", vec![1, 2, 1]),
        ("projective_plane.json", vec![1, 1, 1]),
        ("torus_complex.json", vec![1, 2, 1]),
        ("torus_omega.json", vec![1, 2, 1]),
    ] {
        let (code, v) = json(&["homology", &fixture(name)]);
        assert_eq!(code, 0, "{name}");
        let got: Vec<u64> = v["result"]["betti"]
            .as_object()
            .unwrap()
            .values()
            .map(|b| b.as_u64().unwrap())
            .collect();
        let want: Vec<u64> = betti.into_iter().collect();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["morse", "check", &fixture("torus.json")]).code, 0);
    assert_eq!(
        run(&["wang", "verdict", "--wang", &fixture("trivial_wang.json")]).code,
        0
    );
    assert_eq!(run(&["wang", "verdict", "--wang", &fixture("dehn_wang.json")]).code, 1);
    assert_eq!(
        run(&["wang", "exactness", "--wang", &fixture("dehn_wang.json")]).code,
        0
    );
    assert_eq!(run(&["homology", "/nonexistent/file.json"]).code, 2);
    assert_eq!(run(&["no-such-command"]).code, 2);
}

#[test]
fn malformed_json_reports_position() {
    let path = scratch("{\n  \"cells\": [[\"v\"]],\n  \"incidence\": [,]\n}\n");
    let out = run(&["homology", &path]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
    assert!(out.stderr.contains("column"), "{}", out.stderr);
    assert!(out.stderr.contains(&path), "{}", out.stderr);
}

#[test]
fn invariant_violations_name_the_invariant() {
    let skip = scratch(r#"{"cells": [["v"], [], ["f"]], "incidence": [["f", "v"]], "matching": []}"#);
    let out = run(&["homology", &skip]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("adjacent dimensions"), "{}", out.stderr);

    let text = std::fs::read_to_string(fixture("trivial_dataset.json")).unwrap();
    let bad = text.replacen("\"count\": 1", "\"count\": 2", 1);
    assert_ne!(bad, text);
    let out = run(&[
        "seidel",
        "verify",
        "--table",
        &scratch(&bad),
        "--complex",
        &fixture("torus_complex.json"),
    ]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("FAIL  dataset valid"), "{}", out.stdout);
    assert!(out.stdout.contains("not 0 or 1"), "{}", out.stdout);
}

#[test]
fn cyclic_matching_fails_the_check() {
    let doc = r#"{
        "cells": [["v0", "v1"], ["e0", "e1"]],
        "incidence": [["e0", "v0"], ["e0", "v1"], ["e1", "v0"], ["e1", "v1"]],
        "matching": [["v0", "e0"], ["v1", "e1"]]
    }"#;
    let (code, v) = json(&["morse", "check", &scratch(doc)]);
    assert_eq!(code, 1);
    assert_eq!(v["checks"][0]["check"], "matching acyclic");
    assert_eq!(v["checks"][0]["pass"], false);
}

#[test]
fn digests_are_deterministic() {
    let args = [
        "pipeline",
        "--hofer",
        &fixture("separable.json"),
        "--wang",
        &fixture("trivial_wang.json"),
        "--table",
        &fixture("trivial_dataset.json"),
    ];
    let a = run(&args).report.unwrap();
    let b = run(&args).report.unwrap();
    assert_eq!(a.digest, b.digest);
    assert_eq!(a.digest, a.compute_digest());
    let c = run(&[
        "pipeline",
        "--hofer",
        &fixture("separable.json"),
        "--wang",
        &fixture("dehn_wang.json"),
        "--table",
        &fixture("trivial_dataset.json"),
    ])
    .report
    .unwrap();
    assert_ne!(a.digest, c.digest);
}

#[test]
fn json_report_shape() {
    let (code, v) = json(&["wang", "verdict", "--wang", &fixture("dehn_wang.json")]);
    assert_eq!(code, 1);
    for key in [
        "command",
        "inputs",
        "checks",
        "witnesses",
        "summary",
        "result",
        "digest",
        "timing_ms",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "wang verdict");
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    let w = &v["witnesses"][0]["witness"];
    assert_eq!(w["degree"], 1);
    assert_eq!(w["cycle"], serde_json::json!(["a"]));
}

#[test]
fn split_wang_inputs_match_the_bundle() {
    let bundle = run(&["wang", "build", "--wang", &fixture("circle_wang.json")])
        .report
        .unwrap();
    assert_eq!(bundle.checks.iter().filter(|c| !c.pass).count(), 0);
    let partial = run(&["wang", "build", "--minus", &fixture("circle.json")]);
    assert_eq!(partial.code, 2);
}

#[test]
fn seidel_verify_options() {
    let torus = fixture("torus_complex.json");
    let trivial = fixture("trivial_dataset.json");
    let dehn = fixture("dehn_dataset.json");

    let (code, v) = json(&[
        "seidel",
        "verify",
        "--table",
        &trivial,
        "--complex",
        &torus,
        "--lemma",
        "3",
    ]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"gluing homotopy identity"));
    assert!(!names.contains(&"inverse homotopy identity"));

    let (code, v) = json(&[
        "seidel",
        "verify",
        "--table",
        &trivial,
        "--complex",
        &torus,
        "--lemma",
        "4",
    ]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"inverse homotopy identity"));
    assert!(!names.contains(&"gluing homotopy identity"));

    assert_eq!(
        run(&[
            "seidel",
            "verify",
            "--table",
            &trivial,
            "--complex",
            &torus,
            "--lemma",
            "5"
        ])
        .code,
        2
    );

    let (code, v) = json(&[
        "seidel",
        "verify",
        "--table",
        &dehn,
        "--complex",
        &torus,
        "--corollary2",
        &fixture("torus_cycle.json"),
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["corollary2"]["verdict"], "nonzero_image");
    assert_eq!(v["result"]["corollary2"]["replay_holds"], true);

    let not_cycle = scratch(r#"{"degree": 1, "chain": ["missing"]}"#);
    assert_eq!(
        run(&[
            "seidel",
            "verify",
            "--table",
            &trivial,
            "--complex",
            &torus,
            "--corollary2",
            &not_cycle
        ])
        .code,
        2
    );
}

#[test]
fn epsilon_override_applies_to_every_table() {
    let args = [
        "--epsilon",
        "1/2",
        "seidel",
        "verify",
        "--table",
        &fixture("trivial_dataset.json"),
        "--complex",
        &fixture("torus_complex.json"),
    ];
    assert_eq!(run(&args).code, 0);
    assert_eq!(
        run(&[
            "--epsilon=-1",
            "seidel",
            "verify",
            "--table",
            &fixture("trivial_dataset.json"),
            "--complex",
            &fixture("torus_complex.json")
        ])
        .code,
        1
    );
}

#[test]
fn hofer_and_selftest() {
    let (code, v) = json(&["hofer", "--input", &fixture("separable.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["norm"]["norm_exact"], "1");
    assert_eq!(v["result"]["norm"]["plus_exact"], "1/2");
    let out = run(&["--seed", "7", "selftest", "--instances", "5"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
}
