//! End-to-end tests that spawn the real binary and check reports and exit
//! codes for every verdict class: affirmative (0), negative (1), usage or
//! format error (2), and limits exhausted (3).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sympcp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|err| {
        panic!(
            "stdout is not JSON ({err}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn stdout_text(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("fixture written");
    path
}

const DOUBLING: &str = r#"{"alphabet":["0","1"],"pairs":[["00","0"]]}"#;
const CLOSURE: &str = r#"{"alphabet":["0","1"],"pairs":[["00","0"],["0","00"]]}"#;
const COMMUTING: &str = r#"{"letters":["a","b"],"relations":[["ab","ba"]]}"#;

#[test]
fn solve_reports_unsolvable_with_reason() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_file(dir.path(), "inst.json", DOUBLING);
    let out = run(&["solve", "--input", inst.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        stdout_json(&out),
        json!({"outcome": "unsolvable", "reason": "length-monotone"})
    );
}

#[test]
fn solve_finds_the_shortest_closure_solution() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_file(dir.path(), "inst.json", CLOSURE);
    let out = run(&["solve", "--input", inst.to_str().unwrap(), "--threads", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_json(&out),
        json!({"outcome": "solution", "indices": [0, 1]})
    );
}

#[test]
fn enumerate_lists_solutions_or_exits_exhausted() {
    let dir = tempfile::tempdir().unwrap();
    let closure = write_file(dir.path(), "closure.json", CLOSURE);
    let out = run(&[
        "enumerate",
        "--input",
        closure.to_str().unwrap(),
        "--max-tiles",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out), json!({"solutions": [[0, 1], [1, 0]]}));

    let doubling = write_file(dir.path(), "doubling.json", DOUBLING);
    let out = run(&[
        "enumerate",
        "--input",
        doubling.to_str().unwrap(),
        "--max-tiles",
        "6",
    ]);
    assert_eq!(code(&out), 3);
    assert_eq!(stdout_json(&out), json!({"solutions": []}));
}

#[test]
fn validate_and_symmetrize_report_swap_closure() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_file(dir.path(), "inst.json", DOUBLING);
    let out = run(&["validate", "--input", inst.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_json(&out),
        json!({"valid": true, "alphabet": ["0", "1"], "pairs": 1, "symmetric": false})
    );

    let closed = dir.path().join("closed.json");
    let out = run(&[
        "symmetrize",
        "--input",
        inst.to_str().unwrap(),
        "--output",
        closed.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty(), "--output silences stdout");

    let out = run(&["validate", "--input", closed.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_json(&out),
        json!({"valid": true, "alphabet": ["0", "1"], "pairs": 2, "symmetric": true})
    );
}

#[test]
fn invalid_instances_get_a_negative_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_file(
        dir.path(),
        "trivial.json",
        r#"{"alphabet":["0"],"pairs":[["0","0"]]}"#,
    );
    let out = run(&["validate", "--input", inst.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["valid"], json!(false));
}

#[test]
fn malformed_files_and_bad_usage_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_file(dir.path(), "bad.json", "not json");
    let out = run(&["validate", "--input", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot parse"));

    let out = run(&["no-such-command"]);
    assert_eq!(code(&out), 2);

    // to-derivation without --x/--y is a usage error, not a verdict.
    let pres = write_file(dir.path(), "pres.json", COMMUTING);
    let sol = write_file(dir.path(), "sol.json", r#"{"indices":[0]}"#);
    let out = run(&[
        "translate",
        "--presentation",
        pres.to_str().unwrap(),
        "--direction",
        "to-derivation",
        "--input",
        sol.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn reduce_and_translate_round_trip_a_rewrite() {
    let dir = tempfile::tempdir().unwrap();
    let pres = write_file(dir.path(), "pres.json", COMMUTING);
    let reduced = dir.path().join("reduced.json");
    let out = run(&[
        "reduce",
        "--presentation",
        pres.to_str().unwrap(),
        "--x",
        "aab",
        "--y",
        "aba",
        "--output",
        reduced.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let inst: Value = serde_json::from_str(&std::fs::read_to_string(&reduced).unwrap()).unwrap();
    assert_eq!(inst["pairs"].as_array().unwrap().len(), 14);

    let deriv = write_file(
        dir.path(),
        "deriv.json",
        r#"{"steps":["aab","aba"],"witnesses":[{"position":1,"relation":0}]}"#,
    );
    let out = run(&[
        "translate",
        "--presentation",
        pres.to_str().unwrap(),
        "--direction",
        "to-solution",
        "--input",
        deriv.to_str().unwrap(),
        "--x",
        "aab",
        "--y",
        "aba",
    ]);
    assert_eq!(code(&out), 0);
    let sol = stdout_json(&out);
    assert_eq!(sol, json!({"indices": [10, 3, 9, 5, 0, 1, 0, 11]}));

    let sol_file = write_file(dir.path(), "sol.json", &sol.to_string());
    let out = run(&[
        "translate",
        "--presentation",
        pres.to_str().unwrap(),
        "--direction",
        "to-derivation",
        "--input",
        sol_file.to_str().unwrap(),
        "--x",
        "aab",
        "--y",
        "aba",
    ]);
    assert_eq!(code(&out), 0);
    let deriv = stdout_json(&out);
    // The even-length padding step survives as a trailing copy.
    assert_eq!(deriv["steps"], json!(["aab", "aba", "aba"]));
    assert_eq!(
        deriv["witnesses"],
        json!([{"position": 1, "relation": 0}, null])
    );

    // The reduced instance really is solvable, and by the same indices.
    let out = run(&[
        "solve",
        "--input",
        reduced.to_str().unwrap(),
        "--max-tiles",
        "40",
        "--max-overhang",
        "24",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["outcome"], json!("solution"));
}

#[test]
fn relation_pipeline_from_solution_to_factorization() {
    let dir = tempfile::tempdir().unwrap();
    let closure = write_file(dir.path(), "closure.json", CLOSURE);
    let rel = dir.path().join("rel.json");
    let out = run(&[
        "relation-from-solution",
        "--input",
        closure.to_str().unwrap(),
        "--indices",
        "0,1",
        "--output",
        rel.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let rel_doc: Value = serde_json::from_str(&std::fs::read_to_string(&rel).unwrap()).unwrap();
    assert_eq!(
        rel_doc,
        json!({"p": ["u:0", "ubar:1"], "q": ["eps2", "v:0", "vbar:1"]})
    );

    let out = run(&[
        "verify-relation",
        "--input",
        closure.to_str().unwrap(),
        "--relation",
        rel.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out), json!({"verified": true}));

    let out = run(&[
        "matrix-relation-check",
        "--input",
        closure.to_str().unwrap(),
        "--relation",
        rel.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out), json!({"equal": true}));

    let out = run(&[
        "factor-blocks",
        "--input",
        closure.to_str().unwrap(),
        "--relation",
        rel.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let fact = stdout_json(&out);
    assert_eq!(fact["solution"], json!({"indices": [0, 1]}));
    assert_eq!(fact["blocks"][0]["kind"], json!("2-3"));

    // A shuffled relation fails verification with a negative exit.
    let broken = write_file(
        dir.path(),
        "broken.json",
        r#"{"p":["u:0","ubar:1"],"q":["eps2","v:1","vbar:1"]}"#,
    );
    let out = run(&[
        "verify-relation",
        "--input",
        closure.to_str().unwrap(),
        "--relation",
        broken.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out), json!({"verified": false}));
}

#[test]
fn find_relation_finds_or_exhausts() {
    let dir = tempfile::tempdir().unwrap();
    let doubling = write_file(dir.path(), "doubling.json", DOUBLING);
    let out = run(&["find-relation", "--input", doubling.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rel = stdout_json(&out);
    assert_eq!(rel["outcome"], json!("relation"));
    assert_eq!(rel["p"], json!(["eps2", "v:0", "u:0", "eps2"]));
    assert_eq!(rel["q"], json!(["u:0", "eps2", "eps2", "v:0"]));

    let out = run(&[
        "find-relation",
        "--input",
        doubling.to_str().unwrap(),
        "--max-tiles",
        "3",
    ]);
    assert_eq!(code(&out), 3);
    assert_eq!(stdout_json(&out), json!({"outcome": "exhausted"}));
}

#[test]
fn encode_pair_and_decode_matrix_invert_each_other() {
    let out = run(&["encode-pair", "--w", "000", "--j", "20213"]);
    assert_eq!(code(&out), 0);
    let matrix = stdout_json(&out);
    assert_eq!(
        matrix,
        json!({"rows": [["8", "0", "0"], ["0", "1", "0"], ["0", "866", "1024"]]})
    );

    let dir = tempfile::tempdir().unwrap();
    let m = write_file(dir.path(), "m.json", &matrix.to_string());
    let out = run(&["decode-matrix", "--input", m.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out), json!({"w": "000", "j": "20213"}));

    // A matrix outside the encoding's image is a negative verdict.
    let bad = write_file(
        dir.path(),
        "bad.json",
        r#"{"rows":[["3","0","0"],["0","1","0"],["0","0","4"]]}"#,
    );
    let out = run(&["decode-matrix", "--input", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["decodable"], json!(false));
}

#[test]
fn gamma_listings_and_embedding_check_agree() {
    let dir = tempfile::tempdir().unwrap();
    let closure = write_file(dir.path(), "closure.json", CLOSURE);
    let out = run(&["gamma", "--input", closure.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let gens = stdout_json(&out);
    assert_eq!(gens["generators"].as_array().unwrap().len(), 9);
    assert_eq!(gens["generators"][0]["tag"], json!("eps2"));

    let out = run(&["gamma-reduced", "--input", closure.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["generators"].as_array().unwrap().len(), 5);

    let out = run(&[
        "verify-embedding",
        "--input",
        closure.to_str().unwrap(),
        "--trials",
        "25",
        "--max-len",
        "5",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_json(&out),
        json!({"trials": 25, "passed": true, "failures": []})
    );
}

#[test]
fn encode_binary_recodes_wider_alphabets() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_file(
        dir.path(),
        "abc.json",
        r#"{"alphabet":["a","b","c"],"pairs":[["ab","c"]]}"#,
    );
    let out = run(&["encode-binary", "--input", inst.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_json(&out),
        json!({"alphabet": ["0", "1"], "pairs": [["0001", "10"]]})
    );
}

#[test]
fn demo_walks_the_doubling_instance_deterministically() {
    let first = run(&["demo-counterexample"]);
    assert_eq!(code(&first), 0);
    let report = stdout_json(&first);
    assert_eq!(report["solve"]["outcome"], json!("unsolvable"));
    let relations = report["relations"].as_array().unwrap();
    assert_eq!(relations.len(), 3);
    for rel in relations {
        assert_eq!(rel["verified"], json!(true));
        assert_eq!(rel["matrices_agree"], json!(true));
    }
    assert_eq!(
        relations[0]["factorization"]["solution"],
        json!({"indices": [0, 1]})
    );

    let second = run(&["demo-counterexample"]);
    assert_eq!(first.stdout, second.stdout, "reports are byte-identical");
}

#[test]
fn text_format_renders_the_same_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_file(dir.path(), "inst.json", DOUBLING);
    let out = run(&[
        "solve",
        "--input",
        inst.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_text(&out), "unsolvable: length-monotone\n");
}
