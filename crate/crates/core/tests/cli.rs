use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_milnor-sh")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn rank_column(csv: &str) -> Vec<u64> {
    csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect()
}

#[test]
fn invariants_json() {
    let v = json(&["invariants", "chain:7,3", "--json"]);
    assert_eq!(v["schema"], "milnor-sh/1");
    let s = &v["signature"];
    assert_eq!((s["rho"].as_i64(), s["lambda"].as_i64(), s["mu"].as_i64()), (Some(3), Some(3), Some(15)));
    assert_eq!((s["kappa"].as_i64(), s["sigma"].as_i64(), s["small_res"].as_i64()), (Some(-2), Some(6), Some(3)));
    assert_eq!(v["weights"]["h"], 42);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn invariants_text_lists_weights() {
    let out = stdout(&["invariants", "loop:3,4"]);
    assert!(out.contains("d=(11,11,6,4) h=22 d0=-10"), "{out}");
}

#[test]
fn ranks_examples() {
    assert!(rank_column(&stdout(&["ranks", "loop:5,3", "--from", "-20", "--to", "1"])).iter().all(|&n| n == 3));
    assert_eq!(rank_column(&stdout(&["ranks", "chain:3,4", "--from", "2", "--to", "5"])), [0, 10, 0, 0]);
    let v = json(&["ranks", "loop:3,4", "--from", "-9", "--to", "0", "--json"]);
    assert_eq!(v["schema"], "milnor-sh/1");
}

#[test]
fn ranks_bigraded_sums_to_ranks() {
    let plain = rank_column(&stdout(&["ranks", "fermat:3,4", "--from", "-12", "--to", "3"]));
    let bi = stdout(&["ranks", "fermat:3,4", "--from", "-12", "--to", "3", "--bigraded"]);
    let mut sums = vec![0u64; plain.len()];
    let cells = bi.split("degree,bidegree,rank\n").nth(1).unwrap();
    for line in cells.lines() {
        let f: Vec<i64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        sums[(f[0] + 12) as usize] += f[2] as u64;
    }
    assert_eq!(sums, plain);
}

#[test]
fn compare_examples() {
    assert!(stdout(&["compare", "chain:7,3", "loop:3,5"]).contains("Contactomorphic"));
    assert!(stdout(&["compare", "chain:4,6", "loop:3,3"]).contains("Distinct (mu: 21 vs 9)"));
    let v = json(&["compare", "fermat:2,4", "fermat:2,6", "--json"]);
    assert_eq!(v["verdict"]["outcome"], "Distinct");
    assert_eq!(v["verdict"]["separator"]["invariant"], "mu");
}

#[test]
fn verify_examples_pass() {
    for s in ["chain:3,4", "loop:3,4", "fermat:2,6", "fermat:3,4"] {
        let v = json(&["verify", s, "--json"]);
        let checks = v["checks"].as_array().unwrap();
        assert!(checks.iter().all(|c| c["passed"] == true), "{s}: {v}");
    }
}

#[test]
fn sweep_shapes() {
    let csv = stdout(&["sweep", "--type", "fermat", "--max", "6"]);
    assert_eq!(csv.lines().count(), 26);
    let csv = stdout(&["sweep", "--max", "4"]);
    assert_eq!(csv.lines().count(), 1 + 3 * 9);
    let pairs = stdout(&["sweep", "--pairs", "--max", "5"]);
    assert_eq!(pairs.lines().count(), 1 + 48 * 48);
    let v = json(&["sweep", "--max", "3", "--out", "json"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn sweep_checks_pass() {
    assert_eq!(run(&["sweep", "--type", "chain", "--max", "8", "--check", "el"]).status.code(), Some(0));
    assert_eq!(run(&["sweep", "--max", "5", "--check", "all"]).status.code(), Some(0));
}

#[test]
fn usage_errors() {
    for args in [
        &["invariants", "loop:1,4"][..],
        &["invariants", "quartic:2,3"],
        &["ranks", "chain:3,4", "--from", "4", "--to", "2"],
        &["sweep", "--max", "1"],
        &["verify", "chain:3,4", "--from", "5"],
        &[],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    for args in [&["sweep", "--max", "6", "--out", "json"][..], &["sweep", "--pairs", "--max", "4"]] {
        assert_eq!(run(args).stdout, run(args).stdout);
    }
}
