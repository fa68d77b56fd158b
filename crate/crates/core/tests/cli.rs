use std::fs;

use serde_json::Value;
use surfsing::cli::run;

fn surfsing(args: &[&str]) -> surfsing::cli::Outcome {
    run(std::iter::once("surfsing").chain(args.iter().copied()))
}

#[test]
fn classify_examples() {
    let out = surfsing(&["classify", "--an", "3,3"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "LogTerminal, delta_x = 1\n");
    assert_eq!(surfsing(&["classify", "--en", "3", "3"]).stdout, "LogTerminal, delta_x = 13/11\n");
    assert_eq!(surfsing(&["delta", "--en", "1", "3"]).stdout, "13/7\n");
    assert_eq!(surfsing(&["delta", "--en", "15", "3"]).stdout, "61/59\n");
}

#[test]
fn graph_files_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("e.json");
    fs::write(
        &good,
        r#"{"vertices":[{"id":"A","weight":2},{"id":"B","weight":3}],"edges":[["A","B"]]}"#,
    )
    .unwrap();
    let out = surfsing(&["classify", good.to_str().unwrap()]);
    assert_eq!(out.stdout, "LogTerminal, delta_x = 7/5\n");

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"vertices":[{"id":"A","weight":1}],"edges":[]}"#).unwrap();
    let out = surfsing(&["classify", bad.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("not minimal"), "{}", out.stderr);

    let missing = surfsing(&["classify", dir.path().join("none.json").to_str().unwrap()]);
    assert_eq!(missing.code, 1);
}

#[test]
fn zariski_example() {
    let dir = tempfile::tempdir().unwrap();
    let lattice = dir.path().join("lattice.json");
    fs::write(&lattice, r#"{"ids":["C1","C2"],"matrix":[[-2,1],[1,-2]]}"#).unwrap();
    let out = surfsing(&[
        "zariski",
        "--lattice",
        lattice.to_str().unwrap(),
        "--pairings",
        "C1=-1,C2=1",
        "--json",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["negative"]["C1"], "1/2");
    assert_eq!(v["negative"]["C2"], "0");
    assert_eq!(v["positive_pairings"]["C1"], "0");
    assert_eq!(v["positive_pairings"]["C2"], "1/2");

    let out = surfsing(&["zariski", "--lattice", lattice.to_str().unwrap(), "--pairings", "C1=-1"]);
    assert_eq!(out.code, 1);
}

#[test]
fn check_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    fs::write(
        &path,
        r#"{"point": "smooth", "D2": "5", "pairings": {"L": "1"},
            "curves": {"ids": ["L"], "matrix": [[0]]}, "bound": 3}"#,
    )
    .unwrap();
    let out = surfsing(&["check", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["delta_x"], "4");
    assert_eq!(v["verdict"], "PossiblyNotFree");
    assert_eq!(v["witnesses"][0]["DE"], "1");
    assert_eq!(v["witnesses"][0]["E2"], "0");

    fs::write(
        &path,
        r#"{"point": "smooth", "D2": "3", "pairings": {"L": "1"},
            "curves": {"ids": ["L"], "matrix": [[-1]]}}"#,
    )
    .unwrap();
    let out = surfsing(&["check", path.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("inapplicable"));
}

#[test]
fn tables_and_enumeration() {
    let out = surfsing(&["tables"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.lines().filter(|l| l.starts_with("PASS table1 ")).count() == 120);
    assert!(!out.stdout.contains("FAIL"));

    let out = surfsing(&["enumerate", "--max-vertices", "3", "--max-weight", "3", "--shapes", "chain"]);
    assert_eq!(out.code, 0);
    // header plus (2 + 3 + 6) chains
    assert_eq!(out.stdout.lines().count(), 12);

    let out = surfsing(&["enumerate", "--max-vertices", "6", "--max-weight", "3", "--certify"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.ends_with("0 violations\n"));

    assert_eq!(surfsing(&["enumerate", "--shapes", "cycle"]).code, 1);
}

#[test]
fn output_is_deterministic() {
    let a = surfsing(&["tables", "--json"]);
    let b = surfsing(&["tables", "--json"]);
    assert_eq!(a, b);
    let a = surfsing(&["classify", "--dn", "2,3;2,2", "--json"]);
    let b = surfsing(&["classify", "--json", "--dn", "2,3;2,2"]);
    assert_eq!(a, b);
}
