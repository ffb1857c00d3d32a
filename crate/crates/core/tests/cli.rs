use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sfm-lab")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}")))
}

#[test]
fn cutdim_star_matching() {
    let (code, v) = json(&["cutdim", "--construction", "star-matching", "--n", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v, serde_json::json!({ "d": 10, "expected": 10, "pass": true }));
}

#[test]
fn adversary_2n_brute() {
    let (code, v) = json(&["adversary-2n", "--n", "6", "--solver", "brute"]);
    assert_eq!(code, 0);
    assert!(v["queries_used"].as_u64().unwrap() >= 12);
    assert_eq!(v["verdict"], "correct");
    let (_, v) = json(&["adversary-2n", "--n", "6", "--solver", "truncated"]);
    assert_eq!(v["verdict"], "fooled");
}

#[test]
fn st_kernel_scan() {
    let (code, v) = json(&["st-kernel", "--k", "5"]);
    assert_eq!(code, 0);
    let inner = v["inner_products"].as_array().unwrap();
    assert_eq!(inner.len(), 32);
    assert!(inner.iter().all(|x| x == "0/1"));
    assert_eq!(v["pass"], true);
    let (code, v) = json(&["st-kernel", "--k", "1"]);
    assert_eq!((code, &v["determinable"]), (0, &Value::Bool(true)));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["bogus"][..],
        &["cutdim"][..],
        &["cutdim", "--construction", "star-matching", "--n", "99"][..],
        &["solve", "--instance", "/nonexistent.json"][..],
        &["adversary-2n", "--n", "5", "--solver", "queyranne"][..],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty());
        assert_eq!(err.trim().lines().count(), 1, "{err}");
    }
}

#[test]
fn property_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    // permutation-family functions are not symmetric
    std::fs::write(&path, r#"{"kind":"permutation","n":3,"sigma":[1,2,3],"c":[0,1,0,0]}"#).unwrap();
    let (code, v) = json(&["solve", "--instance", path.to_str().unwrap(), "--solver", "queyranne"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
}

#[test]
fn same_seed_same_bytes() {
    let args = ["search-cutdim", "--n", "5", "--trials", "6", "--seed", "42"];
    assert_eq!(run(&args).1, run(&args).1);
    let args = ["perturb", "--construction", "star-matching", "--n", "5", "--trials", "10", "--seed", "3"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn instance_files_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("tri.json");
    std::fs::write(
        &graph,
        r#"{"n_vertices":3,"mode":"undirected","edges":[[1,2,"1"],[2,3,"1"],[1,3,"1"]]}"#,
    )
    .unwrap();
    let out = dir.path().join("report.csv");
    let g = graph.to_str().unwrap();
    let (code, stdout, _) = run(&["learn-graph", "--instance", g, "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.lines().next().unwrap().contains("exact"));

    let (code, v) = json(&["solve", "--instance", g, "--solver", "queyranne"]);
    assert_eq!(code, 0);
    assert_eq!(v["min_value"], "2/1");
    let (code, v) = json(&["span-bound", "--instance", g]);
    assert_eq!((code, &v["pass"]), (0, &Value::Bool(true)));
    let (code, v) = json(&["check-submodular", "--construction", "pair-family", "--n", "5"]);
    assert_eq!((code, v["functions_checked"].as_u64()), (0, Some(11)));
    let (code, v) = json(&["adversary-pairs", "--n", "6", "--solver", "random", "--seed", "9"]);
    assert_eq!((code, &v["fooled"]), (0, &Value::Bool(true)));
}
