use std::path::PathBuf;
use std::process::{Command, Output};

fn geometry(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../geometries")
        .join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lefschetz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on(name: &str, extra: &[&str]) -> Output {
    let g = geometry(name);
    let mut args = vec!["--geometry", g.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).expect("stderr is one JSON object")
}

#[test]
fn check_quintic() {
    let o = run_on("quintic", &["--cmd", "check"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["theorem1_nonneg"], serde_json::json!([true]));
    assert_eq!(v["theorem2_case"], "None");
}

#[test]
fn verify_quintic_degree_two() {
    let o = run_on("quintic", &["--cmd", "verify", "--max-degree", "2", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("1\t2875/1\t2875/1\tMATCH"));
    assert!(text.contains("2\t4876875/8\t4876875/8\tMATCH"));
    assert_eq!(text.lines().last(), Some("MATCH"));
}

#[test]
fn empty_invariants_table() {
    let o = run_on("quintic", &["--cmd", "invariants", "--max-degree", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!([]));
}

#[test]
fn invariants_table() {
    let o = run_on("quintic", &["--cmd", "invariants", "--max-degree", "3", "--format", "tsv"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines[0], "degree\tN_d\tn_d");
    assert_eq!(lines[1], "1\t2875/1\t2875/1");
    assert_eq!(lines[2], "2\t4876875/8\t609250/1");
    assert_eq!(lines[3], "3\t8564575000/27\t317206375/1");

    let o = run_on("bicubic", &["--cmd", "invariants", "--max-degree", "1", "--format", "tsv"]);
    assert!(stdout(&o).contains("1,0\t189/1\t-"));
}

#[test]
fn staged_run_matches_direct_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run_on("quintic", &["--cmd", "ifun", "--max-degree", "3", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let ifun = dir.path().join("ifun.json");
    let o = run_on(
        "quintic",
        &["--cmd", "mirror-map", "--max-degree", "3", "--out", out, "--input", ifun.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0));
    let map = dir.path().join("mirror-map.json");
    let staged = run_on(
        "quintic",
        &["--cmd", "invariants", "--max-degree", "3", "--input", map.to_str().unwrap()],
    );
    let direct = run_on("quintic", &["--cmd", "invariants", "--max-degree", "3"]);
    assert_eq!(staged.status.code(), Some(0));
    assert_eq!(stdout(&staged), stdout(&direct));

    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(map).unwrap()).unwrap();
    assert_eq!(v["f0"][0], serde_json::json!({"beta": [1], "coeff": "-120/1"}));
}

#[test]
fn output_is_deterministic() {
    let a = run_on("local_p1", &["--cmd", "oracle", "--seed", "11"]);
    let b = run_on("local_p1", &["--cmd", "oracle", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v[1]["value"], "1/8");
    assert_eq!(v[1]["graphs_evaluated"], 6);
}

#[test]
fn serre_reports_obstruction() {
    let o = run_on("p3_o1o1", &["--cmd", "serre", "--max-degree", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["solved"], false);
    assert_eq!(report["obstructed"], serde_json::json!([1]));
    let err = stderr_json(&o);
    assert_eq!(err["module"], "invariants");
    assert_eq!(err["kind"], "Infeasible");
    assert_eq!(err["beta"], serde_json::json!([1]));
}

#[test]
fn domain_errors_are_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"ambient":[1,1],"bundle":[{"l":[1,-1]}]}"#).unwrap();
    let o = run(&["--geometry", path.to_str().unwrap(), "--cmd", "check"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr_json(&o);
    assert_eq!(err["module"], "twist");
    assert_eq!(err["kind"], "Unclassifiable");

    std::fs::write(&path, r#"{"ambient":[4],"bundle":[{"l":[4]}]}"#).unwrap();
    let o = run(&["--geometry", path.to_str().unwrap(), "--cmd", "mirror-map", "--max-degree", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr_json(&o);
    assert_eq!(err["module"], "mirror");
    assert_eq!(err["kind"], "StructureViolation");
    assert_eq!(err["beta"], serde_json::json!([1]));
}

#[test]
fn missing_file_is_io_error() {
    let o = run(&["--geometry", "/nonexistent/geometry.json", "--cmd", "check"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["kind"], "Io");
}
