use std::process::{Command, Output};

fn fusion6j(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusion6j"))
        .args(args)
        .env_remove("FUSION6J_TOL")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = fusion6j(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn verdict(v: &serde_json::Value, name: &str) -> bool {
    v["verdicts"].as_array().unwrap().iter().find(|x| x["name"] == name).unwrap()["value"].as_bool().unwrap()
}

#[test]
fn subcommands_run_on_fib() {
    for cmd in ["validate", "pentagon", "dims", "epsilon", "pivotal", "tetra", "report"] {
        let (code, v) = json(&[cmd, "--builtin", "fib"]);
        assert_eq!(code, 0, "{cmd}");
        assert_eq!(v["schema"], "v1");
    }
}

#[test]
fn report_fib_and_counterexample() {
    let (code, v) = json(&["report", "--builtin", "fib"]);
    assert_eq!(code, 0);
    assert!(verdict(&v, "F is tetrahedrally invariant"));
    assert!(v["pentagon"]["exact_zero"].as_bool().unwrap());
    let (code, v) = json(&["report", "--builtin", "fib", "--b", "1", "--convention", "dimweighted"]);
    assert_eq!(code, 0);
    assert!(verdict(&v, "S4 relations hold"));
    assert!(!verdict(&v, "basis-level tetrahedral relations (multiplicity-free)"));
}

#[test]
fn yanglee_pseudo_unitarity_on_float() {
    let (code, v) = json(&["pivotal", "--builtin", "yanglee", "--backend", "float"]);
    assert_eq!(code, 0);
    assert!(!verdict(&v, "pseudo-unitary"));
    let row = &v["pivotal"]["pseudo_unitarity"]["comparison"][1];
    assert!((row[1].as_f64().unwrap() - 0.381966).abs() < 1e-6);
    assert!((row[2].as_f64().unwrap() - 2.618034).abs() < 1e-6);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(fusion6j(&["report", "--builtin", "nope"]).status.code(), Some(2));
    assert_eq!(fusion6j(&["report", "--builtin", "pointed:Z5:1"]).status.code(), Some(2));
    assert_eq!(fusion6j(&["report"]).status.code(), Some(2));
    assert_eq!(fusion6j(&["report", "--file", "/nonexistent.json"]).status.code(), Some(2));
    let out = fusion6j(&["pentagon", "--builtin", "fib", "--labels", "1,z"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn broken_file_data_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fib.json");
    let out = fusion6j(&["export", "--builtin", "fib", "--b", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    std::fs::write(&path, &text).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(json(&["report", "--file", p]).0, 0);
    // Changing one entry keeps the blocks invertible but breaks the pentagon.
    std::fs::write(&path, text.replace(r#"["x","x","x","x","x",0,0,"1",0,0,"1"]"#, r#"["x","x","x","x","x",0,0,"1",0,0,"2"]"#)).unwrap();
    let (code, v) = json(&["pentagon", "--file", p]);
    assert_eq!(code, 1, "{v}");
    assert!(!v["pentagon"]["passed"].as_bool().unwrap());
    // An unparseable scalar is an input error with a location.
    std::fs::write(&path, text.replace(r#"["x","x","x","x","x",0,0,"1",0,0,"1"]"#, r#"["x","x","x","x","x",0,0,"1",0,0,"1+"]"#)).unwrap();
    let out = fusion6j(&["validate", "--file", p]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn tolerance_from_environment_and_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_fusion6j"))
        .args(["validate", "--builtin", "fib", "--backend", "float", "--json"])
        .env("FUSION6J_TOL", "1e-7")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tol"], 1e-7);
    let (_, v) = json(&["validate", "--builtin", "fib", "--backend", "float", "--tol", "1e-6"]);
    assert_eq!(v["tol"], 1e-6);
}

#[test]
fn options_are_echoed_and_text_output_works() {
    let (_, v) = json(&["tetra", "--builtin", "pointed:Z2:1", "--mu", "ones", "--gauge", "raw", "--seed", "9"]);
    assert_eq!(v["options"]["mu"], "AllOnes");
    assert_eq!(v["options"]["gauge"], "Raw");
    assert_eq!(v["options"]["seed"], 9);
    assert!(verdict(&v, "S4 relations hold"));
    let out = fusion6j(&["tetra", "--builtin", "pointed:Z2:1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[tetra]") && text.contains("exit code 0"));
}
