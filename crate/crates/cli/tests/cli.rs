use std::process::Command;

use serde_json::Value;

fn nfl(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nfl").chain(args.iter().copied());
    let code = nfl_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn snfl_example_reports_five_thirds() {
    let (code, out, _) = nfl(&["verify", "snfl", "--space", "3", "--values", "0,1,2", "--measure", "best:2"]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["verdict"], "verified");
    assert_eq!(r["tables"]["common_average"], "5/3");
    assert_eq!(r["tables"]["policies"], 24);
}

#[test]
fn snfl_on_an_open_set_is_a_precondition_violation() {
    let (code, out, err) = nfl(&["--check-witness", "verify", "snfl", "--tables", "0,1,2;2,1,0"]);
    assert_eq!(code, 2);
    let r = json(&out);
    assert_eq!(r["verdict"], "precondition-violated");
    assert_eq!(r["witness"]["member"], 0);
    assert_eq!(r["witness_checked"], true);
    assert!(err.contains("precondition"));
}

#[test]
fn usage_and_schema_errors_exit_one() {
    assert_eq!(nfl(&["frobnicate"]).0, 1);
    assert_eq!(nfl(&["verify", "nfl", "--measure", "best"]).0, 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"space\": {\"bits\": 2},\n  \"values\": [0, 1]\n}\n").unwrap();
    let (code, _, err) = nfl(&["metrics", "--problem", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 3") && err.contains("`values`"), "{err}");
    assert_eq!(nfl(&["--help"]).0, 0);
}

#[test]
fn core_errors_become_reports() {
    // The measure horizon exceeds the space.
    let (code, out, _) = nfl(&["verify", "nfl", "--space", "2", "--measure", "best:3"]);
    assert_eq!(code, 2);
    assert!(json(&out)["error"].as_str().unwrap().contains("budget"));
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let args = ["verify", "nfl", "--space", "3", "--measure", "mean:3"];
    let (_, one, _) = nfl(&[&["--threads", "1"][..], &args].concat());
    let (_, four, _) = nfl(&[&["--threads", "4"][..], &args].concat());
    let (_, default, _) = nfl(&args);
    assert_eq!(one, four);
    assert_eq!(one, default);
    assert!(!one.contains("generated_at"));
    let (_, stamped, _) = nfl(&[&["--timestamps"][..], &args].concat());
    assert!(stamped.contains("generated_at"));
}

#[test]
fn csv_export_lists_policy_averages() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let (code, _, _) = nfl(&["--out", path.to_str().unwrap(), "verify", "nfl", "--space", "2"]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "policy,average");
    assert_eq!(lines.len(), 1 + 2);
}

#[test]
fn problem_files_and_generators() {
    let dir = tempfile::tempdir().unwrap();
    let inline = dir.path().join("inline.json");
    std::fs::write(&inline, r#"{"space":{"bits":2},"values":[0,1,1,2]}"#).unwrap();
    let generated = dir.path().join("onemax.json");
    std::fs::write(&generated, r#"{"generator":"onemax","bits":2}"#).unwrap();
    let (_, a, _) = nfl(&["metrics", "--problem", inline.to_str().unwrap()]);
    let (_, b, _) = nfl(&["metrics", "--problem", generated.to_str().unwrap()]);
    assert_eq!(a, b);
    let (code, out, _) = nfl(&[
        "cup-check",
        "--problem",
        inline.to_str().unwrap(),
        "--problem",
        generated.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["verdict"], "refuted");
}

#[test]
fn counterexample_reports() {
    let (code, out, _) = nfl(&["--check-witness", "counterexample", "tsp"]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["tables"]["best_tour"]["length"], "6");
    assert_eq!(r["tables"]["worst_tour"]["length"], "32");
    let system = r["tables"]["system"].as_array().unwrap();
    assert_eq!(system.len(), 7);
    assert!(system[1..].iter().all(|c| c["length"] == "8"));
    assert!(system.iter().any(|c| c["tour"] == "123465"));
    assert_eq!(r["tables"]["nonnegative_costs_consistent"], false);
    assert_eq!(r["witness_checked"], true);

    let (code, out, _) = nfl(&["--check-witness", "counterexample", "boolgp"]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["tables"]["scores"], serde_json::json!([4, 2, 1]));
    assert_eq!(r["tables"]["query_realizable"], false);
    assert_eq!(r["witness"]["no_target"]["search_space"], "16");

    let (_, out, _) = nfl(&["counterexample", "symreg", "--classes", "0,1;2", "--objective", "3,4,1"]);
    let r = json(&out);
    assert_eq!(r["tables"]["query_realizable"], false);
    assert_eq!(r["tables"]["duplicate_semantics"]["not_regression"]["second"], 1);
    let (_, out, _) = nfl(&["--check-witness", "counterexample", "symreg", "--radii", "5,13,2"]);
    let r = json(&out);
    assert_eq!(r["witness"]["target"], serde_json::json!(["1", "2"]));
    assert_eq!(r["witness_checked"], true);
}

#[test]
fn focus_pair_and_trace_multisets() {
    let (code, out, _) = nfl(&["--check-witness", "focus-pair", "--values", "0,2,1,2", "--second", "random:7", "--budget", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["witness_checked"], true);
    let (code, out, _) = nfl(&["trace-multisets", "--values", "0,1,2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["tables"]["policies"], 24);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_nfl");
    let ok = Command::new(bin).args(["counterexample", "boolgp"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let refuted = Command::new(bin).args(["cup-check", "--tables", "0,1;0,0"]).output().unwrap();
    assert_eq!(refuted.status.code(), Some(2));
    let usage = Command::new(bin).arg("nope").output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
    let env_threads = Command::new(bin)
        .env("NFL_THREADS", "2")
        .args(["verify", "nfl", "--space", "2"])
        .output()
        .unwrap();
    assert_eq!(env_threads.status.code(), Some(0));
}
