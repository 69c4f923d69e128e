use std::collections::BTreeSet;
use std::path::PathBuf;

use exformal::cli::{run_cli, run_scenario, TASK_OPS};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("exformal").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(run(&["run", &fixture("exact_closure.json")]).0, 0);
    assert_eq!(run(&["run", &fixture("failing_checks.json")]).0, 1);
    let (code, out, err) = run(&["run", &fixture("bad_expression.json")]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.starts_with("ParseError"), "{err}");
    assert!(err.contains("position 3"), "{err}");
}

#[test]
fn missing_file_and_bad_flags_are_input_errors() {
    let (code, _, err) = run(&["run", "/nonexistent/scenario.json"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("FileNotFound"));
    assert_eq!(run(&["run", &fixture("exact_closure.json"), "--format", "yaml"]).0, 2);
}

#[test]
fn exact_closure_reports_potential() {
    let (_, out, _) = run(&["run", &fixture("exact_closure.json"), "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let task = &v["tasks"][0];
    assert_eq!(task["verdict"], "Exact");
    assert_eq!(task["details"]["potential"]["components"][""], "x*y");
    assert!(v["conventions"]["hodge"].is_string());
}

#[test]
fn plane_wave_is_byte_identical_across_runs() {
    let a = run(&["run", &fixture("plane_wave.json"), "--format", "json", "--seed", "7"]);
    let b = run(&["run", &fixture("plane_wave.json"), "--format", "json", "--seed", "7"]);
    let c = run(&["run", &fixture("plane_wave.json"), "--format", "json", "--seed", "7", "--parallel"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert_eq!(a.1, c.1);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    let checks = v["tasks"][0]["details"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["verdict"] == "Pass"));
}

#[test]
fn seed_is_reported() {
    let (_, out, _) = run(&["run", &fixture("exact_closure.json"), "--seed", "42"]);
    assert!(out.starts_with("exformal ") && out.lines().next().unwrap().contains("seed 42"));
}

#[test]
fn validation_happens_before_execution() {
    let text = r#"{"chart": ["x"], "tasks": [{"op": "simplify", "expr": "x"}, {"op": "ext_d", "form": "missing"}]}"#;
    let err = run_scenario(text, 1, false, false).unwrap_err();
    assert_eq!(err.kind(), "ValidationError");
    assert!(err.to_string().contains("unknown form `missing`"));
    let text = r#"{"chart": ["x"], "tasks": [{"op": "integrate", "expr": "x"}]}"#;
    assert!(run_scenario(text, 1, false, false).unwrap_err().to_string().contains("unknown op"));
    let text = r#"{"chart": ["x"], "tasks": [{"op": "simplify", "expr": "x", "extra": 1}]}"#;
    assert!(run_scenario(text, 1, false, false).is_err());
}

#[test]
fn strict_mode_fails_unknown_verdicts() {
    // the logarithm is undefined at every sample point, so the zero test cannot decide
    let text = r#"{"chart": ["x"], "tasks": [{"op": "is_zero", "expr": "ln(-1 - x^2) + x"}]}"#;
    let lenient = run_scenario(text, 1, false, false).unwrap();
    assert_eq!(lenient.tasks[0].verdict, "Unknown");
    assert!(lenient.ok);
    assert!(!run_scenario(text, 1, true, false).unwrap().ok);
}

#[test]
fn every_op_is_reachable_and_succeeds() {
    let mut seen = BTreeSet::new();
    for name in ["coverage.json", "coverage_spacetime.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let r = run_scenario(&text, 1, true, false).unwrap();
        for t in &r.tasks {
            assert!(t.ok, "{name} #{} {}: {} {:?}", t.index, t.op, t.verdict, t.details);
            seen.insert(t.op.clone());
        }
    }
    let missing: Vec<_> = TASK_OPS.iter().filter(|op| !seen.contains(**op)).collect();
    assert!(missing.is_empty(), "ops without a fixture task: {missing:?}");
}

#[test]
fn table_and_check_expr() {
    let (code, out, _) = run(&["table"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("k=")).count(), 4);
    let (code, out, _) = run(&["check-expr", "x*y + y*x", "--chart", "t,x,y,z"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "2*x*y");
    let (code, _, err) = run(&["check-expr", "x +", "--chart", "x"]);
    assert_eq!(code, 2);
    assert!(err.contains("position 3"));
}
