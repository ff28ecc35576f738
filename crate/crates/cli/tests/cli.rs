use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fan(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fans").join(format!("{name}.json")).display().to_string()
}

fn qtoric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtoric")).args(args).output().expect("spawn")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn cp2_has_three_charts() {
    let out = qtoric(&["fan", &fan("cp2")]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["maximal"].as_array().unwrap().len(), 3);
    assert_eq!(v["cones"].as_array().unwrap().len(), 7);
    for id in v["maximal"].as_array().unwrap() {
        let c = &v["cones"][id.as_u64().unwrap() as usize];
        assert_eq!(c["maximal"], true);
        assert_eq!(c["generators"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn conifold_is_one_chart_with_four_generators() {
    let v = json(&qtoric(&["fan", &fan("conifold")]));
    assert_eq!(v["charts"], 1);
    let top = &v["cones"][v["maximal"][0].as_u64().unwrap() as usize];
    assert_eq!(top["generators"].as_array().unwrap().len(), 4);
    assert_eq!(top["relations"].as_array().unwrap().len(), 1);
}

#[test]
fn overlapping_cones_are_rejected() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"n": 2, "rays": [[1, 0], [0, 1], [1, 1]], "cones": [[0, 1], [0, 2]]}}"#).unwrap();
    let out = qtoric(&["fan", f.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cones 0 and 1"), "{err}");
}

#[test]
fn orbifold_chart_binomial() {
    let v = json(&qtoric(&["chart", &fan("orbifold"), "3"]));
    assert_eq!(v["generators"].as_array().unwrap().len(), 3);
    let texts: Vec<&str> = v["binomials"].as_array().unwrap().iter().map(|b| b["text"].as_str().unwrap()).collect();
    // x1 = z, and {x2, x3} = {y, x} in the usual naming of the orbifold chart
    assert_eq!(texts, ["x1^2 - q12^2*x2*x3"]);
}

#[test]
fn zero_cone_gives_laurent_chart() {
    let out = qtoric(&["--format", "text", "chart", &fan("cp2"), "0"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("chart on x1, x2, x3, x4\n"));
    assert!(text.contains("  x1*x2 - 1 = 0\n"));
    assert!(text.contains("  x3*x4 - 1 = 0\n"));
}

#[test]
fn resolved_conifold_chart() {
    let summary = json(&qtoric(&["fan", &fan("conifold-resolution")]));
    let id = summary["maximal"][0].to_string();
    let v = json(&qtoric(&["chart", &fan("conifold-resolution"), &id]));
    assert_eq!(v["generators"].as_array().unwrap().len(), 3);
    assert_eq!(v["commutation"].as_array().unwrap().len(), 3);
    assert!(v["binomials"].as_array().unwrap().is_empty());
}

#[test]
fn unknown_cone_id() {
    let out = qtoric(&["chart", &fan("cp2"), "7"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_det_is_deterministic() {
    let a = qtoric(&["verify", "det", "--n", "3"]);
    let b = qtoric(&["verify", "det", "--n", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["schema"], "qtoric-report/1");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["theta_mode"], "symbolic");
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn verify_examples_and_pluecker() {
    for args in [&["verify", "examples"][..], &["verify", "pluecker", "--d", "2", "--n", "4"][..]] {
        let out = qtoric(args);
        assert_eq!(code(&out), 0, "{args:?}");
        assert_eq!(json(&out)["status"], "pass");
    }
}

#[test]
fn verify_input_errors() {
    assert_eq!(code(&qtoric(&["verify", "nope"])), 2);
    assert_eq!(code(&qtoric(&["verify", "det", "--n", "9"])), 2);
    assert_eq!(code(&qtoric(&["verify", "det", "--theta", "/nonexistent/theta.json"])), 2);
    assert_eq!(code(&qtoric(&["bogus"])), 2);
}

#[test]
fn timing_flag() {
    let v = json(&qtoric(&["verify", "det", "--n", "2", "--timing"]));
    assert!(v["elapsed_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn numeric_theta_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"n": 3, "theta": [[0, 0.3, -1.1], [-0.3, 0, 0.7], [1.1, -0.7, 0]]}}"#).unwrap();
    let out = qtoric(&["verify", "det", "--theta", f.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["theta_mode"], "numeric");
    assert_eq!(v["parameters"]["n"], 3);
}

#[test]
fn specialize_random_theta() {
    let out = qtoric(&["specialize", "--suite", "det"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["max_delta"].as_f64().unwrap() < 1e-9);
}

#[test]
fn specialize_zero_theta() {
    let zero = r#"{"n": 3, "theta": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}"#;
    // integer coefficients only; star-assoc samples rationals such as 1/3
    for suite in ["det", "laplace", "minors"] {
        let out = qtoric(&["specialize", "--suite", suite, "--theta", zero]);
        assert_eq!(code(&out), 0, "{suite}");
        assert_eq!(json(&out)["max_delta"].as_f64().unwrap(), 0.0, "{suite}");
    }
}

#[test]
fn specialize_rejects_non_skew_theta() {
    let out = qtoric(&["specialize", "--theta", r#"{"n": 3, "theta": [[0, 1, 0], [1, 0, 0], [0, 0, 0]]}"#]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("skew"));
}

#[test]
fn specialize_centrality() {
    let out = qtoric(&["specialize", "--centrality"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["suite"], "centrality");
    assert_eq!(v["parameters"]["cases"], 20);
}

#[test]
fn several_suites_are_bundled() {
    let v = json(&qtoric(&["specialize", "--suite", "det", "--suite", "laplace", "--seeds", "2"]));
    assert_eq!(v["status"], "pass");
    assert_eq!(v["reports"].as_array().unwrap().len(), 2);
}

// |q| = e^15 here, so products overflow any absolute tolerance.
#[test]
fn ill_conditioned_theta_fails_identities() {
    let big = r#"{"n": 3, "theta": [[0, [0, 30], 0], [[0, -30], 0, 0], [0, 0, 0]]}"#;
    let out = qtoric(&["specialize", "--suite", "det", "--theta", big]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["status"], "fail");
}

#[test]
fn jobs_flag_keeps_output() {
    let a = qtoric(&["--jobs", "1", "verify", "star-assoc"]);
    let b = qtoric(&["--jobs", "4", "verify", "star-assoc"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
