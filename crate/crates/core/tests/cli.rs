use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bergman-muntz"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn row_value(v: &Value, k: usize) -> (f64, f64) {
    let z = &v["rows"][k]["value"];
    (z[0].as_f64().unwrap(), z[1].as_f64().unwrap())
}

#[test]
fn transform_of_constant_is_one() {
    let out = run_stdin(
        &["transform", "--input", "-", "--grid", "1,2+i"],
        r#"[{"lambda": [1, 0], "coeff": [1, 0]}]"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for k in 0..2 {
        let (re, im) = row_value(&v, k);
        assert!((re - 1.0).abs() < 1e-12 && im.abs() < 1e-12);
    }
}

#[test]
fn transform_of_zeta_uses_the_shifted_factorial() {
    // ζ ↦ (z+1)/2, so 2 at z = 3.
    let out = run_stdin(
        &["transform", "--input", "-", "--grid", "3"],
        r#"[{"lambda": [2, 0], "coeff": [1, 0]}]"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let (re, _) = row_value(&json(&out), 0);
    assert!((re - 2.0).abs() < 1e-12, "{re}");
}

#[test]
fn transform_pole_is_a_row_error() {
    // ζ^(−1/2) has a pole of its transform at z = −1/2.
    let out = run_stdin(
        &["transform", "--input", "-", "--grid", "1,-0.5", "--format", "csv"],
        r#"[{"lambda": [0.5, 0], "coeff": [1, 0]}]"#,
    );
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].ends_with(','));
    assert!(!lines[2].ends_with(','));
}

#[test]
fn malformed_json_is_a_parse_error() {
    let out = run_stdin(&["transform", "--input", "-", "--grid", "1"], r#"[{"lambda": [1, 0"#);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line") && err.contains("column"), "{err}");
}

#[test]
fn kernels_at_one() {
    let v = json(&run(&["kernel", "--space", "m2", "--z", "1", "--w", "1"]));
    assert!((row_value(&v, 0).0 - 1.0 / (8.0 * PI)).abs() < 1e-15);
    let v = json(&run(&["kernel", "--space", "h", "--z", "1", "--w", "1"]));
    assert!((row_value(&v, 0).0 - 1.0 / (2.0 * PI)).abs() < 1e-15);
    let out = run(&["kernel", "--space", "m2", "--z", "-1-i", "--w", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(json(&out)["rows"][0]["error"].is_string());
}

#[test]
fn norm_constructors() {
    let v = json(&run(&["norm", "kernel", "--w", "1"]));
    let total = v["norm"]["total"].as_f64().unwrap();
    assert!((total - 1.0 / (8.0 * PI)).abs() < 1e-6 / (8.0 * PI));
    assert_eq!(v["norm"]["converged"], Value::Bool(true));

    assert_eq!(
        json(&run(&["norm", "gamma", "1", "1.0"]))["profile"]["verdict"],
        "Diverging"
    );
    assert_eq!(
        json(&run(&["norm", "gamma", "1", "0.5"]))["profile"]["verdict"],
        "Converging"
    );

    let v = json(&run(&[
        "norm",
        "mellin",
        "--phi",
        r#"{"kind": "power_exp", "a": 1, "b": 4}"#,
    ]));
    assert!((v["isometry"]["rhs"].as_f64().unwrap() - 1.0 / 36.0).abs() < 1e-6);
    assert_eq!(
        run(&["norm", "mellin", "--phi", r#"{"kind": "power_exp", "a": 1, "b": 0.5}"#])
            .status
            .code(),
        Some(3)
    );

    let v = json(&run(&["norm", "pw", "--psi", r#"{"kind": "gauss_double_exp"}"#]));
    assert!(v["isometry"]["rel_err"].as_f64().unwrap() < 1e-3);
}

#[test]
fn sequence_verdicts() {
    let cases = [
        (
            r#"{"rule": {"kind": "arith", "params": {"a": 1}, "r_max": 1e5}}"#,
            "UniquenessSufficient",
        ),
        (
            r#"{"rule": {"kind": "arith", "params": {"a": 3}, "r_max": 1e5}}"#,
            "ZeroSetSufficientDensity",
        ),
        (
            r#"{"rule": {"kind": "power", "params": {"offset": [2, 0], "alpha": 0.75, "theta": 1.5707963267948966}, "r_max": 1e4}}"#,
            "ZeroSetSufficientBlaschke",
        ),
    ];
    for (input, verdict) in cases {
        let out = run_stdin(&["sequence", "--input", "-"], input);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["verdict"], verdict, "{input}");
    }
}

#[test]
fn sequence_csv_is_the_ratio_curve() {
    let out = run_stdin(
        &["sequence", "--input", "-", "--format", "csv"],
        r#"{"rule": {"kind": "arith", "params": {"a": 1}, "r_max": 1e4}}"#,
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["R", "carleman_ratio"]
    );
    let rows: Vec<(f64, f64)> = rdr.deserialize().map(|r| r.unwrap()).collect();
    assert!(rows.len() > 3);
    assert!(rows.windows(2).all(|w| w[1].0 > w[0].0));
}

#[test]
fn witness_vanishes_on_the_sequence() {
    let out = run_stdin(
        &["witness", "--input", "-", "--delta", "0.8", "--grid", "3,1.5"],
        r#"{"rule": {"kind": "arith", "params": {"a": 3}, "r_max": 3e4}}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["max_abs_on_sequence"].as_f64().unwrap(), 0.0);
    assert_eq!(v["values"][0]["value"][0].as_f64().unwrap(), 0.0);
    assert!(v["values"][1]["value"][0].as_f64().unwrap() > 0.1);
}

#[test]
fn carleman_residual_is_flat_for_sinc() {
    let v = json(&run(&["carleman", "--radii", "5,10,20,40"]));
    assert!(v["residual_total_variation"].as_f64().unwrap() < 2.0);
    assert_eq!(run(&["carleman", "--function", "product"]).status.code(), Some(1));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(run(&["verify", "gamma"]).status.code(), Some(0));
    let out = run(&["--omega-n", "5", "verify", "m2"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    let iso = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "Paley-Wiener isometry")
        .unwrap();
    assert_eq!(iso["passed"], Value::Bool(false));
    let out = run(&["verify", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["kernel", "--space", "m2", "--z", "1+"]).status.code(), Some(1));
    assert_eq!(run(&["--format", "xml", "verify", "gamma"]).status.code(), Some(1));
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.toml",
        "omega_truncation = 5\noutput_format = \"csv\"\n",
    );
    let out = run(&["--config", &cfg, "verify", "m2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("suite,check,passed,detail"));
    // Flags override the file.
    let out = run(&[
        "--config",
        &cfg,
        "--format",
        "json",
        "--omega-n",
        "40",
        "verify",
        "gamma",
    ]);
    assert_eq!(out.status.code(), Some(0));
    json(&out);
    let bad = write(dir.path(), "bad.toml", "omega_truncation = \"many\"\n");
    assert_eq!(run(&["--config", &bad, "verify", "gamma"]).status.code(), Some(1));
}

#[test]
fn out_flag_writes_file_and_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let seq = write(
        dir.path(),
        "seq.json",
        r#"{"rule": {"kind": "arith", "params": {"a": 3}, "r_max": 1e5}}"#,
    );
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&["sequence", "--input", &seq, "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let first = fs::read(&a).unwrap();
    assert!(!first.is_empty());
    assert_eq!(first, fs::read(&b).unwrap());
}
