use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn memmap(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_memmap")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn sine_csv(dir: &Path, header: bool) -> PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut text = String::new();
    if header {
        text.push_str("x,sin,cos\n");
    }
    for _ in 0..60 {
        let x: f64 = rng.random();
        writeln!(text, "{x},{},{}", (2.0 * PI * x).sin(), (2.0 * PI * x).cos()).unwrap();
    }
    let path = dir.join(if header { "with_header.csv" } else { "plain.csv" });
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn train_then_predict() {
    let dir = tempfile::tempdir().unwrap();
    let data = sine_csv(dir.path(), true);
    let model = dir.path().join("m.mmj");
    let (code, stdout, stderr) =
        memmap(&["train", "--data", s(&data), "--n-features", "1", "--out", s(&model), "--m", "10", "--header"]);
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.contains("converged = true"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("m.mmj.report.json")).unwrap()).unwrap();
    assert_eq!(report["converged"], true);
    assert!(report["beta_trace"].as_array().unwrap().len() >= 3);
    assert!(!std::fs::read_to_string(&model).unwrap().contains("\"B\""));

    // features only, same rows
    let inputs = dir.path().join("inputs.csv");
    let rows: Vec<String> = std::fs::read_to_string(&data)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    std::fs::write(&inputs, rows.join("\n")).unwrap();
    let preds = dir.path().join("p.csv");
    let (code, _, stderr) = memmap(&["predict", "--model", s(&model), "--data", s(&inputs), "--out", s(&preds)]);
    assert_eq!(code, 0, "{stderr}");
    let text = std::fs::read_to_string(&preds).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("y_hat_1,y_hat_2"));
    assert_eq!(lines.clone().count(), 60);
    assert!(lines.all(|l| l.split(',').count() == 2));

    let again = dir.path().join("p2.csv");
    memmap(&["predict", "--model", s(&model), "--data", s(&inputs), "--out", s(&again)]);
    assert_eq!(std::fs::read(&preds).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn store_b_and_aux_points() {
    let dir = tempfile::tempdir().unwrap();
    let data = sine_csv(dir.path(), false);
    let aux = dir.path().join("aux.csv");
    std::fs::write(&aux, "0.1\n0.4\n0.7\n0.9\n").unwrap();
    let model = dir.path().join("m.mmj");
    let (code, _, stderr) =
        memmap(&["train", "--data", s(&data), "--n-features", "1", "--out", s(&model), "--aux", s(&aux), "--store-b"]);
    assert_eq!(code, 0, "{stderr}");
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(json["M"], 4);
    assert_eq!(json["B"].as_array().unwrap().len(), 4 * 60);
    assert_eq!(json["a"][1].as_f64(), Some(0.4));
}

#[test]
fn empty_prediction_input_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let data = sine_csv(dir.path(), false);
    let model = dir.path().join("m.mmj");
    assert_eq!(memmap(&["train", "--data", s(&data), "--n-features", "1", "--out", s(&model), "--m", "5"]).0, 0);
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let out = dir.path().join("out.csv");
    assert_eq!(memmap(&["predict", "--model", s(&model), "--data", s(&empty), "--out", s(&out)]).0, 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "y_hat_1,y_hat_2\n");
}

#[test]
fn usage_and_io_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let data = sine_csv(dir.path(), false);
    let out = dir.path().join("m.mmj");

    let (code, _, stderr) =
        memmap(&["train", "--data", s(&data), "--n-features", "1", "--out", s(&out), "--nu", "1.5"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("nu must exceed 2"));

    let missing = dir.path().join("missing.csv");
    let (code, _, stderr) = memmap(&["train", "--data", s(&missing), "--n-features", "1", "--out", s(&out)]);
    assert_eq!(code, 2);
    assert!(stderr.contains("missing.csv"));

    let (code, _, _) = memmap(&["train", "--data", s(&data), "--n-features", "3", "--out", s(&out)]);
    assert_eq!(code, 2);

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "0.1,0.2\n0.3,x\n").unwrap();
    let (code, _, stderr) = memmap(&["train", "--data", s(&bad), "--n-features", "1", "--out", s(&out)]);
    assert_eq!(code, 2);
    assert!(stderr.contains("line 2"), "{stderr}");

    assert_eq!(memmap(&["verify", "--suite", "nonsense"]).0, 2);
    assert_eq!(memmap(&["frobnicate"]).0, 2);
    assert_eq!(memmap(&["--help"]).0, 0);
}

#[test]
fn predict_rejects_wrong_feature_count() {
    let dir = tempfile::tempdir().unwrap();
    let data = sine_csv(dir.path(), false);
    let model = dir.path().join("m.mmj");
    assert_eq!(memmap(&["train", "--data", s(&data), "--n-features", "1", "--out", s(&model), "--m", "5"]).0, 0);
    let two = dir.path().join("two.csv");
    std::fs::write(&two, "0.1,0.2\n").unwrap();
    let (code, _, stderr) =
        memmap(&["predict", "--model", s(&model), "--data", s(&two), "--out", s(&dir.path().join("o.csv"))]);
    assert_eq!(code, 2);
    assert!(stderr.contains("expects 1 features"), "{stderr}");
}

#[test]
fn verify_phi_limit_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("v.json");
    let (code, stdout, _) = memmap(&["verify", "--suite", "phi-limit", "--seed", "3", "--json-out", s(&json)]);
    assert_eq!(code, 0);
    assert!(stdout.contains("phi-limit/N20-M5"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(v.as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn verify_interpolation_prints_error() {
    let (code, stdout, _) = memmap(&["verify", "--suite", "interpolation", "--trials", "100"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("interpolation/random"));
}
