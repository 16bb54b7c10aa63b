//! End-to-end checks of the `qic` binary: exit codes, report shape and
//! determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qic"))
        .args(args)
        .output()
        .expect("failed to launch the qic binary")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("qic-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn bell_json() -> PathBuf {
    temp_file(
        "bell.json",
        r#"{"n_qubits": 2, "amps": [[0.7071067811865476, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071067811865476, 0.0]]}"#,
    )
}

#[test]
fn ghz_demo_reports_capsule_operators_and_fisher() {
    let out = qic(&["demo", "ghz", "--theta", "0.3", "--no-timestamp"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let fisher = report["fisher"]["analytic"].as_f64().unwrap();
    assert!((fisher - 4.0).abs() < 1e-9);
    assert_eq!(report["capsule_1"]["x"]["terms"][0]["letters"], "XXI");
    assert_eq!(report["capsule_1"]["y"]["terms"][0]["letters"], "YXI");
    assert_eq!(report["capsule_1"]["z"]["terms"][0]["letters"], "ZII");
    assert_eq!(report["capsule_2"]["x"]["terms"][0]["letters"], "XIX");
    assert_eq!(report["capsules_equivalent"], false);
    assert!(
        report["extraction_1"]["residual_fisher"]
            .as_f64()
            .unwrap()
            .abs()
            < 1e-8
    );
    // Tolerances are embedded for auditability.
    assert!(report["tolerances"]["pure"].as_f64().is_some());
}

#[test]
fn bell_demo_shows_delocalization_and_maximal_entanglement() {
    let out = qic(&["demo", "bell", "--no-timestamp"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["delocalization_residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(report["max_entanglement"]["possible"], true);
    let purity_b = report["max_entanglement"]["purity_b"].as_f64().unwrap();
    assert!((purity_b - 0.5).abs() < 1e-8);
    assert_eq!(report["capsule"]["criteria"]["passes"], true);
}

#[test]
fn find_qic_from_state_file_passes_criteria() {
    let state = bell_json();
    let out = qic(&[
        "find-qic",
        "--state",
        state.to_str().unwrap(),
        "--no-timestamp",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["criteria"]["passes"], true);
    let probs = report["schmidt_probs"].as_array().unwrap();
    assert!((probs[0].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn sweep_csv_matches_the_curve_formula() {
    let state = bell_json();
    let out = qic(&[
        "sweep-g",
        "--state",
        state.to_str().unwrap(),
        "--g-points",
        "64",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "g,predicted_purity,measured_purity");
    let mut rows = 0;
    for line in lines {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        let (g, predicted, measured) = (fields[0], fields[1], fields[2]);
        assert!((predicted - measured).abs() < 1e-8, "g={g}");
        // Bell state: purity = ½(1 + ½ − ½cos(4g − π)).
        let expected = 0.5 * (1.5 + 0.5 * (4.0 * g - std::f64::consts::PI).cos());
        assert!((predicted - expected).abs() < 1e-9, "g={g}");
        rows += 1;
    }
    assert_eq!(rows, 64);
    assert!(!text.contains('\r'));
}

#[test]
fn extract_report_covers_the_theta_grid() {
    let out = qic(&["extract", "--demo", "ghz", "--no-timestamp"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["all_capsule_ok"], true);
    let points = report["points"].as_array().unwrap();
    assert_eq!(points.len(), 32);
    for point in points {
        assert!((point["readout_purity"].as_f64().unwrap() - 1.0).abs() < 1e-8);
        assert!(point["residual_fisher"].as_f64().unwrap().abs() < 1e-8);
    }
}

#[test]
fn evolve_emits_a_trajectory_csv() {
    let out = qic(&[
        "evolve",
        "--demo",
        "ghz",
        "--preset",
        "ising",
        "--t-max",
        "1.0",
        "--t-points",
        "3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "t,fisher,purity,mean_weight,weight_0,weight_1,weight_2,weight_3"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let fields: Vec<f64> = row.split(',').map(|f| f.parse().unwrap()).collect();
        assert!((fields[1] - 4.0).abs() < 1e-6, "fisher drifted: {row}");
        assert!(fields[2] >= 1.0 - 1e-8, "confinement broke: {row}");
        let weight_sum: f64 = fields[4..].iter().sum();
        assert!((weight_sum - 3.0).abs() < 1e-9);
    }
}

#[test]
fn verify_accepts_valid_and_rejects_invalid_states() {
    let good = bell_json();
    let out = qic(&[
        "verify",
        "--state",
        good.to_str().unwrap(),
        "--no-timestamp",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["valid"], true);

    let bad = temp_file(
        "bad.json",
        r#"{"n_qubits": 1, "amps": [[0.5, 0.0], [0.0, 0.0]]}"#,
    );
    let out = qic(&["verify", "--state", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("norm"), "stderr: {stderr}");

    let malformed = temp_file("malformed.json", "{not json");
    let out = qic(&["verify", "--state", malformed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn input_sources_are_mutually_exclusive_and_required() {
    let state = bell_json();
    let out = qic(&[
        "find-qic",
        "--state",
        state.to_str().unwrap(),
        "--haar",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = qic(&["find-qic"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = qic(&[
        "demo",
        "haar",
        "--seed",
        "9",
        "--qubits",
        "3",
        "--no-timestamp",
    ]);
    let b = qic(&[
        "demo",
        "haar",
        "--seed",
        "9",
        "--qubits",
        "3",
        "--no-timestamp",
    ]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);

    let c = qic(&[
        "demo",
        "haar",
        "--seed",
        "10",
        "--qubits",
        "3",
        "--no-timestamp",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn output_flag_writes_the_report_to_disk() {
    let dir = std::env::temp_dir().join("qic-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fisher-report.json");
    let out = qic(&[
        "fisher",
        "--demo",
        "bell",
        "--no-timestamp",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((report["fisher"]["analytic"].as_f64().unwrap() - 4.0).abs() < 1e-9);
}
