use std::f64::consts::FRAC_1_SQRT_2;
use std::process::{Command, Output};

use serde_json::Value;

fn pathspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathspin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = pathspin(&all);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).expect("single JSON document");
    assert_eq!(v["schema_version"], 1);
    v
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn enumerate_balanced_splitter_is_perfect() {
    let v = json(&["enumerate", "--alpha", "0.70710678", "--gamma", "0.6"]);
    let branches = v["branches"].as_array().unwrap();
    assert_eq!(branches.len(), 16);
    for b in branches {
        assert!((b["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-7, "{b}");
    }
    for key in ["alpha", "beta", "gamma", "delta", "phase", "seed"] {
        assert!(v["config"].get(key).is_some(), "{key}");
    }
    let s = &v["summary"];
    assert!(
        (s["f_avg_formula"].as_f64().unwrap() - s["f_avg_enumerated"].as_f64().unwrap()).abs()
            < 1e-10
    );
}

#[test]
fn enumerate_first_row_probability() {
    let out = pathspin(&[
        "enumerate",
        "--alpha",
        "0.6",
        "--gamma",
        "0.8",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(
        header,
        [
            "m2",
            "ma",
            "bob_path",
            "bob_spin",
            "probability",
            "correction",
            "out_amp0_re",
            "out_amp0_im",
            "out_amp1_re",
            "out_amp1_im",
            "fidelity"
        ]
    );
    assert_eq!(rows.len(), 16);
    assert_eq!(&rows[0][..4], ["0", "0", "a", "0"]);
    let p: f64 = rows[0][4].parse().unwrap();
    // (α²γ² + β²δ²)/2 · 1/4 with α = δ = 0.6, β = γ = 0.8
    let expected = (0.36 * 0.64 + 0.64 * 0.36) / 2.0 / 4.0;
    assert!((p - expected).abs() < 1e-12);
    assert!(stdout(&out).ends_with('\n') && !stdout(&out).contains('\r'));
}

#[test]
fn csv_values_round_trip_at_fifteen_digits() {
    let v = json(&["enumerate", "--alpha", "0.3", "--gamma", "0.45"]);
    let out = pathspin(&[
        "enumerate",
        "--alpha",
        "0.3",
        "--gamma",
        "0.45",
        "--format",
        "csv",
    ]);
    let (_, rows) = csv_rows(&stdout(&out));
    for (row, b) in rows.iter().zip(v["branches"].as_array().unwrap()) {
        let exact = b["probability"].as_f64().unwrap();
        let printed: f64 = row[4].parse().unwrap();
        let rounded: f64 = format!("{exact:.14e}").parse().unwrap();
        assert_eq!(printed, rounded);
        let fid: f64 = row[10].parse().unwrap();
        let rounded: f64 = format!("{:.14e}", b["fidelity"].as_f64().unwrap())
            .parse()
            .unwrap();
        assert_eq!(fid, rounded);
    }
}

#[test]
fn enumerate_table_lists_unitaries() {
    let out = pathspin(&["enumerate", "--alpha", "0.6", "--gamma", "0.8"]);
    let text = stdout(&out);
    assert!(text.contains("Unitary") && text.contains("Final state"));
    assert_eq!(text.lines().filter(|l| l.starts_with("|1>_2")).count(), 8);
}

#[test]
fn out_of_range_alpha_is_a_usage_error() {
    let out = pathspin(&["enumerate", "--alpha", "2.0", "--gamma", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--alpha"));
    let out = pathspin(&["enumerate", "--alpha", "0.5", "--gamma", "-0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--gamma"));
    let out = pathspin(&["enumerate", "--gamma", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(
        pathspin(&["enumerate", "--alpha", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(pathspin(&["nonsense"]).status.code(), Some(2));
    assert_eq!(pathspin(&["--help"]).status.code(), Some(0));
}

#[test]
fn phased_input_has_no_closed_form_average() {
    let v = json(&[
        "enumerate",
        "--alpha",
        "0.70710678",
        "--gamma",
        "0.6",
        "--phase",
        "-1.2",
    ]);
    assert!(v["summary"]["f_avg_formula"].is_null());
    assert!((v["summary"]["f_avg_enumerated"].as_f64().unwrap() - 1.0).abs() < 1e-7);
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let args = [
        "simulate", "--alpha", "0.6", "--gamma", "0.8", "--runs", "1", "--seed", "7",
    ];
    let a = pathspin(&args);
    let b = pathspin(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let many = [
        "simulate", "--alpha", "0.6", "--gamma", "0.8", "--runs", "50", "--format", "csv",
    ];
    let x = pathspin(&[&many[..], &["--seed", "1"]].concat());
    let y = pathspin(&[&many[..], &["--seed", "2"]].concat());
    assert_ne!(x.stdout, y.stdout);
    assert_eq!(csv_rows(&stdout(&x)).1.len(), 50);
}

#[test]
fn simulate_rejects_bad_run_counts() {
    let out = pathspin(&[
        "simulate", "--alpha", "0.6", "--gamma", "0.8", "--runs", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--runs"));
    let out = pathspin(&[
        "simulate", "--alpha", "0.6", "--gamma", "0.8", "--runs", "-3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = pathspin(&[
        "simulate",
        "--alpha",
        "0.6",
        "--gamma",
        "0.8",
        "--runs",
        "3",
        "--transcript",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_transcripts() {
    let v = json(&[
        "simulate",
        "--alpha",
        "0.6",
        "--gamma",
        "0.8",
        "--runs",
        "3",
        "--transcript",
    ]);
    let runs = v["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 3);
    for (i, r) in runs.iter().enumerate() {
        assert_eq!(r["run"], i as u64);
        assert_eq!(
            r["transcript"]["phases"]
                .as_array()
                .unwrap()
                .last()
                .unwrap(),
            "Corrected"
        );
    }
}

#[test]
fn aggregate_mean_fidelity_within_three_sigma() {
    let v = json(&[
        "simulate",
        "--alpha",
        "0.6",
        "--gamma",
        "0.8",
        "--runs",
        "100000",
        "--seed",
        "11",
        "--aggregate",
    ]);
    let s = &v["summary"];
    let (a, g) = (0.6f64, 0.8f64);
    let (b, d) = (0.8f64, 0.6f64);
    let f_avg = g.powi(4) + d.powi(4) + 4.0 * a * b * g * g * d * d;
    let mean = s["mean_fidelity"].as_f64().unwrap();
    let se = s["standard_error"].as_f64().unwrap();
    assert!((mean - f_avg).abs() <= 3.0 * se, "{mean} vs {f_avg} ± {se}");
    let total: u64 = v["branches"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["count"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 100_000);
}

#[test]
fn sweep_rows_and_known_values() {
    let out = pathspin(&["sweep", "--alpha-steps", "3", "--gamma-steps", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["alpha", "gamma", "f_avg"]);
    assert_eq!(rows.len(), 9);
    let parsed: Vec<[f64; 3]> = rows
        .iter()
        .map(|r| {
            [
                r[0].parse().unwrap(),
                r[1].parse().unwrap(),
                r[2].parse().unwrap(),
            ]
        })
        .collect();
    for [a, _, f] in &parsed {
        if (a - FRAC_1_SQRT_2).abs() < 1e-12 {
            assert!((f - 1.0).abs() < 1e-10);
        }
    }
    let corner = parsed
        .iter()
        .find(|[a, g, _]| (a - 1.0).abs() < 1e-12 && (g - FRAC_1_SQRT_2).abs() < 1e-12)
        .expect("row (1, 1/√2)");
    assert!((corner[2] - 0.5).abs() < 1e-12);
}

#[test]
fn sweep_writes_file_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let out = pathspin(&[
        "sweep",
        "--alpha-steps",
        "4",
        "--gamma-steps",
        "5",
        "--spacing",
        "amplitude",
        "--validate",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv_rows(&text).1.len(), 20);
}

#[test]
fn sweep_errors() {
    assert_eq!(
        pathspin(&["sweep", "--alpha-steps", "1"]).status.code(),
        Some(2)
    );
    let out = pathspin(&["sweep", "--out", "/nonexistent-dir/grid.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_default_passes() {
    let out = pathspin(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("16 branches × 441 grid points verified"));
    let v = json(&["verify"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["summary"]["grid_points"], 441);
}

#[test]
fn verify_reports_failures() {
    let out = pathspin(&["verify", "--tolerance", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));

    let out = pathspin(&["verify", "--inject-fault", "1,0,b,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stdout(&out).contains("(m2=1, ma=0, path=b, spin=0)"),
        "{}",
        stdout(&out)
    );

    assert_eq!(
        pathspin(&["verify", "--tolerance", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        pathspin(&["verify", "--inject-fault", "9,9"]).status.code(),
        Some(2)
    );
}

#[test]
fn eve_sees_splitter_weights_only() {
    let v = json(&["eve", "--alpha", "0.6"]);
    let diag: Vec<f64> = v["diagonal"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!((diag[0b10] - 0.36).abs() < 1e-12);
    assert!((diag[0b01] - 0.64).abs() < 1e-12);
    assert!(v["input_independence"].as_f64().unwrap() < 1e-12);

    let v = json(&["eve", "--alpha", "0.70710678"]);
    assert!((v["diagonal"][0b10].as_f64().unwrap() - 0.5).abs() < 1e-8);
    assert!((v["diagonal"][0b01].as_f64().unwrap() - 0.5).abs() < 1e-8);
    assert!(v["premature_leak"].as_f64().unwrap() > 0.1);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, r#"{"alpha": 0.6, "gamma": 0.8, "format": "json"}"#).unwrap();
    let cfg = path.to_str().unwrap();

    let out = pathspin(&["enumerate", "--config", cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["config"]["alpha"], 0.6);

    let out = pathspin(&[
        "enumerate",
        "--config",
        cfg,
        "--alpha",
        "0.3",
        "--format",
        "csv",
    ]);
    let (_, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 16);
    let v = json(&["enumerate", "--config", cfg, "--alpha", "0.3"]);
    assert_eq!(v["config"]["alpha"], 0.3);

    std::fs::write(&path, r#"{"alpha": 0.6, "beta": 0.8}"#).unwrap();
    assert_eq!(
        pathspin(&["enumerate", "--config", cfg]).status.code(),
        Some(2)
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        pathspin(&["enumerate", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
}
