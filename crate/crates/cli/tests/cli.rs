//! End-to-end tests driving the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_convex-order")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin()).current_dir(dir).args(args).output().expect("binary runs")
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("convex-order-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const ABSVAL: &str =
    r#"{"n": 1, "pieces": [{"phi": [1.0], "c": 0.0}, {"phi": [-1.0], "c": 0.0}]}"#;

#[test]
fn conjugate_twice_roundtrips() {
    let dir = tmpdir("conj");
    std::fs::write(dir.join("absval.json"), ABSVAL).unwrap();
    let out = run_in(&dir, &["conjugate", "absval.json"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let out = run_in(&dir, &["conjugate", "absval.star.json", "-o", "back.json"]);
    assert!(out.status.success());
    let back = std::fs::read_to_string(dir.join("back.json")).unwrap();
    let f = convex_order::io::function_from_json(&back).unwrap();
    for x in [-2.0f64, -0.5, 0.0, 1.5] {
        let v = f.eval(&nalgebra::DVector::from_row_slice(&[x])).unwrap();
        assert!((v - x.abs()).abs() < 1e-9);
    }
}

#[test]
fn conjugate_grid_csv_roundtrip() {
    let dir = tmpdir("gridconj");
    // |x| sampled on [-2, 2]: conjugate is the indicator of [-1, 1]
    let mut csv = String::from("x,value\n");
    let n = 81;
    for i in 0..n {
        let x = -2.0 + 4.0 * i as f64 / (n - 1) as f64;
        csv.push_str(&format!("{},{}\n", x, x.abs()));
    }
    std::fs::write(dir.join("abs.csv"), csv).unwrap();
    let out = run_in(&dir, &["conjugate", "abs.csv"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let star = std::fs::read_to_string(dir.join("abs.star.csv")).unwrap();
    let g = convex_order::io::grid_from_csv(&star).unwrap();
    // zero across the slope range [-1, 1]
    for v in g.values() {
        assert!(v.abs() < 1e-9, "value {v}");
    }
}

#[test]
fn identify_writes_residuals_file() {
    let dir = tmpdir("resid");
    let out = run_in(
        &dir,
        &[
            "identify", "--mode", "preserving", "--n", "2", "--oracle", "builtin:random",
            "--seed", "4", "--audit", "2", "--validate", "4",
        ],
    );
    assert!(out.status.success());
    let resid: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("transform.residuals.json")).unwrap(),
    )
    .unwrap();
    assert!(resid["residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn verify_suite_exits_zero_and_writes_report() {
    let dir = tmpdir("verify");
    let out = run_in(&dir, &["verify", "--suite", "fenchel", "--seed", "7"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["total_violations"], serde_json::json!(0));
    assert_eq!(report["seed"], serde_json::json!(7));
}

#[test]
fn verify_report_is_byte_deterministic() {
    let dir1 = tmpdir("det1");
    let dir2 = tmpdir("det2");
    for dir in [&dir1, &dir2] {
        let out = run_in(dir, &["verify", "--suite", "duality", "--seed", "11"]);
        assert!(out.status.success());
    }
    let a = std::fs::read(dir1.join("report.json")).unwrap();
    let b = std::fs::read(dir2.join("report.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn identify_builtin_recovers_generator() {
    let dir = tmpdir("identify");
    let out = run_in(
        &dir,
        &[
            "identify",
            "--mode",
            "preserving",
            "--n",
            "3",
            "--oracle",
            "builtin:random",
            "--seed",
            "3",
            "--audit",
            "4",
            "--validate",
            "8",
        ],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let err = report["generator_parameter_error"].as_f64().unwrap();
    assert!(err <= 1e-8, "parameter error {err}");
    assert!(dir.join("transform.json").exists());
}

#[test]
fn apply_then_identify_reversing() {
    let dir = tmpdir("revapply");
    std::fs::write(dir.join("absval.json"), ABSVAL).unwrap();
    // identity reversing transform = the Fenchel transform itself
    std::fs::write(
        dir.join("fenchel.json"),
        r#"{"alpha": 1.0, "U": [[1.0]], "shift": [0.0], "phi0": [0.0], "r0": 0.0, "mode": "reversing"}"#,
    )
    .unwrap();
    let out = run_in(&dir, &["apply", "fenchel.json", "absval.json", "-o", "image.json"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let f = convex_order::io::function_from_json(
        &std::fs::read_to_string(dir.join("image.json")).unwrap(),
    )
    .unwrap();
    // the image is the indicator of [-1, 1]
    assert!(f.eval(&nalgebra::DVector::from_row_slice(&[0.3])).unwrap().abs() < 1e-9);
    assert_eq!(
        f.eval(&nalgebra::DVector::from_row_slice(&[1.3])).unwrap(),
        f64::INFINITY
    );
}

#[test]
fn reconstruct_builtin_subspace() {
    let dir = tmpdir("reconstruct");
    let out = run_in(
        &dir,
        &[
            "reconstruct",
            "--lattice",
            "subspace",
            "--n",
            "3",
            "--oracle",
            "builtin:random",
            "--seed",
            "5",
            "--validate",
            "20",
        ],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert!(report["generator_error"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn emit_requests_then_replay_batch() {
    let dir = tmpdir("batch");
    // trace the probe schedule
    let out = run_in(
        &dir,
        &[
            "reconstruct",
            "--lattice",
            "segments",
            "--n",
            "2",
            "--oracle",
            "builtin:random",
            "--seed",
            "9",
            "--validate",
            "6",
            "--emit-requests",
            "requests.jsonl",
        ],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let requests = std::fs::read_to_string(dir.join("requests.jsonl")).unwrap();
    assert!(requests.lines().count() > 0);

    // fill responses with a known linear map acting on the V-representation
    let a = nalgebra::DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]); // rotation
    let mut lines = Vec::new();
    for line in requests.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let wire: convex_order::io::PolyhedronWire =
            serde_json::from_value(v["request"].clone()).unwrap();
        let body = convex_order::io::polyhedron_from_wire(&wire, 2).unwrap();
        let image = body.linear_image(&a).unwrap();
        let resp = serde_json::to_value(convex_order::io::polyhedron_to_wire(&image)).unwrap();
        lines.push(
            serde_json::to_string(&serde_json::json!({"request": v["request"], "response": resp}))
                .unwrap(),
        );
    }
    std::fs::write(dir.join("tape.jsonl"), lines.join("\n") + "\n").unwrap();

    let out = run_in(
        &dir,
        &[
            "reconstruct",
            "--lattice",
            "segments",
            "--n",
            "2",
            "--oracle",
            "batch:tape.jsonl",
            "--seed",
            "9",
            "--validate",
            "6",
        ],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    // recovered matrix equals the rotation up to sign
    let m = report["matrix"].as_array().unwrap();
    let m00 = m[0].as_array().unwrap()[0].as_f64().unwrap();
    let m01 = m[0].as_array().unwrap()[1].as_f64().unwrap();
    assert!(m00.abs() < 1e-9);
    assert!((m01.abs() - 1.0).abs() < 1e-9);
}

#[test]
fn identify_emit_then_replay_reversing() {
    let dir = tmpdir("revbatch");
    let args_common = [
        "identify",
        "--mode",
        "reversing",
        "--n",
        "1",
        "--seed",
        "13",
        "--audit",
        "3",
        "--validate",
        "5",
    ];
    let mut emit_args: Vec<&str> = args_common.to_vec();
    emit_args.extend(["--oracle", "builtin:random", "--emit-requests", "requests.jsonl"]);
    let out = run_in(&dir, &emit_args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    // answer every request with the Fenchel transform (the canonical
    // order-reversing black box)
    let requests = std::fs::read_to_string(dir.join("requests.jsonl")).unwrap();
    let mut lines = Vec::new();
    for line in requests.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let wire: convex_order::io::FunctionWire =
            serde_json::from_value(v["request"].clone()).unwrap();
        let f = convex_order::io::function_from_wire(&wire).unwrap();
        let image = convex_order::fenchel::conjugate_pl(&f).unwrap();
        let resp =
            serde_json::to_value(convex_order::io::function_to_wire(&image)).unwrap();
        lines.push(
            serde_json::to_string(&serde_json::json!({"request": v["request"], "response": resp}))
                .unwrap(),
        );
    }
    std::fs::write(dir.join("tape.jsonl"), lines.join("\n") + "\n").unwrap();

    let mut replay_args: Vec<&str> = args_common.to_vec();
    replay_args.extend(["--oracle", "batch:tape.jsonl", "-o", "t.json"]);
    let out = run_in(&dir, &replay_args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let t = convex_order::io::transform_from_json(
        &std::fs::read_to_string(dir.join("t.json")).unwrap(),
    )
    .unwrap();
    // the pure Fenchel transform has identity parameters in reversing mode
    assert!((t.alpha() - 1.0).abs() < 1e-8);
    assert!((t.matrix()[(0, 0)] - 1.0).abs() < 1e-8);
    assert!(t.shift().amax() < 1e-8);
    assert!(t.phi0().amax() < 1e-8);
    assert!(t.r0().abs() < 1e-8);
}

#[test]
fn missing_batch_response_exits_two() {
    let dir = tmpdir("missing");
    std::fs::write(dir.join("tape.jsonl"), "").unwrap();
    let out = run_in(
        &dir,
        &[
            "reconstruct",
            "--lattice",
            "segments",
            "--n",
            "2",
            "--oracle",
            "batch:tape.jsonl",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_json_exits_two() {
    let dir = tmpdir("badjson");
    std::fs::write(dir.join("bad.json"), "{not json").unwrap();
    let out = run_in(&dir, &["conjugate", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse") || err.contains("expected"), "stderr: {err}");
}

#[test]
fn plot_writes_samples() {
    let dir = tmpdir("plot");
    std::fs::write(dir.join("absval.json"), ABSVAL).unwrap();
    let out = run_in(&dir, &["plot", "absval.json", "--grid", "-2:2:5", "-o", "out.csv"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("out.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "x,value");
    assert!(lines[1].starts_with("-2,2"));
    assert!(lines[3].starts_with("0,0"));
}

#[test]
fn bench_legendre_reports_speedup() {
    let dir = tmpdir("bench");
    let out = run_in(&dir, &["bench", "legendre", "--n", "5000", "--m", "256"]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(report["bit_identical"], serde_json::json!(true));
    assert!(report["speedup"].as_f64().unwrap() > 1.0);
}
