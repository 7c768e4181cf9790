// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::process::{Command, Output};

fn qmb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmb"))
        .args(args)
        .env_remove("QMB_THREADS")
        .output()
        .expect("run qmb")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "qmb failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

const ANCHOR: [&str; 10] = [
    "--model",
    "su2_qutrit",
    "--set",
    "alpha=pi/4",
    "--set",
    "B=pi",
    "--set",
    "theta=0",
    "--set",
    "phi=0",
];

#[test]
fn compute_qutrit_anchor() {
    let mut args = vec!["compute"];
    args.extend(ANCHOR);
    args.extend(["--outputs", "c_t,c_h", "--format", "json"]);
    let text = stdout(&qmb(&args));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let ch = v[0]["c_h"].as_f64().unwrap();
    assert!((ch - (11.0 + 2f64.sqrt()) / 8.0).abs() < 1e-4, "{ch}");
    assert_eq!(v[0]["flags"], serde_json::json!([]));
}

#[test]
fn two_by_two_sweep_has_five_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let out = qmb(&[
        "sweep",
        "--model",
        "su2_qubit",
        "--set",
        "alpha=pi/2",
        "--set",
        "t=5",
        "--axis",
        "theta=0.3:0.6:2",
        "--axis",
        "B=0.5:1:2",
        "--outputs",
        "gaps",
        "--out",
        path.to_str().unwrap(),
    ]);
    stdout(&out);
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert_eq!(text.lines().next().unwrap(), "theta,B,gap_h,gap_t,gap_r,flags");
    assert!(!text.contains('\r'));
}

#[test]
fn empty_outputs_are_rejected() {
    let mut args = vec!["compute"];
    args.extend(ANCHOR);
    args.extend(["--outputs", ""]);
    let out = qmb(&args);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no outputs"));
}

#[test]
fn missing_parameter_is_named() {
    let out = qmb(&["compute", "--model", "su2_qubit", "--set", "alpha=1", "--set", "B=1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("`theta`"));
}

#[test]
fn sweeps_are_byte_identical_across_thread_counts() {
    let base = [
        "sweep",
        "--model",
        "su2_qutrit",
        "--set",
        "alpha=pi/4",
        "--axis",
        "B=2.8:3.4:3",
        "--axis",
        "theta=-0.1:0.1:3",
        "--outputs",
        "c_sld,c_h,c_t,T",
        "--seed",
        "7",
    ];
    let one = stdout(&qmb(&[&base[..], &["--threads", "1"]].concat()));
    let four = stdout(&qmb(&[&base[..], &["--threads", "4"]].concat()));
    assert_eq!(one, four);
    assert_eq!(one.lines().count(), 10);
}

#[test]
fn config_file_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(
        &cfg,
        "# anchor point\nmodel = su2_qutrit\nset = alpha=pi/4\nset = B=pi\nset = theta=0\noutputs = c_sld,c_t\nformat = json\n",
    )
    .unwrap();
    let from_file = stdout(&qmb(&["compute", "--config", cfg.to_str().unwrap()]));
    assert!(from_file.trim_start().starts_with('['));
    let overridden = stdout(&qmb(&[
        "compute",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
        "--outputs",
        "T",
    ]));
    assert_eq!(overridden.lines().next().unwrap(), "T,flags");
}

#[test]
fn preset_requires_bloch_settings_and_unknown_preset_fails() {
    let out = qmb(&["preset", "fig2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("`ry`"));
    let out = qmb(&["preset", "fig7"]);
    assert!(!out.status.success());
}

#[test]
fn preset_with_coarse_axes() {
    let text = stdout(&qmb(&[
        "preset",
        "fig2",
        "--set",
        "ry=0.3",
        "--set",
        "rz=0.4",
        "--axis",
        "rx=0.2:0.6:3",
        "--axis",
        "xi=0.5:2.5:2",
    ]));
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "rx,xi,gap_h,gap_t,gap_r,flags");
    assert_eq!(lines.count(), 6);
}

#[test]
fn fig1_symmetric_point_without_optimization() {
    // pure state on the equator with a balanced rotation gives Q₁₁ = Q₂₂, Q₁₂ = 0
    let text = stdout(&qmb(&[
        "preset",
        "fig1",
        "--no-optimize",
        "--set",
        "alpha=pi/2",
        "--set",
        "gamma=pi/4",
        "--set",
        "theta=pi/2",
        "--set",
        "phi=0",
        "--axis",
        "omega=0.5:2:3:log",
    ]));
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').take(3).map(|x| x.parse().unwrap()).collect())
        .collect();
    let mid = &rows[1];
    assert_eq!(mid[0], 1.0);
    assert!((mid[1] - mid[2]).abs() < 1e-9, "R = {}, T = {}", mid[1], mid[2]);
    assert!(rows[0][2] < mid[2] && rows[2][2] < mid[2]);
}
