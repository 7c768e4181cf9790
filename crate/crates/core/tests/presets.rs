// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use qmb_core::sweep::parse::parse_outputs;
use qmb_core::{figure_preset, run_sweep, Axis, Output, OutputFormat};

fn coarse(name: &str, axes: [Axis; 2]) -> qmb_core::SweepSpec {
    let mut spec = figure_preset(name, &BTreeMap::new()).unwrap();
    for a in axes {
        spec.set_axis(a);
    }
    spec
}

#[test]
fn fig4_r_gap_exceeds_t_gap() {
    let spec = coarse(
        "fig4",
        [
            Axis::linear("theta", 0.2, 2.9, 6).unwrap(),
            Axis::linear("B", 0.2, 1.8, 6).unwrap(),
        ],
    );
    for row in run_sweep(&spec).unwrap().iter().filter(|r| r.flags.is_empty()) {
        let (t, r) = (row.get(Output::GapT).unwrap(), row.get(Output::GapR).unwrap());
        assert!(r > t, "gap_r {r} ≤ gap_t {t} at {:?}", row.axes);
    }
}

#[test]
fn fig5_anchor_row_has_vanishing_holevo_gap() {
    let spec = coarse(
        "fig5",
        [
            Axis::linear("theta", -0.05, 0.05, 3).unwrap(),
            Axis::linear("B", std::f64::consts::PI - 0.1, std::f64::consts::PI + 0.1, 3).unwrap(),
        ],
    );
    let rows = run_sweep(&spec).unwrap();
    let anchor = &rows[4];
    assert_eq!(anchor.axis("theta"), Some(0.0));
    let gap = anchor.get(Output::GapT).unwrap() - anchor.get(Output::GapH).unwrap();
    assert!(gap.abs() <= 1e-4, "{gap}");
    assert!((anchor.get(Output::CH).unwrap() - (11.0 + 2f64.sqrt()) / 8.0).abs() < 1e-6);
    assert!(anchor.get(Output::T).unwrap() > 0.0);
}

#[test]
fn fig5_rows_roundtrip_through_json() {
    let mut spec = coarse(
        "fig5",
        [
            Axis::linear("theta", -0.3, 0.3, 2).unwrap(),
            Axis::linear("B", 2.5, 3.5, 2).unwrap(),
        ],
    );
    spec.outputs = parse_outputs("c_sld,c_h,gaps").unwrap();
    let rows = run_sweep(&spec).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig5.json");
    qmb_core::emit(&rows, OutputFormat::Json, &path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let parsed = parsed.as_array().unwrap();
    assert_eq!(parsed.len(), rows.len());
    for (row, obj) in rows.iter().zip(parsed) {
        let back = obj["c_h"].as_f64().unwrap();
        let orig = row.get(Output::CH).unwrap();
        assert!((back - orig).abs() <= 1e-11 * orig.abs(), "{back} vs {orig}");
        assert_eq!(obj["theta"].as_f64(), row.axis("theta"));
    }
}
