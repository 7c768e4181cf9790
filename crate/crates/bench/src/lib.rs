// SPDX-License-Identifier: Apache-2.0

//! Fixtures shared by the benchmarks.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use qmb_core::models::{su2_qutrit_point, tunable_qubit_point, BlochVector, Su2Probe, TunableQubit};
use qmb_core::ModelPoint;

/// Mixed tunable qubit at the balanced setting.
pub fn mixed_qubit() -> ModelPoint {
    let cfg = TunableQubit::new(
        BlochVector::new(0.4, 0.3, 0.4).expect("bloch"),
        FRAC_PI_4,
        FRAC_PI_2,
        0.0,
    )
    .expect("config");
    tunable_qubit_point(&cfg, &[0.3, 0.0]).expect("point")
}

/// Qutrit probe near the Holevo anchor.
pub fn qutrit(b: f64, theta: f64) -> ModelPoint {
    let cfg = Su2Probe::new(FRAC_PI_4, 0.0, 1.0).expect("config");
    su2_qutrit_point(&cfg, b, theta, 0.0).expect("point")
}

pub fn qutrit_anchor() -> ModelPoint {
    qutrit(PI, 0.0)
}
