// SPDX-License-Identifier: Apache-2.0

//! Ready-made sweeps reproducing the standard figures.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::{AngleSearch, Axis, Output, SweepSpec, WeightSpec};
use crate::error::{Error, Result};
use crate::models::ModelId;

pub const PRESETS: [&str; 6] = ["fig1", "fig2", "fig3a", "fig3b", "fig4", "fig5"];

const GAPS: [Output; 3] = [Output::GapH, Output::GapT, Output::GapR];

/// Largest `|r_x|` as a fraction of what the other Bloch components leave.
const RX_FILL: f64 = 0.99;

fn balanced_tunable() -> SweepSpec {
    SweepSpec::new(ModelId::TunableQubit)
        .fix("gamma", FRAC_PI_4)
        .fix("theta", FRAC_PI_2)
        .fix("lambda2", 0.0)
}

/// Builds the named preset. `overrides` are applied as fixed values (and
/// replace any axis of the same name).
///
/// * `fig1`: pure tunable qubit, `R` and `T` maximized over the state and
///   rotation angles along a log-spaced `omega` axis, `W = diag(1, ω)`.
/// * `fig2`: mixed tunable qubit at γ = π/4, θ = π/2, grid `rx × xi`;
///   `ry` and `rz` must be supplied.
/// * `fig3a` / `fig3b`: λ₁ = λ₂ = 0, `r_x = r_y`, grid `rxy × phi` at
///   `r_z = 0.5` and `r2 × phi` at `r_z = 0.1`.
/// * `fig4`: SU(2) qubit, α = π/2, t = 5, grid `theta × B`.
/// * `fig5`: SU(2) qutrit, α = π/4, β = 0, φ = 0, t = 1, grid `theta × B`
///   with nodes at θ = 0 and B = π; `gap_t − gap_h` is `(C_T − C_H)/C_SLD`.
pub fn figure_preset(name: &str, overrides: &BTreeMap<String, f64>) -> Result<SweepSpec> {
    let mut spec = match name {
        "fig1" => {
            let mut s = SweepSpec::new(ModelId::TunableQubit)
                .axis(Axis::new("omega", 0.01, 100.0, 41, true)?)
                .weight(WeightSpec::Omega)
                .outputs(&[Output::R, Output::T]);
            s.optimize = Some(AngleSearch::default());
            s
        }
        "fig2" => {
            let get = |k: &str| {
                overrides
                    .get(k)
                    .copied()
                    .ok_or_else(|| Error::InvalidSpec(format!("preset fig2 needs an explicit `{k}`")))
            };
            let (ry, rz) = (get("ry")?, get("rz")?);
            let room = 1.0 - ry * ry - rz * rz;
            if !(room > 0.0) {
                return Err(Error::InvalidSpec(format!("ry = {ry}, rz = {rz} leave no room for rx")));
            }
            balanced_tunable()
                .fix("phi", 0.0)
                .axis(Axis::linear("rx", 0.0, RX_FILL * room.sqrt(), 64)?)
                .axis(Axis::linear("xi", 0.0, 2.0 * PI, 64)?)
                .outputs(&GAPS)
        }
        "fig3a" => {
            let rz: f64 = 0.5;
            balanced_tunable()
                .fix("lambda1", 0.0)
                .fix("rz", rz)
                .axis(Axis::linear("rxy", 0.0, RX_FILL * ((1.0 - rz * rz) / 2.0).sqrt(), 64)?)
                .axis(Axis::linear("phi", 0.0, 2.0 * PI, 64)?)
                .outputs(&GAPS)
        }
        "fig3b" => {
            let rz: f64 = 0.1;
            balanced_tunable()
                .fix("lambda1", 0.0)
                .fix("rz", rz)
                .axis(Axis::linear("r2", 2.0 * rz * rz, RX_FILL, 64)?)
                .axis(Axis::linear("phi", 0.0, 2.0 * PI, 64)?)
                .outputs(&GAPS)
        }
        "fig4" => SweepSpec::new(ModelId::Su2Qubit)
            .fix("alpha", FRAC_PI_2)
            .fix("beta", 0.0)
            .fix("t", 5.0)
            .axis(Axis::linear("theta", 0.0, PI, 65)?)
            .axis(Axis::linear("B", 0.0, 2.0, 65)?)
            .outputs(&GAPS),
        "fig5" => SweepSpec::new(ModelId::Su2Qutrit)
            .fix("alpha", FRAC_PI_4)
            .fix("beta", 0.0)
            .fix("phi", 0.0)
            .fix("t", 1.0)
            .axis(Axis::linear("theta", -FRAC_PI_2, FRAC_PI_2, 65)?)
            .axis(Axis::linear("B", 0.0, 2.0 * PI, 65)?)
            .outputs(&[
                Output::CSld,
                Output::CT,
                Output::CH,
                Output::T,
                Output::GapH,
                Output::GapT,
            ]),
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    for (k, v) in overrides {
        spec.set_fixed(k, *v);
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_validate() {
        let bloch: BTreeMap<String, f64> = [("ry".to_string(), 0.3), ("rz".to_string(), 0.4)].into();
        for name in PRESETS {
            let o = if name == "fig2" { bloch.clone() } else { BTreeMap::new() };
            figure_preset(name, &o).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn fig2_requires_bloch_settings() {
        assert!(matches!(
            figure_preset("fig2", &BTreeMap::new()),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            figure_preset("fig9", &BTreeMap::new()),
            Err(Error::UnknownPreset(_))
        ));
    }

    #[test]
    fn fig5_grid_hits_the_anchor() {
        let spec = figure_preset("fig5", &BTreeMap::new()).unwrap();
        assert_eq!(spec.axes[0].value(32), 0.0);
        assert!((spec.axes[1].value(32) - PI).abs() < 1e-15);
    }
}
