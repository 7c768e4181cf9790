// SPDX-License-Identifier: Apache-2.0

//! Maximization of `R` and `T[diag(1, ω)]` over pure tunable-qubit
//! configurations `(α, β, γ, θ, φ)`.
//!
//! `λ` is held at zero: `λ₁` only shifts `β` and `λ₂` is a global rotation.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use super::{Cells, Output, SweepSpec, WeightSpec};
use crate::bounds::simplex::nelder_mead;
use crate::error::{Error, Result};
use crate::models::{rotation_geometry, BlochVector, ModelId, TunableQubit};

/// Grid-then-simplex search settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngleSearch {
    /// Grid points per angle.
    pub grid_points: usize,
    /// Polish the best grid point with Nelder-Mead.
    pub refine: bool,
}

impl Default for AngleSearch {
    fn default() -> Self {
        Self {
            grid_points: 17,
            refine: true,
        }
    }
}

/// Entries `(Q₁₁, Q₁₂, Q₂₂, U₁₂)` below this relative `det Q` are skipped.
const DEGENERATE: f64 = 1e-9;

fn geometry_at(angles: &[f64]) -> Option<[f64; 4]> {
    let (a, b) = (angles[0], angles[1]);
    let r0 = BlochVector::new(a.sin() * b.cos(), a.sin() * b.sin(), a.cos()).ok()?;
    let cfg = TunableQubit::new(r0, angles[2], angles[3], angles[4]).ok()?;
    Some(rotation_geometry(&cfg, 0.0, 0.0))
}

fn measures(g: &[f64; 4], omega: f64) -> Option<(f64, f64)> {
    let [q11, q12, q22, u12] = *g;
    let det = q11 * q22 - q12 * q12;
    let tr = q11 + q22;
    if !(det > DEGENERATE * tr * tr) {
        return None;
    }
    let r = (u12 * u12 / det).sqrt();
    let t = 2.0 * (omega * u12 * u12).sqrt() / (q22 + omega * q11);
    Some((r, t))
}

fn ranges() -> [(f64, f64, bool); 5] {
    // (start, span, periodic)
    [
        (0.0, PI, false),
        (0.0, 2.0 * PI, true),
        (0.0, PI, true),
        (0.0, PI, false),
        (0.0, 2.0 * PI, true),
    ]
}

fn grid_angles(n: usize, index: usize) -> [f64; 5] {
    let mut out = [0.0; 5];
    let mut rem = index;
    for (k, (start, span, periodic)) in ranges().into_iter().enumerate().rev() {
        let i = rem % n;
        rem /= n;
        let step = if periodic {
            span / n as f64
        } else {
            span / (n - 1) as f64
        };
        out[k] = start + i as f64 * step;
    }
    out
}

type Table = Arc<Vec<Option<[f64; 4]>>>;

fn table(n: usize) -> Table {
    static CACHE: OnceLock<Mutex<HashMap<usize, Table>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().map(|c| c.get(&n).cloned()).ok().flatten() {
        return t;
    }
    let total = n.pow(5);
    let built: Table = Arc::new(
        (0..total)
            .into_par_iter()
            .map(|i| geometry_at(&grid_angles(n, i)))
            .collect(),
    );
    if let Ok(mut c) = cache.lock() {
        c.entry(n).or_insert_with(|| built.clone());
    }
    built
}

impl AngleSearch {
    pub(crate) fn check(&self, spec: &SweepSpec) -> Result<()> {
        if self.grid_points < 2 {
            return Err(Error::InvalidSpec("angle search needs at least 2 grid points".into()));
        }
        if spec.model != ModelId::TunableQubit || spec.weight != WeightSpec::Omega {
            return Err(Error::InvalidSpec(
                "angle search runs on the tunable qubit with the `omega` weight".into(),
            ));
        }
        if let Some(o) = spec.outputs.iter().find(|o| !matches!(o, Output::R | Output::T)) {
            return Err(Error::InvalidSpec(format!(
                "angle search reports R and T only, not {o}"
            )));
        }
        let names = spec
            .axes
            .iter()
            .map(|a| a.name.as_str())
            .chain(spec.fixed.keys().map(String::as_str));
        if let Some(other) = names.into_iter().find(|n| *n != "omega") {
            return Err(Error::InvalidSpec(format!(
                "angle search optimizes every model constant; `{other}` cannot be set"
            )));
        }
        Ok(())
    }

    /// Best value of `pick` over the grid, then refined.
    fn maximize(&self, omega: f64, pick: impl Fn((f64, f64)) -> f64 + Sync) -> Option<f64> {
        let n = self.grid_points;
        let tab = table(n);
        let (best_i, best) = tab
            .par_iter()
            .enumerate()
            .filter_map(|(i, g)| g.as_ref().and_then(|g| measures(g, omega)).map(|m| (i, pick(m))))
            .reduce_with(|a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a })?;
        if !self.refine {
            return Some(best);
        }
        let f = |x: &[f64]| {
            geometry_at(x)
                .and_then(|g| measures(&g, omega))
                .map(|m| -pick(m))
                .unwrap_or(0.0)
        };
        let step = PI / (2.0 * n as f64);
        let res = nelder_mead(f, &grid_angles(n, best_i), step, 4000, 1e-14, 1e-10);
        Some(best.max(-res.value))
    }

    pub(crate) fn evaluate(&self, values: &BTreeMap<String, f64>, outputs: &[Output]) -> Result<Cells> {
        let omega = *values
            .get("omega")
            .ok_or_else(|| Error::InvalidSpec("angle search needs `omega`".into()))?;
        if !(omega > 0.0) {
            return Err(Error::InvalidSpec(format!("omega must be positive, got {omega}")));
        }
        let row = outputs
            .iter()
            .map(|&o| {
                let v = match o {
                    Output::R => self.maximize(omega, |m| m.0),
                    _ => self.maximize(omega, |m| m.1),
                };
                (o, v)
            })
            .collect();
        Ok((row, Vec::new()))
    }
}
