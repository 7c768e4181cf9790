// SPDX-License-Identifier: Apache-2.0

//! Grid sweeps over model parameters and their tabular output.

mod emit;
mod optimize;
pub mod parse;
mod presets;

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bounds::{full_report, Flag, ReportOptions};
use crate::error::{Error, Result};
use crate::geometry::{compute_geometry, WeightMatrix};
use crate::linalg::RealMatrix;
use crate::models::{BlochVector, ModelConfig, ModelId, Su2Probe, TunableQubit};

pub use emit::{emit, format_value, write_rows, OutputFormat};
pub use optimize::AngleSearch;
pub use presets::{figure_preset, PRESETS};

/// Largest grid a sweep accepts.
pub const MAX_POINTS: usize = 10_000_000;

/// Reported quantities, in canonical column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    CSld,
    CRld,
    CT,
    CR,
    CH,
    R,
    T,
    GapH,
    GapT,
    GapR,
}

impl Output {
    pub const ALL: [Output; 10] = [
        Output::CSld,
        Output::CRld,
        Output::CT,
        Output::CR,
        Output::CH,
        Output::R,
        Output::T,
        Output::GapH,
        Output::GapT,
        Output::GapR,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Output::CSld => "c_sld",
            Output::CRld => "c_rld",
            Output::CT => "c_t",
            Output::CR => "c_r",
            Output::CH => "c_h",
            Output::R => "R",
            Output::T => "T",
            Output::GapH => "gap_h",
            Output::GapT => "gap_t",
            Output::GapR => "gap_r",
        }
    }

    fn needs_holevo(self) -> bool {
        matches!(self, Output::CH | Output::GapH)
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Output {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Output::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown output `{s}`")))
    }
}

/// One grid dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    /// Geometric instead of linear spacing.
    pub log: bool,
}

impl Axis {
    pub fn new(name: &str, start: f64, stop: f64, count: usize, log: bool) -> Result<Self> {
        let axis = Self {
            name: name.to_string(),
            start,
            stop,
            count,
            log,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn linear(name: &str, start: f64, stop: f64, count: usize) -> Result<Self> {
        Self::new(name, start, stop, count, false)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::InvalidSpec("axis without a name".into()));
        }
        if self.count < 2 {
            return Err(Error::InvalidSpec(format!(
                "axis `{}` needs at least 2 points, got {}",
                self.name, self.count
            )));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::InvalidSpec(format!("axis `{}` has a non-finite end", self.name)));
        }
        if self.log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "log axis `{}` needs positive ends",
                self.name
            )));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        let n = (self.count - 1) as f64;
        if i + 1 == self.count {
            return self.stop;
        }
        let s = i as f64 / n;
        if self.log {
            (self.start.ln() + s * (self.stop.ln() - self.start.ln())).exp()
        } else {
            self.start + s * (self.stop - self.start)
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

/// How the cost matrix is chosen at each point.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Identity,
    Diag(Vec<f64>),
    Full(RealMatrix),
    /// `W = Q/Q₁₁` at the point.
    ProportionalToQfim,
    /// `W = diag(1, ω, …, ω)` with `ω` bound from the parameter `omega`.
    Omega,
}

impl WeightSpec {
    fn resolve(&self, d: usize, params: &BTreeMap<String, f64>, q: Option<&RealMatrix>) -> Result<WeightMatrix> {
        match self {
            WeightSpec::Identity => Ok(WeightMatrix::identity(d)),
            WeightSpec::Diag(v) => {
                if v.len() != d {
                    return Err(Error::InvalidSpec(format!(
                        "diagonal weight has {} entries, model has {d} parameters",
                        v.len()
                    )));
                }
                WeightMatrix::diagonal(v)
            }
            WeightSpec::Full(m) => {
                if m.nrows() != d {
                    return Err(Error::InvalidSpec(format!(
                        "weight is {}×{}, model has {d} parameters",
                        m.nrows(),
                        m.ncols()
                    )));
                }
                WeightMatrix::new(m.clone())
            }
            WeightSpec::ProportionalToQfim => {
                let q = q.ok_or_else(|| Error::InvalidSpec("QFIM weight needs the geometry".into()))?;
                WeightMatrix::new(q / q[(0, 0)])
            }
            WeightSpec::Omega => {
                let omega = *params
                    .get("omega")
                    .ok_or_else(|| Error::InvalidSpec("weight `omega` needs a parameter `omega`".into()))?;
                let mut diag = vec![omega; d];
                diag[0] = 1.0;
                WeightMatrix::diagonal(&diag)
            }
        }
    }
}

/// A grid of model evaluations.
///
/// The model constants and the estimated parameters are both bound by name
/// from `fixed` and the axes (see [`bind_model`]).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub model: ModelId,
    pub axes: Vec<Axis>,
    pub fixed: BTreeMap<String, f64>,
    pub weight: WeightSpec,
    pub outputs: Vec<Output>,
    pub seed: u64,
    pub options: ReportOptions,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Replace the per-point evaluation with a maximization of `R` and `T`
    /// over the tunable-qubit pure states and rotations.
    pub optimize: Option<AngleSearch>,
}

impl SweepSpec {
    pub fn new(model: ModelId) -> Self {
        Self {
            model,
            axes: Vec::new(),
            fixed: BTreeMap::new(),
            weight: WeightSpec::Identity,
            outputs: Output::ALL.to_vec(),
            seed: 0,
            options: ReportOptions::default(),
            threads: None,
            optimize: None,
        }
    }

    pub fn fix(mut self, name: &str, value: f64) -> Self {
        self.fixed.insert(name.to_string(), value);
        self
    }

    pub fn axis(mut self, axis: Axis) -> Self {
        self.axes.push(axis);
        self
    }

    pub fn weight(mut self, weight: WeightSpec) -> Self {
        self.weight = weight;
        self
    }

    pub fn outputs(mut self, outputs: &[Output]) -> Self {
        self.outputs = outputs.to_vec();
        self
    }

    /// Replaces an axis of the same name or appends a new one; a fixed value
    /// of that name is dropped.
    pub fn set_axis(&mut self, axis: Axis) {
        self.fixed.remove(&axis.name);
        match self.axes.iter_mut().find(|a| a.name == axis.name) {
            Some(slot) => *slot = axis,
            None => self.axes.push(axis),
        }
    }

    /// Sets a fixed value, removing an axis of the same name.
    pub fn set_fixed(&mut self, name: &str, value: f64) {
        self.axes.retain(|a| a.name != name);
        self.fixed.insert(name.to_string(), value);
    }

    /// Outputs deduplicated in canonical order.
    pub fn canonical_outputs(&self) -> Vec<Output> {
        self.outputs
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn num_points(&self) -> usize {
        self.axes.iter().fold(1usize, |n, a| n.saturating_mul(a.count))
    }

    /// Column names: axes, outputs, then `flags`.
    pub fn columns(&self) -> Vec<String> {
        self.axes
            .iter()
            .map(|a| a.name.clone())
            .chain(self.canonical_outputs().iter().map(|o| o.as_str().to_string()))
            .chain(std::iter::once("flags".to_string()))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.outputs.is_empty() {
            return Err(Error::InvalidSpec("no outputs requested".into()));
        }
        let mut seen = BTreeSet::new();
        for a in &self.axes {
            a.validate()?;
            if self.fixed.contains_key(&a.name) {
                return Err(Error::InvalidSpec(format!("`{}` is both an axis and fixed", a.name)));
            }
            if !seen.insert(a.name.as_str()) || a.name == "flags" {
                return Err(Error::InvalidSpec(format!("duplicate column `{}`", a.name)));
            }
        }
        if self.num_points() > MAX_POINTS {
            return Err(Error::InvalidSpec(format!(
                "{} grid points exceed the limit of {MAX_POINTS}",
                self.num_points()
            )));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidSpec("thread count must be positive".into()));
        }
        if let Some(search) = &self.optimize {
            search.check(self)?;
        }
        Ok(())
    }

    fn report_options(&self, index: usize) -> ReportOptions {
        let outputs = self.canonical_outputs();
        let mut opts = self.options.clone();
        opts.compute_holevo &= outputs.iter().any(|o| o.needs_holevo());
        opts.compute_rld &= outputs.contains(&Output::CRld);
        opts.holevo.seed = point_seed(self.seed, index);
        opts
    }
}

fn point_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub axes: Vec<(String, f64)>,
    pub values: Vec<(Output, Option<f64>)>,
    pub flags: Vec<Flag>,
}

impl ResultRow {
    pub fn get(&self, output: Output) -> Option<f64> {
        self.values.iter().find(|(o, _)| *o == output).and_then(|(_, v)| *v)
    }

    pub fn axis(&self, name: &str) -> Option<f64> {
        self.axes.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn is_flagged(&self) -> bool {
        !self.flags.is_empty()
    }

    pub fn columns(&self) -> Vec<String> {
        self.axes
            .iter()
            .map(|(n, _)| n.clone())
            .chain(self.values.iter().map(|(o, _)| o.as_str().to_string()))
            .chain(std::iter::once("flags".to_string()))
            .collect()
    }

    pub fn flags_joined(&self) -> String {
        self.flags.iter().map(|f| f.as_str()).collect::<Vec<_>>().join(";")
    }
}

fn take(params: &mut BTreeMap<String, f64>, key: &str) -> Option<f64> {
    params.remove(key)
}

fn require(params: &mut BTreeMap<String, f64>, key: &str, model: ModelId) -> Result<f64> {
    take(params, key).ok_or_else(|| Error::InvalidSpec(format!("model {model} needs parameter `{key}`")))
}

/// Builds the model and its parameter vector from named values.
///
/// Tunable qubit: Bloch vector from `rx, ry, rz`, or `alpha, beta` (pure),
/// or `rxy, rz` (`r_x = r_y`), or `r2, rz` (`|r|²` with `r_x = r_y`);
/// `gamma` (π/4), `theta` (π/2), `phi` (0); `lambda1` or `xi = 2λ₁ − φ`
/// (0), `lambda2` (0). SU(2) models: `alpha`, `beta` (0), `t` (1), `B`,
/// `theta`, and `phi` for the qutrit. `omega` is reserved for the weight.
pub fn bind_model(model: ModelId, values: &BTreeMap<String, f64>) -> Result<(ModelConfig, Vec<f64>)> {
    let mut p = values.clone();
    p.remove("omega");
    let bound = match model {
        ModelId::TunableQubit => {
            let gamma = take(&mut p, "gamma").unwrap_or(FRAC_PI_4);
            let theta = take(&mut p, "theta").unwrap_or(FRAC_PI_2);
            let phi = take(&mut p, "phi").unwrap_or(0.0);
            let r0 = if let Some(alpha) = take(&mut p, "alpha") {
                let beta = take(&mut p, "beta").unwrap_or(0.0);
                BlochVector::new(alpha.sin() * beta.cos(), alpha.sin() * beta.sin(), alpha.cos())?
            } else if let Some(rxy) = take(&mut p, "rxy") {
                let rz = require(&mut p, "rz", model)?;
                BlochVector::new(rxy, rxy, rz)?
            } else if let Some(r2) = take(&mut p, "r2") {
                let rz = require(&mut p, "rz", model)?;
                if r2 < rz * rz {
                    return Err(Error::InvalidSpec(format!("r2 = {r2} is below rz² = {}", rz * rz)));
                }
                let rxy = ((r2 - rz * rz) / 2.0).sqrt();
                BlochVector::new(rxy, rxy, rz)?
            } else {
                let rx = require(&mut p, "rx", model)?;
                let ry = require(&mut p, "ry", model)?;
                let rz = require(&mut p, "rz", model)?;
                BlochVector::new(rx, ry, rz)?
            };
            let lambda1 = match (take(&mut p, "lambda1"), take(&mut p, "xi")) {
                (Some(_), Some(_)) => return Err(Error::InvalidSpec("set either `lambda1` or `xi`, not both".into())),
                (Some(l), None) => l,
                (None, Some(xi)) => (xi + phi) / 2.0,
                (None, None) => 0.0,
            };
            let lambda2 = take(&mut p, "lambda2").unwrap_or(0.0);
            let cfg = TunableQubit::new(r0, gamma, theta, phi)?;
            (ModelConfig::TunableQubit(cfg), vec![lambda1, lambda2])
        }
        ModelId::Su2Qubit | ModelId::Su2Qutrit => {
            let alpha = require(&mut p, "alpha", model)?;
            let beta = take(&mut p, "beta").unwrap_or(0.0);
            let t = take(&mut p, "t").unwrap_or(1.0);
            let probe = Su2Probe::new(alpha, beta, t)?;
            let b = require(&mut p, "B", model)?;
            let theta = require(&mut p, "theta", model)?;
            if model == ModelId::Su2Qubit {
                (ModelConfig::Su2Qubit(probe), vec![b, theta])
            } else {
                let phi = take(&mut p, "phi").unwrap_or(0.0);
                (ModelConfig::Su2Qutrit(probe), vec![b, theta, phi])
            }
        }
    };
    if let Some(extra) = p.keys().next() {
        return Err(Error::InvalidSpec(format!(
            "unknown parameter `{extra}` for model {model}"
        )));
    }
    Ok(bound)
}

fn flagged(values: &[Output], flag: Flag) -> Cells {
    (values.iter().map(|&o| (o, None)).collect(), vec![flag])
}

/// Output values and flags of one row.
pub(crate) type Cells = (Vec<(Output, Option<f64>)>, Vec<Flag>);

fn evaluate(spec: &SweepSpec, values: &BTreeMap<String, f64>, index: usize) -> Result<Cells> {
    let outputs = spec.canonical_outputs();
    if let Some(search) = &spec.optimize {
        return search.evaluate(values, &outputs);
    }
    let (cfg, lambda) = bind_model(spec.model, values)?;
    let point = cfg.point(&lambda)?;
    let opts = spec.report_options(index);

    let q = match spec.weight {
        WeightSpec::ProportionalToQfim => Some(compute_geometry(&point.rho, &point.derivs, opts.support_tol)?.q),
        _ => None,
    };
    let w = match spec.weight.resolve(lambda.len(), values, q.as_ref()) {
        Ok(w) => w,
        Err(Error::InvalidWeight { .. }) if q.is_some() => return Ok(flagged(&outputs, Flag::InvalidWeight)),
        Err(e) => return Err(e),
    };

    let report = match full_report(&point, &w, &opts) {
        Ok(r) => r,
        Err(Error::SingularQfim { .. }) => return Ok(flagged(&outputs, Flag::SingularQfim)),
        Err(Error::HierarchyViolation(_)) => return Ok(flagged(&outputs, Flag::HierarchyViolation)),
        Err(e) => return Err(e),
    };
    let row = outputs
        .iter()
        .map(|&o| {
            let v = match o {
                Output::CSld => Some(report.c_sld),
                Output::CRld => report.c_rld,
                Output::CT => Some(report.c_t),
                Output::CR => Some(report.c_r),
                Output::CH => report.c_h,
                Output::R => Some(report.r),
                Output::T => Some(report.t),
                Output::GapH => report.c_h.map(|h| report.gap(h)),
                Output::GapT => Some(report.gap(report.c_t)),
                Output::GapR => Some(report.gap(report.c_r)),
            };
            (o, v)
        })
        .collect();
    Ok((row, report.flags.into_iter().collect()))
}

/// Evaluates a spec without axes.
pub fn run_point(spec: &SweepSpec) -> Result<ResultRow> {
    if !spec.axes.is_empty() {
        return Err(Error::InvalidSpec("run_point takes a spec without axes".into()));
    }
    spec.validate()?;
    let (values, flags) = evaluate(spec, &spec.fixed, 0)?;
    Ok(ResultRow {
        axes: Vec::new(),
        values,
        flags,
    })
}

/// Evaluates every grid point, returning rows in row-major axis order.
///
/// Physics failures (singular QFIM and the like) become flagged rows; a
/// malformed configuration aborts the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let grids: Vec<Vec<f64>> = spec.axes.iter().map(Axis::values).collect();
    let n = spec.num_points();
    let one = |index: usize| -> Result<ResultRow> {
        let mut rem = index;
        let mut coords = vec![0.0; grids.len()];
        for (k, g) in grids.iter().enumerate().rev() {
            coords[k] = g[rem % g.len()];
            rem /= g.len();
        }
        let mut values = spec.fixed.clone();
        let axes: Vec<(String, f64)> = spec
            .axes
            .iter()
            .zip(&coords)
            .map(|(a, &v)| {
                values.insert(a.name.clone(), v);
                (a.name.clone(), v)
            })
            .collect();
        let (vals, flags) = evaluate(spec, &values, index)?;
        Ok(ResultRow {
            axes,
            values: vals,
            flags,
        })
    };
    let run = || (0..n).into_par_iter().map(one).collect::<Result<Vec<_>>>();
    match spec.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}
