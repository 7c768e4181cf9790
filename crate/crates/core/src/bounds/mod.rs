// SPDX-License-Identifier: Apache-2.0

//! Scalar Cramér-Rao-type bounds and the numerical Holevo bound.
//!
//! All bounds are per shot: the `1/M` repetition factor is dropped.

mod holevo;
pub mod newton;
pub mod simplex;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{
    compute_geometry, quantumness_r_with, r_closed_form, rld_qfim, t_measure_with, tangent_normal_decomposition,
    InformationGeometry, SingularPolicy, WeightMatrix, RANK_TOL,
};
use crate::linalg::{trace_norm_real, ComplexMatrix, DEFAULT_SUPPORT_TOL};
use crate::models::ModelPoint;

pub use holevo::{holevo_objective, holevo_tangent_min, HolevoOptions, HolevoProblem, HolevoSolution};

/// `C_SLD = Tr[WQ⁻¹]`.
pub fn c_sld(g: &InformationGeometry, w: &WeightMatrix) -> Result<f64> {
    w.check_dim(g.dim())?;
    Ok((w.matrix() * g.q_inverse()?).trace())
}

/// `C_RLD = Tr[W Re J⁻¹] + ‖W Im J⁻¹‖₁`.
pub fn c_rld(j: &ComplexMatrix, w: &WeightMatrix) -> Result<f64> {
    w.check_dim(j.nrows())?;
    let inv = j
        .clone()
        .try_inverse()
        .ok_or(Error::SingularState { min_eigenvalue: 0.0 })?;
    let re = inv.map(|z| z.re);
    let im = inv.map(|z| z.im);
    Ok((w.matrix() * re).trace() + trace_norm_real(&(w.matrix() * im)))
}

/// `C_T = Tr[WQ⁻¹] + ‖√W Q⁻¹UQ⁻¹ √W‖₁`.
pub fn c_t_bound(g: &InformationGeometry, w: &WeightMatrix) -> Result<f64> {
    w.check_dim(g.dim())?;
    let qi = g.q_inverse()?;
    let sw = w.sqrt();
    Ok((w.matrix() * &qi).trace() + trace_norm_real(&(&sw * &qi * &g.u * &qi * &sw)))
}

/// `C_R = (1 + R) C_SLD`.
pub fn c_r_bound(g: &InformationGeometry, w: &WeightMatrix) -> Result<f64> {
    let (r, _) = quantumness_r_with(g, SingularPolicy::Error)?;
    Ok((1.0 + r) * c_sld(g, w)?)
}

/// `Tr[WQ⁻¹] + 2√det(WQ⁻¹)`, the Holevo bound of any two-parameter pure qubit model.
pub fn holevo_pure_qubit_closed_form(g: &InformationGeometry, w: &WeightMatrix) -> Result<f64> {
    if g.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "closed form needs 2 parameters, got {}",
            g.dim()
        )));
    }
    w.check_dim(2)?;
    let m = w.matrix() * g.q_inverse()?;
    Ok(m.trace() + 2.0 * m.determinant().max(0.0).sqrt())
}

/// Diagnostic markers attached to a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    SingularQfim,
    PseudoInverseUsed,
    RldUnavailable,
    HolevoNotConverged,
    RExceedsOne,
    RClosedFormMismatch,
    /// The weight derived from the point was not positive definite.
    InvalidWeight,
    /// The bound chain failed its check; values are withheld.
    HierarchyViolation,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::SingularQfim => "SingularQFIM",
            Flag::PseudoInverseUsed => "PseudoInverseUsed",
            Flag::RldUnavailable => "RldUnavailable",
            Flag::HolevoNotConverged => "HolevoNotConverged",
            Flag::RExceedsOne => "RExceedsOne",
            Flag::RClosedFormMismatch => "RClosedFormMismatch",
            Flag::InvalidWeight => "InvalidWeight",
            Flag::HierarchyViolation => "HierarchyViolation",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    pub support_tol: f64,
    pub normal_tol: f64,
    pub holevo: HolevoOptions,
    pub singular: SingularPolicy,
    pub compute_holevo: bool,
    pub compute_rld: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            support_tol: DEFAULT_SUPPORT_TOL,
            normal_tol: RANK_TOL,
            holevo: HolevoOptions::default(),
            singular: SingularPolicy::Error,
            compute_holevo: true,
            compute_rld: true,
        }
    }
}

/// All bounds at one model point.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub c_sld: f64,
    pub c_rld: Option<f64>,
    pub c_t: f64,
    pub c_r: f64,
    /// Absent when skipped or when `Q` had to be pseudo-inverted.
    pub c_h: Option<f64>,
    pub r: f64,
    pub t: f64,
    pub holevo: Option<HolevoSolution>,
    pub flags: BTreeSet<Flag>,
}

impl BoundsReport {
    /// `(c_x − c_sld)/c_sld`.
    pub fn gap(&self, c_x: f64) -> f64 {
        (c_x - self.c_sld) / self.c_sld
    }

    /// Checks `C_SLD ≤ C_H ≤ C_T ≤ C_R ≤ 2 C_SLD` with slack `rel · C_SLD`.
    pub fn check_hierarchy(&self, rel: f64) -> Result<()> {
        let slack = rel * self.c_sld;
        let mut chain = vec![("c_sld", self.c_sld)];
        if let Some(h) = self.c_h {
            chain.push(("c_h", h));
        }
        chain.extend([("c_t", self.c_t), ("c_r", self.c_r), ("2·c_sld", 2.0 * self.c_sld)]);
        for pair in chain.windows(2) {
            let ((a, va), (b, vb)) = (pair[0], pair[1]);
            if !(va <= vb + slack) {
                return Err(Error::HierarchyViolation(format!("{a} = {va} exceeds {b} = {vb}")));
            }
        }
        Ok(())
    }
}

/// Assembles every bound at `point` and validates the hierarchy.
pub fn full_report(point: &ModelPoint, w: &WeightMatrix, opts: &ReportOptions) -> Result<BoundsReport> {
    let g = compute_geometry(&point.rho, &point.derivs, opts.support_tol)?;
    w.check_dim(g.dim())?;
    let mut flags = BTreeSet::new();

    let (qi, pinv) = g.q_inverse_with(opts.singular)?;
    if pinv {
        flags.insert(Flag::SingularQfim);
        flags.insert(Flag::PseudoInverseUsed);
    }
    let c_sld = (w.matrix() * &qi).trace();
    let (t, _) = t_measure_with(&g, w, opts.singular)?;
    let (r, _) = quantumness_r_with(&g, opts.singular)?;
    let sw = w.sqrt();
    let c_t = c_sld + trace_norm_real(&(&sw * &qi * &g.u * &qi * &sw));
    let c_r = (1.0 + r) * c_sld;

    if r > 1.0 + 1e-9 {
        flags.insert(Flag::RExceedsOne);
    }
    if !pinv {
        if let Some(rc) = r_closed_form(&g) {
            let tol = 1e-9 * r.max(1.0) + 1e-15 * g.condition_number();
            if !((rc - r).abs() <= tol) {
                flags.insert(Flag::RClosedFormMismatch);
            }
        }
    }

    let c_rld = if opts.compute_rld {
        match rld_qfim(&point.rho, &point.derivs).and_then(|j| c_rld(&j, w)) {
            Ok(v) => Some(v),
            Err(_) => {
                flags.insert(Flag::RldUnavailable);
                None
            }
        }
    } else {
        None
    };

    let holevo = if opts.compute_holevo && !pinv {
        let basis = tangent_normal_decomposition(&point.rho, &g, opts.normal_tol)?;
        let sol = holevo_tangent_min(&g, &basis, w, &opts.holevo)?;
        if !sol.converged {
            flags.insert(Flag::HolevoNotConverged);
        }
        Some(sol)
    } else {
        None
    };

    let report = BoundsReport {
        c_sld,
        c_rld,
        c_t,
        c_r,
        c_h: holevo.as_ref().map(|h| h.value),
        r,
        t,
        holevo,
        flags,
    };
    report.check_hierarchy(1e-7)?;
    Ok(report)
}
