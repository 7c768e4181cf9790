// SPDX-License-Identifier: Apache-2.0

//! The incompatibility measures `R` and `T[W]` and weight reparameterizations.

use nalgebra::Vector3;

use super::{InformationGeometry, SingularPolicy, WeightMatrix, RANK_TOL};
use crate::error::{Error, Result};
use crate::linalg::{c, rank, sym_eig, trace_norm_real, ComplexMatrix, HermitianOperator, RealMatrix};

/// `R = ‖iQ⁻¹U‖_∞`, evaluated as the largest singular value of `Q^{-1/2} U Q^{-1/2}`.
pub fn quantumness_r(g: &InformationGeometry) -> Result<f64> {
    quantumness_r_with(g, SingularPolicy::Error).map(|(r, _)| r)
}

pub fn quantumness_r_with(g: &InformationGeometry, policy: SingularPolicy) -> Result<(f64, bool)> {
    let (_, pinv) = g.q_inverse_with(policy)?;
    let (vals, vecs) = sym_eig(&g.q);
    let cut = if pinv { RANK_TOL * vals.max() } else { 0.0 };
    let inv_sqrt = vals.map(|x| if x > cut { 1.0 / x.sqrt() } else { 0.0 });
    let s = &vecs * RealMatrix::from_diagonal(&inv_sqrt) * vecs.transpose();
    let m = &s * &g.u * &s;
    let r = if m.is_empty() {
        0.0
    } else {
        m.svd(false, false).singular_values.max()
    };
    Ok((r, pinv))
}

/// `R` as the spectral radius of the non-symmetric product `Q⁻¹U`.
pub fn quantumness_r_direct(g: &InformationGeometry) -> Result<f64> {
    let qi = g.q_inverse()?;
    let m = qi * &g.u;
    Ok(m.complex_eigenvalues().iter().fold(0.0, |acc, z| acc.max(z.norm())))
}

/// Closed forms of `R`: `√(det U / det Q)` for two parameters and
/// `√(uᵀQu / det Q)` with `u = (U₂₃, −U₁₃, U₁₂)` for three.
pub fn r_closed_form(g: &InformationGeometry) -> Option<f64> {
    let (q, u) = (&g.q, &g.u);
    match g.dim() {
        2 => Some((u[(0, 1)].powi(2) / q.determinant()).sqrt()),
        3 => {
            let v = Vector3::new(u[(1, 2)], -u[(0, 2)], u[(0, 1)]);
            let q3 = q.fixed_view::<3, 3>(0, 0);
            Some((v.dot(&(q3 * v)) / q.determinant()).max(0.0).sqrt())
        }
        _ => None,
    }
}

/// `‖√W Q⁻¹UQ⁻¹ √W‖₁`.
pub fn trace_norm_numerator(g: &InformationGeometry, w: &WeightMatrix) -> Result<f64> {
    w.check_dim(g.dim())?;
    let qi = g.q_inverse()?;
    let sw = w.sqrt();
    Ok(trace_norm_real(&(&sw * &qi * &g.u * &qi * &sw)))
}

/// `T[W] = ‖√W Q⁻¹UQ⁻¹ √W‖₁ / Tr[WQ⁻¹]`.
pub fn t_measure(g: &InformationGeometry, w: &WeightMatrix) -> Result<f64> {
    t_measure_with(g, w, SingularPolicy::Error).map(|(t, _)| t)
}

pub fn t_measure_with(g: &InformationGeometry, w: &WeightMatrix, policy: SingularPolicy) -> Result<(f64, bool)> {
    w.check_dim(g.dim())?;
    let (qi, pinv) = g.q_inverse_with(policy)?;
    let sw = w.sqrt();
    let num = trace_norm_real(&(&sw * &qi * &g.u * &qi * &sw));
    let den = (w.matrix() * &qi).trace();
    Ok((num / den, pinv))
}

/// Two parameters, `W = diag(1, ω)`: `2√(ω det U) / (Q₂₂ + ωQ₁₁)`.
pub fn t_diag2_closed_form(g: &InformationGeometry, omega: f64) -> f64 {
    let (q, u) = (&g.q, &g.u);
    2.0 * (omega * u[(0, 1)].powi(2)).sqrt() / (q[(1, 1)] + omega * q[(0, 0)])
}

/// Three parameters, `W = diag(1, ω₁, ω₂)`:
/// `2√(uᵀQ W̃ Qu) / (det Q · Tr[WQ⁻¹])`, `W̃ = diag(ω₁ω₂, ω₂, ω₁)`.
pub fn t_diag3_closed_form(g: &InformationGeometry, omega1: f64, omega2: f64) -> f64 {
    let (q, u) = (&g.q, &g.u);
    let v = Vector3::new(u[(1, 2)], -u[(0, 2)], u[(0, 1)]);
    let q3 = q.fixed_view::<3, 3>(0, 0).into_owned();
    let qv = q3 * v;
    let wt = Vector3::new(omega1 * omega2, omega2, omega1);
    let num = qv.component_mul(&wt).dot(&qv);
    let det = q.determinant();
    let qi = q3.try_inverse().unwrap_or_else(nalgebra::Matrix3::zeros);
    let tr = qi[(0, 0)] + omega1 * qi[(1, 1)] + omega2 * qi[(2, 2)];
    2.0 * num.max(0.0).sqrt() / (det * tr)
}

/// Closed-form `T` where one exists: any two-parameter `W` (normalized to
/// `W₁₁ = 1`), and diagonal three-parameter `W`.
pub fn t_closed_form(g: &InformationGeometry, w: &WeightMatrix) -> Option<f64> {
    let m = w.matrix();
    match g.dim() {
        2 => {
            let (w1, w2) = (m[(0, 1)] / m[(0, 0)], m[(1, 1)] / m[(0, 0)]);
            let (q, u) = (&g.q, &g.u);
            let num = 2.0 * ((w2 - w1 * w1) * u[(0, 1)].powi(2)).max(0.0).sqrt();
            Some(num / (q[(1, 1)] + w2 * q[(0, 0)] - 2.0 * w1 * q[(0, 1)]))
        }
        3 if w.is_diagonal() => Some(t_diag3_closed_form(g, m[(1, 1)] / m[(0, 0)], m[(2, 2)] / m[(0, 0)])),
        _ => None,
    }
}

/// When and how `T[W]` reaches `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct SaturationReport {
    pub t: f64,
    pub r: f64,
    /// `|T − R| ≤ 1e-9`.
    pub saturated: bool,
    /// Two parameters: the weight `[[1, ω₁*], [ω₁*, ω₂*]]` with
    /// `ω₁* = Q₁₂/Q₁₁`, `ω₂* = Q₂₂/Q₁₁`, at which `T = R`.
    pub saturating_weight: Option<(f64, f64)>,
    /// Two parameters: maximizer `ω* = Q₂₂/Q₁₁` of `T[diag(1, ω)]`.
    pub omega_star: Option<f64>,
    pub t_at_omega_star: Option<f64>,
    /// Odd parameter count with diagonal `Q` and `W`: `T = R` requires `U = 0`.
    pub odd_diagonal: bool,
    pub rank_u: usize,
    /// `T ≤ rank(U)·R`.
    pub rank_bound_holds: bool,
}

pub fn t_saturation_analysis(g: &InformationGeometry, w: &WeightMatrix) -> Result<SaturationReport> {
    let t = t_measure(g, w)?;
    let r = quantumness_r(g)?;
    let d = g.dim();
    let (saturating_weight, omega_star, t_at_omega_star) = if d == 2 {
        let q = &g.q;
        let w1 = q[(0, 1)] / q[(0, 0)];
        let w2 = q[(1, 1)] / q[(0, 0)];
        let t_star = t_measure(g, &WeightMatrix::diagonal(&[1.0, w2])?)?;
        (Some((w1, w2)), Some(w2), Some(t_star))
    } else {
        (None, None, None)
    };
    let q_diag = is_diagonal(&g.q);
    let odd_diagonal = d % 2 == 1 && q_diag && w.is_diagonal();
    let rank_u = rank(&g.u, RANK_TOL);
    Ok(SaturationReport {
        t,
        r,
        saturated: (t - r).abs() <= 1e-9,
        saturating_weight,
        omega_star,
        t_at_omega_star,
        odd_diagonal,
        rank_u,
        rank_bound_holds: t <= rank_u as f64 * r + 1e-9,
    })
}

fn is_diagonal(m: &RealMatrix) -> bool {
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let n = m.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)].abs() <= 1e-12 * scale))
}

/// `W = PᵀDP` with `P` orthogonal and the geometry rotated to `(PQPᵀ, PUPᵀ)`.
#[derive(Debug, Clone)]
pub struct WeightTransform {
    pub geometry: InformationGeometry,
    pub weight: WeightMatrix,
    pub p: RealMatrix,
}

pub fn weight_transform(g: &InformationGeometry, w: &WeightMatrix) -> Result<WeightTransform> {
    w.check_dim(g.dim())?;
    let d = g.dim();
    let (p, diag) = if w.is_diagonal() {
        (RealMatrix::identity(d, d), w.matrix().diagonal())
    } else {
        let (vals, vecs) = sym_eig(w.matrix());
        (vecs.transpose(), vals)
    };
    let q = &p * &g.q * p.transpose();
    let u = &p * &g.u * p.transpose();
    let slds = (0..g.slds.len().min(d))
        .map(|a| {
            let mut acc = ComplexMatrix::zeros(g.slds[0].dim(), g.slds[0].dim());
            for (b, l) in g.slds.iter().enumerate() {
                acc += l.matrix() * c(p[(a, b)], 0.0);
            }
            HermitianOperator::hermitize(acc)
        })
        .collect();
    let mut geometry = InformationGeometry::from_matrices(q, u)?;
    geometry.slds = slds;
    let weight = WeightMatrix::new(RealMatrix::from_diagonal(&diag)).map_err(|_| Error::InvalidWeight {
        min_eigenvalue: diag.min(),
    })?;
    Ok(WeightTransform { geometry, weight, p })
}

/// Singular values `|d_{2k} d_{2k+1} μ_k|` (each twice) of `D B D`, where `B`
/// is block-canonical with blocks `μ_k [[0, 1], [−1, 0]]`; unpaired
/// dimensions contribute zeros. Sorted descending.
pub fn paired_singular_values(d: &[f64], mu: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(d.len());
    for (k, m) in mu.iter().enumerate() {
        let s = (d[2 * k] * d[2 * k + 1] * m).abs();
        out.push(s);
        out.push(s);
    }
    out.resize(d.len(), 0.0);
    out.sort_by(|a, b| b.total_cmp(a));
    out
}
