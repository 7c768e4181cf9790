// SPDX-License-Identifier: Apache-2.0

//! Qubit encoded by `R_z(2λ₂) R_n(2γ) R_z(2λ₁)` acting on a fixed Bloch vector.

use nalgebra::{Rotation3, Unit, Vector3};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use super::bloch::{pauli_operator, BlochVector};
use super::ModelPoint;
use crate::error::{Error, Result};
use crate::linalg::RealMatrix;

/// Fixed constants: initial Bloch vector and the intermediate rotation
/// `R_n(2γ)` with axis `n = (cosφ sinθ, sinφ sinθ, cosθ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunableQubit {
    pub r0: BlochVector,
    pub gamma: f64,
    pub theta: f64,
    pub phi: f64,
}

impl TunableQubit {
    pub fn new(r0: BlochVector, gamma: f64, theta: f64, phi: f64) -> Result<Self> {
        let cfg = Self { r0, gamma, theta, phi };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        BlochVector::new(self.r0.x(), self.r0.y(), self.r0.z())?;
        if ![self.gamma, self.theta, self.phi].iter().all(|a| a.is_finite()) {
            return Err(Error::InvalidConfig("angles must be finite".into()));
        }
        Ok(())
    }

    pub fn axis(&self) -> Vector3<f64> {
        Vector3::new(
            self.phi.cos() * self.theta.sin(),
            self.phi.sin() * self.theta.sin(),
            self.theta.cos(),
        )
    }

    /// The γ = π/4, θ = π/2 configuration, where closed-form SLDs are available.
    pub fn is_balanced(&self) -> bool {
        (self.gamma - FRAC_PI_4).abs() < 1e-12 && (self.theta - FRAC_PI_2).abs() < 1e-12
    }
}

fn rz(angle: f64) -> Rotation3<f64> {
    Rotation3::from_axis_angle(&Vector3::z_axis(), angle)
}

fn rn(cfg: &TunableQubit) -> Rotation3<f64> {
    Rotation3::from_axis_angle(&Unit::new_normalize(cfg.axis()), 2.0 * cfg.gamma)
}

pub(crate) fn bloch_rotations(cfg: &TunableQubit, lambda1: f64, lambda2: f64) -> BlochVector {
    let r = rz(2.0 * lambda2) * rn(cfg) * rz(2.0 * lambda1) * cfg.r0.vector();
    BlochVector::from_vector(r)
}

/// Rotated Bloch vector by composing the three rotation matrices.
pub fn tunable_qubit_bloch_rotations(cfg: &TunableQubit, lambda1: f64, lambda2: f64) -> BlochVector {
    bloch_rotations(cfg, lambda1, lambda2)
}

/// Rotated Bloch vector from the expanded component formulas in
/// `ξ = 2λ₁ − φ`, `ε = 2λ₂ + φ`, `κ₁ = sinγ sinθ`, `κ₂ = sinγ cosθ`.
pub fn tunable_qubit_bloch_closed_form(cfg: &TunableQubit, lambda1: f64, lambda2: f64) -> BlochVector {
    let (rx, ry, rz) = (cfg.r0.x(), cfg.r0.y(), cfg.r0.z());
    let k1 = cfg.gamma.sin() * cfg.theta.sin();
    let k2 = cfg.gamma.sin() * cfg.theta.cos();
    let cg = cfg.gamma.cos();
    let xi = 2.0 * lambda1 - cfg.phi;
    let eps = 2.0 * lambda2 + cfg.phi;
    let a = |e: f64| ry * (xi + e).cos() + rx * (xi + e).sin();
    let b = |e: f64| rx * (xi + e).cos() - ry * (xi + e).sin();
    let (se, ce) = eps.sin_cos();
    let x = (1.0 - 2.0 * k2 * k2) * b(eps) - 2.0 * k2 * cg * a(eps)
        + 2.0 * k1 * k1 * se * a(0.0)
        + 2.0 * k1 * rz * (k2 * ce + cg * se);
    let y = (1.0 - 2.0 * k2 * k2) * a(eps) + 2.0 * k2 * cg * b(eps) - 2.0 * k1 * k1 * ce * a(0.0)
        + 2.0 * k1 * rz * (k2 * se - cg * ce);
    let z = (1.0 - 2.0 * k1 * k1) * rz + 2.0 * k1 * (cg * a(0.0) + k2 * b(0.0));
    BlochVector::from_vector(Vector3::new(x, y, z))
}

/// Rotated Bloch vector; both evaluation routes are computed and must agree.
pub fn tunable_qubit_bloch(cfg: &TunableQubit, lambda1: f64, lambda2: f64) -> BlochVector {
    let r = bloch_rotations(cfg, lambda1, lambda2);
    let closed = tunable_qubit_bloch_closed_form(cfg, lambda1, lambda2);
    debug_assert!(
        (r.vector() - closed.vector()).amax() < 1e-10,
        "Bloch routes disagree: {:?} vs {:?}",
        r,
        closed
    );
    r
}

/// `(∂₁r, ∂₂r)` along the rotation path.
fn bloch_derivatives(cfg: &TunableQubit, lambda1: f64, lambda2: f64, r: &Vector3<f64>) -> [Vector3<f64>; 2] {
    let z = Vector3::z();
    let inner = rz(2.0 * lambda1) * cfg.r0.vector();
    [
        rz(2.0 * lambda2) * (rn(cfg) * (2.0 * z.cross(&inner))),
        2.0 * z.cross(r),
    ]
}

/// `(Q₁₁, Q₁₂, Q₂₂, U₁₂)` from the rotation path alone. Rotations keep
/// `r·∂r = 0`, so no longitudinal term appears.
pub(crate) fn rotation_geometry(cfg: &TunableQubit, lambda1: f64, lambda2: f64) -> [f64; 4] {
    let r = *bloch_rotations(cfg, lambda1, lambda2).vector();
    let [d1, d2] = bloch_derivatives(cfg, lambda1, lambda2, &r);
    [d1.dot(&d1), d1.dot(&d2), d2.dot(&d2), r.dot(&d1.cross(&d2))]
}

/// Evaluates the model at `λ = (λ₁, λ₂)`.
pub fn tunable_qubit_point(cfg: &TunableQubit, lambda: &[f64]) -> Result<ModelPoint> {
    cfg.validate()?;
    if lambda.len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "tunable_qubit takes 2 parameters, got {}",
            lambda.len()
        )));
    }
    let (l1, l2) = (lambda[0], lambda[1]);
    let r = tunable_qubit_bloch(cfg, l1, l2);
    let rv = *r.vector();
    let dr = bloch_derivatives(cfg, l1, l2, &rv);

    let rho = r.density_matrix()?;
    let derivs = dr.iter().map(|v| pauli_operator(v, 0.5)).collect();

    let purity_gap = 1.0 - rv.norm_squared();
    let mut q = RealMatrix::zeros(2, 2);
    let mut u = RealMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let (ri, rj) = (rv.dot(&dr[i]), rv.dot(&dr[j]));
            let longitudinal = if ri.abs() < 1e-10 || rj.abs() < 1e-10 {
                0.0
            } else {
                ri * rj / purity_gap
            };
            q[(i, j)] = dr[i].dot(&dr[j]) + longitudinal;
            u[(i, j)] = rv.dot(&dr[i].cross(&dr[j]));
        }
    }

    let analytic_slds = cfg.is_balanced().then(|| {
        let (rx, ry, rz0) = (cfg.r0.x(), cfg.r0.y(), cfg.r0.z());
        let xi = 2.0 * l1 - cfg.phi;
        let eps = 2.0 * l2 + cfg.phi;
        let a0 = ry * xi.cos() + rx * xi.sin();
        let b0 = rx * xi.cos() - ry * xi.sin();
        let (se, ce) = eps.sin_cos();
        let y1 = Vector3::new(-2.0 * ce * a0, -2.0 * se * a0, 2.0 * b0);
        let y2 = Vector3::new(2.0 * (rz0 * ce - se * b0), 2.0 * (rz0 * se + ce * b0), 0.0);
        vec![pauli_operator(&y1, 1.0), pauli_operator(&y2, 1.0)]
    });

    Ok(ModelPoint {
        params: lambda.to_vec(),
        rho,
        derivs,
        analytic_geometry: Some((q, u)),
        analytic_slds,
        generators: None,
        initial_state: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, sld_solve, DEFAULT_SUPPORT_TOL};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reference() -> TunableQubit {
        TunableQubit::new(BlochVector::new(0.3, 0.2, 0.5).unwrap(), FRAC_PI_4, FRAC_PI_2, 0.7).unwrap()
    }

    fn random_cfg(rng: &mut impl Rng) -> TunableQubit {
        let v = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let v = v.normalize() * rng.gen_range(0.0..1.0);
        TunableQubit::new(
            BlochVector::new(v.x, v.y, v.z).unwrap(),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        )
        .unwrap()
    }

    #[test]
    fn identity_rotations_leave_r0() {
        let cfg = TunableQubit {
            gamma: 0.0,
            ..reference()
        };
        let r = tunable_qubit_bloch(&cfg, 0.0, 0.0);
        assert!((r.vector() - cfg.r0.vector()).amax() < 1e-15);
    }

    #[test]
    fn routes_agree_and_preserve_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let cfg = random_cfg(&mut rng);
            let (l1, l2) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let a = tunable_qubit_bloch_rotations(&cfg, l1, l2);
            let b = tunable_qubit_bloch_closed_form(&cfg, l1, l2);
            assert!((a.vector() - b.vector()).amax() < 1e-10);
            assert!((a.norm() - cfg.r0.norm()).abs() < 1e-12);
        }
        let cfg = reference();
        let a = tunable_qubit_bloch_rotations(&cfg, 0.4, 0.0);
        let b = tunable_qubit_bloch_closed_form(&cfg, 0.4, 0.0);
        assert!((a.vector() - b.vector()).amax() < 1e-10);
    }

    #[test]
    fn balanced_geometry_matches_closed_forms() {
        let cfg = reference();
        let (rx, ry, rz) = (0.3, 0.2, 0.5);
        let r2: f64 = rx * rx + ry * ry + rz * rz;
        for l1 in [0.4, -1.1, 2.5] {
            let p = tunable_qubit_point(&cfg, &[l1, 0.0]).unwrap();
            let (q, u) = p.analytic_geometry.unwrap();
            let xi: f64 = 2.0 * l1 - 0.7;
            let a0 = ry * xi.cos() + rx * xi.sin();
            let b0 = rx * xi.cos() - ry * xi.sin();
            assert!((q[(0, 0)] - 0.52).abs() < 1e-12);
            assert!((q[(0, 1)] + 4.0 * rz * a0).abs() < 1e-12);
            let q22 = 2.0 * (r2 + rz * rz + (rx * rx - ry * ry) * (2.0 * xi).cos() - 2.0 * rx * ry * (2.0 * xi).sin());
            assert!((q[(1, 1)] - q22).abs() < 1e-12);
            assert!((q[(1, 1)] - 4.0 * (r2 - a0 * a0)).abs() < 1e-12);
            assert!((u[(0, 1)] - 4.0 * r2 * (-rx * xi.cos() + ry * xi.sin())).abs() < 1e-12);
            assert!((u[(0, 1)] + 4.0 * r2 * b0).abs() < 1e-12);
        }
    }

    #[test]
    fn general_gamma_offdiagonal_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let cfg = random_cfg(&mut rng);
            let l1 = rng.gen_range(-3.0..3.0);
            let (q, u) = tunable_qubit_point(&cfg, &[l1, 0.0])
                .unwrap()
                .analytic_geometry
                .unwrap();
            let (rx, ry, rz) = (cfg.r0.x(), cfg.r0.y(), cfg.r0.z());
            let k1 = cfg.gamma.sin() * cfg.theta.sin();
            let k2 = cfg.gamma.sin() * cfg.theta.cos();
            let cg = cfg.gamma.cos();
            let xi = 2.0 * l1 - cfg.phi;
            let a0 = ry * xi.cos() + rx * xi.sin();
            let b0 = rx * xi.cos() - ry * xi.sin();
            let q12 = 4.0 * ((rx * rx + ry * ry) * (1.0 - 2.0 * k1 * k1) - 2.0 * rz * k1 * (cg * a0 + k2 * b0));
            let u12 = 8.0 * cfg.r0.norm().powi(2) * k1 * (k2 * a0 - cg * b0);
            assert!((q[(0, 1)] - q12).abs() < 1e-10);
            assert!((u[(0, 1)] - u12).abs() < 1e-10);
        }
    }

    #[test]
    fn closed_form_slds_solve_sld_equation() {
        let cfg = reference();
        for (l1, l2) in [(0.4, 0.0), (0.9, 0.35)] {
            let p = tunable_qubit_point(&cfg, &[l1, l2]).unwrap();
            let slds = p.analytic_slds.as_ref().unwrap();
            for (l, d) in slds.iter().zip(&p.derivs) {
                let numeric = sld_solve(&p.rho, d, DEFAULT_SUPPORT_TOL).unwrap();
                assert!(max_abs(&(l.matrix() - numeric.matrix())) < 1e-10);
            }
        }
    }

    #[test]
    fn commuting_encodings_are_singular() {
        let cfg = TunableQubit {
            gamma: 0.0,
            ..reference()
        };
        let (q, u) = tunable_qubit_point(&cfg, &[0.3, 0.2])
            .unwrap()
            .analytic_geometry
            .unwrap();
        assert!(u[(0, 1)].abs() < 1e-14);
        assert!(q.determinant().abs() < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let cfg = super::super::ModelConfig::TunableQubit(random_cfg(&mut rng));
            let lam = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let p = cfg.point(&lam).unwrap();
            let fd = cfg.fd_derivatives(&lam).unwrap();
            for (a, b) in p.derivs.iter().zip(&fd) {
                assert!(max_abs(&(a.matrix() - b.matrix())) < 1e-6);
            }
        }
    }

    #[test]
    fn xi_epsilon_reduction() {
        // the state depends on (λ₁, λ₂, φ) only through ξ and ε at γ=π/4, θ=π/2
        let cfg = reference();
        let shifted = TunableQubit { phi: 0.7 + 0.3, ..cfg };
        let a = tunable_qubit_bloch(&cfg, 0.4, 0.2);
        let b = tunable_qubit_bloch(&shifted, 0.4 + 0.15, 0.2 - 0.15);
        assert!((a.vector() - b.vector()).amax() < 1e-12);
    }

    #[test]
    fn period_in_lambda1() {
        let cfg = reference();
        let a = tunable_qubit_bloch(&cfg, 0.4, 0.1);
        let b = tunable_qubit_bloch(&cfg, 0.4 + std::f64::consts::PI, 0.1);
        assert!((a.vector() - b.vector()).amax() < 1e-12);
    }
}
