// SPDX-License-Identifier: Apache-2.0

//! Spin-1/2 and spin-1 probes under `H = B·J_n`, evolved for a fixed time.

use nalgebra::Vector3;
use num_complex::Complex64;

use super::{derivative_from_generator, ModelPoint};
use crate::error::{Error, Result};
use crate::linalg::{c, expm_hermitian, ComplexMatrix, ComplexVector, DensityMatrix, HermitianOperator, RealMatrix};

/// Initial-state angles and evolution time shared by both SU(2) models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Probe {
    pub alpha: f64,
    pub beta: f64,
    pub t: f64,
}

impl Su2Probe {
    pub fn new(alpha: f64, beta: f64, t: f64) -> Result<Self> {
        let cfg = Self { alpha, beta, t };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Error::InvalidConfig("angles must be finite".into()));
        }
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(Error::InvalidConfig(format!("t must be positive, got {}", self.t)));
        }
        Ok(())
    }

    /// `cos(α/2)|↑⟩ + e^{iβ} sin(α/2)|↓⟩`.
    pub fn qubit_initial_state(&self) -> ComplexVector {
        ComplexVector::from_vec(vec![
            c((self.alpha / 2.0).cos(), 0.0),
            Complex64::from_polar((self.alpha / 2.0).sin(), self.beta),
        ])
    }

    /// `cos(α/2)|1⟩ + e^{iβ} sin(α/2)|−1⟩` in the `(|1⟩, |0⟩, |−1⟩)` basis.
    pub fn qutrit_initial_state(&self) -> ComplexVector {
        ComplexVector::from_vec(vec![
            c((self.alpha / 2.0).cos(), 0.0),
            c(0.0, 0.0),
            Complex64::from_polar((self.alpha / 2.0).sin(), self.beta),
        ])
    }

    /// Bloch vector of the qubit initial state.
    pub fn qubit_bloch(&self) -> Vector3<f64> {
        Vector3::new(
            self.alpha.sin() * self.beta.cos(),
            self.alpha.sin() * self.beta.sin(),
            self.alpha.cos(),
        )
    }
}

/// `(J_x, J_y, J_z) = σ/2`.
pub fn spin_half() -> [HermitianOperator; 3] {
    let z = c(0.0, 0.0);
    let h = 0.5;
    [
        ComplexMatrix::from_row_slice(2, 2, &[z, c(h, 0.0), c(h, 0.0), z]),
        ComplexMatrix::from_row_slice(2, 2, &[z, c(0.0, -h), c(0.0, h), z]),
        ComplexMatrix::from_row_slice(2, 2, &[c(h, 0.0), z, z, c(-h, 0.0)]),
    ]
    .map(HermitianOperator::hermitize)
}

/// Spin-1 matrices in the `(|1⟩, |0⟩, |−1⟩)` basis.
pub fn spin_one() -> [HermitianOperator; 3] {
    let z = c(0.0, 0.0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (r, i) = (c(s, 0.0), c(0.0, s));
    [
        ComplexMatrix::from_row_slice(3, 3, &[z, r, z, r, z, r, z, r, z]),
        ComplexMatrix::from_row_slice(3, 3, &[z, -i, z, i, z, -i, z, i, z]),
        ComplexMatrix::from_row_slice(3, 3, &[c(1.0, 0.0), z, z, z, z, z, z, z, c(-1.0, 0.0)]),
    ]
    .map(HermitianOperator::hermitize)
}

fn j_along(spins: &[HermitianOperator; 3], n: &Vector3<f64>) -> HermitianOperator {
    HermitianOperator::hermitize(
        spins[0].matrix() * c(n.x, 0.0) + spins[1].matrix() * c(n.y, 0.0) + spins[2].matrix() * c(n.z, 0.0),
    )
}

fn qubit_axis(theta: f64) -> Vector3<f64> {
    Vector3::new(theta.cos(), 0.0, theta.sin())
}

fn qutrit_axis(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(theta.cos() * phi.cos(), theta.cos() * phi.sin(), theta.sin())
}

pub(crate) fn qubit_unitary(cfg: &Su2Probe, b: f64, theta: f64) -> ComplexMatrix {
    expm_hermitian(&j_along(&spin_half(), &qubit_axis(theta)).scale(b), cfg.t)
}

pub(crate) fn qutrit_unitary(cfg: &Su2Probe, b: f64, theta: f64, phi: f64) -> ComplexMatrix {
    expm_hermitian(&j_along(&spin_one(), &qutrit_axis(theta, phi)).scale(b), cfg.t)
}

fn evolve(v: &ComplexMatrix, psi: &ComplexVector) -> Result<DensityMatrix> {
    let out = v * psi;
    DensityMatrix::new(&out * out.adjoint())
}

pub(crate) fn qubit_state(cfg: &Su2Probe, b: f64, theta: f64) -> Result<DensityMatrix> {
    cfg.validate()?;
    evolve(&qubit_unitary(cfg, b, theta), &cfg.qubit_initial_state())
}

pub(crate) fn qutrit_state(cfg: &Su2Probe, b: f64, theta: f64, phi: f64) -> Result<DensityMatrix> {
    cfg.validate()?;
    evolve(&qutrit_unitary(cfg, b, theta, phi), &cfg.qutrit_initial_state())
}

fn assemble(
    params: Vec<f64>,
    v: &ComplexMatrix,
    psi: ComplexVector,
    gens: Vec<HermitianOperator>,
    analytic: (RealMatrix, RealMatrix),
) -> Result<ModelPoint> {
    let rho = evolve(v, &psi)?;
    let derivs: Vec<_> = gens
        .iter()
        .map(|g| derivative_from_generator(v, g, rho.matrix()))
        .collect();
    let slds = derivs.iter().map(|d| d.scale(2.0)).collect();
    Ok(ModelPoint {
        params,
        rho,
        derivs,
        analytic_geometry: Some(analytic),
        analytic_slds: Some(slds),
        generators: Some(gens),
        initial_state: Some(psi),
    })
}

/// Spin-1/2 probe with `H = B(cosθ J_x + sinθ J_z)`, parameters `(B, θ)`.
pub fn su2_qubit_point(cfg: &Su2Probe, b: f64, theta: f64) -> Result<ModelPoint> {
    cfg.validate()?;
    let t = cfg.t;
    let (s, co) = (b * t / 2.0).sin_cos();
    let n_theta = qubit_axis(theta);
    let n1 = Vector3::new(co * theta.sin(), -s, -co * theta.cos());
    let n2 = n_theta.cross(&n1);
    let spins = spin_half();
    let gens = vec![j_along(&spins, &n_theta).scale(-t), j_along(&spins, &n1).scale(2.0 * s)];

    let r0 = cfg.qubit_bloch();
    let (a_t, a_1, a_2) = (n_theta.dot(&r0), n1.dot(&r0), n2.dot(&r0));
    let q_bt = 2.0 * t * s * a_1 * a_t;
    let q = RealMatrix::from_row_slice(
        2,
        2,
        &[t * t * (1.0 - a_t * a_t), q_bt, q_bt, 4.0 * s * s * (1.0 - a_1 * a_1)],
    );
    let u_tb = 2.0 * t * s * a_2;
    let u = RealMatrix::from_row_slice(2, 2, &[0.0, -u_tb, u_tb, 0.0]);

    let v = qubit_unitary(cfg, b, theta);
    assemble(vec![b, theta], &v, cfg.qubit_initial_state(), gens, (q, u))
}

/// Spin-1 probe with `H = B J_n`, `n = (cosθ cosφ, cosθ sinφ, sinθ)`,
/// parameters `(B, θ, φ)`.
pub fn su2_qutrit_point(cfg: &Su2Probe, b: f64, theta: f64, phi: f64) -> Result<ModelPoint> {
    cfg.validate()?;
    let t = cfg.t;
    let (s, co) = (b * t / 2.0).sin_cos();
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let n_theta = qutrit_axis(theta, phi);
    let n1 = Vector3::new(s * sp + co * st * cp, -s * cp + co * st * sp, -co * ct);
    let n2 = Vector3::new(co * sp - s * st * cp, -co * cp - s * st * sp, s * ct);
    let spins = spin_one();
    let gens = vec![
        j_along(&spins, &n_theta).scale(-t),
        j_along(&spins, &n1).scale(2.0 * s),
        j_along(&spins, &n2).scale(2.0 * ct * s),
    ];

    let alpha = cfg.alpha;
    let x = alpha.sin() * (cfg.beta - 2.0 * phi).cos();
    let y = alpha.sin() * (cfg.beta - 2.0 * phi).sin();
    let c2a = (2.0 * alpha).cos();
    let (sb, cb) = (b * t).sin_cos();
    let (s2, c2, st2, ct2) = (s * s, co * co, st * st, ct * ct);
    let mut q = RealMatrix::zeros(3, 3);
    q[(0, 0)] = 2.0 * t * t * (1.0 - st2 * c2a + ct2 * x);
    q[(1, 1)] = 8.0 * s2 * (1.0 - c2 * c2a * ct2 + (c2 * st2 - s2) * x - sb * st * y);
    q[(2, 2)] = 8.0 * ct2 * s2 * (1.0 - s2 * c2a * ct2 - (c2 - st2 * s2) * x + sb * st * y);
    q[(0, 1)] = 4.0 * t * ct * s * (s * y - co * st * (c2a + x));
    q[(0, 2)] = 4.0 * t * ct2 * s * (s * st * (c2a + x) + co * y);
    q[(1, 2)] = 4.0 * ct * s2 * (sb * (c2a * ct2 - (st2 + 1.0) * x) - 2.0 * cb * st * y);
    q[(1, 0)] = q[(0, 1)];
    q[(2, 0)] = q[(0, 2)];
    q[(2, 1)] = q[(1, 2)];
    let ca = alpha.cos();
    let mut u = RealMatrix::zeros(3, 3);
    u[(0, 1)] = 4.0 * t * ca * ct * s2;
    u[(0, 2)] = 2.0 * t * ca * ct2 * sb;
    u[(1, 2)] = -4.0 * ca * s2 * (2.0 * theta).sin();
    let u = &u - u.transpose();

    let v = qutrit_unitary(cfg, b, theta, phi);
    assemble(vec![b, theta, phi], &v, cfg.qutrit_initial_state(), gens, (q, u))
}

/// Determinants of the qutrit `Q` predicted in closed form: `(det Q, det U)`.
pub fn qutrit_determinants(cfg: &Su2Probe, b: f64, theta: f64) -> (f64, f64) {
    let s = (b * cfg.t / 2.0).sin();
    let det_q = 64.0 * cfg.t.powi(2) * theta.cos().powi(2) * s.powi(4) * (2.0 * cfg.alpha).sin().powi(2);
    (det_q, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, max_abs_real, sld_solve, DEFAULT_SUPPORT_TOL};
    use crate::models::{generator_geometry, unitary_generator, ModelConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn generator_route(p: &ModelPoint) -> Option<(RealMatrix, RealMatrix)> {
        Some(generator_geometry(p.initial_state.as_ref()?, p.generators.as_ref()?))
    }

    fn sld_route(p: &ModelPoint) -> (RealMatrix, RealMatrix) {
        let slds: Vec<_> = p
            .derivs
            .iter()
            .map(|d| sld_solve(&p.rho, d, DEFAULT_SUPPORT_TOL).unwrap())
            .collect();
        let d = slds.len();
        let g = ComplexMatrix::from_fn(d, d, |i, j| p.rho.expect2(slds[i].matrix(), slds[j].matrix()));
        (g.map(|z| z.re), g.map(|z| z.im))
    }

    #[test]
    fn qubit_aligned_state_has_no_b_information() {
        let cfg = Su2Probe::new(FRAC_PI_2, 0.0, 5.0).unwrap();
        let (q, _) = su2_qubit_point(&cfg, 1.0, 0.0).unwrap().analytic_geometry.unwrap();
        assert!(q[(0, 0)].abs() < 1e-12);
    }

    #[test]
    fn qubit_full_period_kills_theta_information() {
        let cfg = Su2Probe::new(1.1, 0.4, 2.0).unwrap();
        let (q, _) = su2_qubit_point(&cfg, PI, 0.6).unwrap().analytic_geometry.unwrap();
        assert!(q[(1, 1)].abs() < 1e-12);
    }

    #[test]
    fn qubit_closed_form_matches_pipelines() {
        let cfg = Su2Probe::new(FRAC_PI_2, 0.0, 5.0).unwrap();
        let p = su2_qubit_point(&cfg, 1.3, 0.7).unwrap();
        let (qa, ua) = p.analytic_geometry.clone().unwrap();
        let (qg, ug) = generator_route(&p).unwrap();
        assert!(max_abs_real(&(&qa - &qg)) < 1e-8);
        assert!(max_abs_real(&(&ua - &ug)) < 1e-8);
        let model = ModelConfig::Su2Qubit(cfg);
        let fd = ModelPoint::new(p.rho.clone(), model.fd_derivatives(&[1.3, 0.7]).unwrap()).unwrap();
        let (qs, us) = sld_route(&fd);
        assert!(max_abs_real(&(&qa - &qs)) < 1e-6);
        assert!(max_abs_real(&(&ua - &us)) < 1e-6);
    }

    #[test]
    fn qubit_initial_frame_theta_sld() {
        // 4 sin(Bt/2) (n₁ × r₀)·J solves the SLD equation for ρ₀ against U†∂_θρU
        let cfg = Su2Probe::new(1.0, 0.3, 5.0).unwrap();
        let (b, theta) = (1.3, 0.7);
        let p = su2_qubit_point(&cfg, b, theta).unwrap();
        let v = qubit_unitary(&cfg, b, theta);
        let rho0 = v.adjoint() * p.rho.matrix() * &v;
        let d0 = v.adjoint() * p.derivs[1].matrix() * &v;
        let s = (b * cfg.t / 2.0).sin();
        let co = (b * cfg.t / 2.0).cos();
        let n1 = Vector3::new(co * theta.sin(), -s, -co * theta.cos());
        let l = j_along(&spin_half(), &n1.cross(&cfg.qubit_bloch())).scale(4.0 * s);
        let lhs = (l.matrix() * &rho0 + &rho0 * l.matrix()) * c(0.5, 0.0);
        // the printed generator sign flips the derivative
        assert!(max_abs(&(lhs + d0)) < 1e-10);
    }

    #[test]
    fn qubit_uhlmann_entry() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let cfg = Su2Probe::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..6.0), rng.gen_range(0.5..5.0)).unwrap();
            let (b, th) = (rng.gen_range(0.1..2.0), rng.gen_range(0.0..PI));
            let p = su2_qubit_point(&cfg, b, th).unwrap();
            let (_, us) = sld_route(&p);
            let s = (b * cfg.t / 2.0).sin();
            let co = (b * cfg.t / 2.0).cos();
            let n1 = Vector3::new(co * th.sin(), -s, -co * th.cos());
            let n2 = qubit_axis(th).cross(&n1);
            assert!((us[(1, 0)] - 2.0 * cfg.t * s * n2.dot(&cfg.qubit_bloch())).abs() < 1e-8);
        }
    }

    #[test]
    fn qutrit_closed_form_matches_pipelines() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let cfg = Su2Probe::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..6.0), rng.gen_range(0.5..2.0)).unwrap();
            let lam = [
                rng.gen_range(0.1..3.0),
                rng.gen_range(-1.5..1.5),
                rng.gen_range(0.0..6.0),
            ];
            let p = su2_qutrit_point(&cfg, lam[0], lam[1], lam[2]).unwrap();
            let (qa, ua) = p.analytic_geometry.clone().unwrap();
            let (qg, ug) = generator_route(&p).unwrap();
            assert!(max_abs_real(&(&qa - &qg)) < 1e-8, "{qa} {qg}");
            assert!(max_abs_real(&(&ua - &ug)) < 1e-8, "{ua} {ug}");
            let (qs, us) = sld_route(&p);
            assert!(max_abs_real(&(&qa - &qs)) < 1e-6);
            assert!(max_abs_real(&(&ua - &us)) < 1e-6);
        }
    }

    #[test]
    fn qutrit_determinants() {
        let cfg = Su2Probe::new(0.7, 0.2, 1.3).unwrap();
        for (b, th) in [(0.5, 0.3), (2.2, -1.0), (PI, 0.0)] {
            let p = su2_qutrit_point(&cfg, b, th, 0.4).unwrap();
            let (q, u) = p.analytic_geometry.unwrap();
            let (dq, _) = super::qutrit_determinants(&cfg, b, th);
            assert!((q.determinant() - dq).abs() <= 1e-8 * dq.abs().max(1e-12));
            assert!(u.determinant().abs() < 1e-10);
        }
    }

    #[test]
    fn qutrit_anchor_slds_solve_sld_equation() {
        let cfg = Su2Probe::new(FRAC_PI_4, 0.0, 1.0).unwrap();
        let p = su2_qutrit_point(&cfg, PI, 0.0, 0.0).unwrap();
        for (l, d) in p.analytic_slds.as_ref().unwrap().iter().zip(&p.derivs) {
            let lhs = (l.matrix() * p.rho.matrix() + p.rho.matrix() * l.matrix()) * c(0.5, 0.0);
            assert!(max_abs(&(lhs - d.matrix())) < 1e-8);
        }
    }

    #[test]
    fn finite_difference_generators_match_closed_forms() {
        let qubit = Su2Probe::new(FRAC_PI_2, 0.0, 5.0).unwrap();
        let p = su2_qubit_point(&qubit, 1.3, 0.7).unwrap();
        let path = |x: &[f64]| qubit_unitary(&qubit, x[0], x[1]);
        for k in 0..2 {
            let est = unitary_generator(path, &[1.3, 0.7], k, 1e-3).unwrap();
            let closed = &p.generators.as_ref().unwrap()[k];
            assert!(max_abs(&(est.generator.matrix() + closed.matrix())) < 1e-6);
        }

        let qutrit = Su2Probe::new(0.9, 0.4, 1.3).unwrap();
        let lam = [2.1, 0.5, 0.3];
        let p = su2_qutrit_point(&qutrit, lam[0], lam[1], lam[2]).unwrap();
        let path = |x: &[f64]| qutrit_unitary(&qutrit, x[0], x[1], x[2]);
        for k in 0..3 {
            let est = unitary_generator(path, &lam, k, 1e-3).unwrap();
            let closed = &p.generators.as_ref().unwrap()[k];
            assert!(max_abs(&(est.generator.matrix() + closed.matrix())) < 1e-6);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let cfg = ModelConfig::Su2Qutrit(Su2Probe::new(0.6, 0.3, 1.0).unwrap());
        let lam = [1.1, -0.4, 0.8];
        let p = cfg.point(&lam).unwrap();
        for (a, b) in p.derivs.iter().zip(cfg.fd_derivatives(&lam).unwrap()) {
            assert!(max_abs(&(a.matrix() - b.matrix())) < 1e-6);
        }
    }

    #[test]
    fn beta_is_two_pi_periodic() {
        let a = su2_qutrit_point(&Su2Probe::new(0.6, 0.3, 1.0).unwrap(), 1.1, 0.2, 0.5).unwrap();
        let b = su2_qutrit_point(&Su2Probe::new(0.6, 0.3 + 2.0 * PI, 1.0).unwrap(), 1.1, 0.2, 0.5).unwrap();
        assert!(max_abs(&(a.rho.matrix() - b.rho.matrix())) < 1e-12);
    }

    #[test]
    fn rejects_non_positive_time() {
        assert!(Su2Probe::new(0.1, 0.0, 0.0).is_err());
        assert!(Su2Probe::new(f64::NAN, 0.0, 1.0).is_err());
    }
}
