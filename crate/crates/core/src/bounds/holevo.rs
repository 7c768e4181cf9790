// SPDX-License-Identifier: Apache-2.0

//! Holevo bound as a minimization over the normal-space coefficients `K`.
//!
//! With `X_μ = Σ_i L_i [Q⁻¹]_iμ + Σ_j P_j K_jμ`, the matrix `Z = Tr[ρ X_μ X_ν]`
//! has `Re Z = Q⁻¹ + Kᵀ Re(P_λ) K` (the cross terms vanish by orthogonality)
//! and `Im Z = Q⁻¹UQ⁻¹ + Kᵀ Im(P_λ) K + A − Aᵀ` with `A = Q⁻¹SK`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::newton::{constrained_polish, newton_polish};
use super::simplex::nelder_mead;
use crate::error::{Error, Result};
use crate::geometry::{InformationGeometry, NormalSpaceBasis, WeightMatrix};
use crate::linalg::{sym_eig, trace_norm_real, RealMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct HolevoOptions {
    pub max_iter: usize,
    /// Relative improvement per restart round below which the search stops.
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for HolevoOptions {
    fn default() -> Self {
        Self {
            max_iter: 5000,
            tol: 1e-9,
            restarts: 8,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolevoSolution {
    /// `m×d` normal-space coefficients.
    pub k: RealMatrix,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub restarts_used: usize,
}

/// Precomputed pieces of the objective.
#[derive(Debug, Clone)]
pub struct HolevoProblem {
    d: usize,
    m: usize,
    w: RealMatrix,
    sqrt_w: RealMatrix,
    qi: RealMatrix,
    base_im: RealMatrix,
    re_p: RealMatrix,
    im_p: RealMatrix,
    qi_s: RealMatrix,
    c_sld: f64,
}

impl HolevoProblem {
    pub fn new(g: &InformationGeometry, basis: &NormalSpaceBasis, w: &WeightMatrix) -> Result<Self> {
        let d = g.dim();
        w.check_dim(d)?;
        let m = basis.dim();
        if basis.coupling.shape() != (d, m) {
            return Err(Error::DimensionMismatch(format!(
                "coupling is {:?}, expected ({d}, {m})",
                basis.coupling.shape()
            )));
        }
        let qi = g.q_inverse()?;
        let re_p = basis.gram.map(|z| z.re);
        let im_p = basis.gram.map(|z| z.im);
        Ok(Self {
            d,
            m,
            w: w.matrix().clone(),
            sqrt_w: w.sqrt(),
            base_im: &qi * &g.u * &qi,
            qi_s: &qi * &basis.coupling,
            c_sld: (w.matrix() * &qi).trace(),
            qi,
            re_p: (&re_p + re_p.transpose()) * 0.5,
            im_p: (&im_p - im_p.transpose()) * 0.5,
        })
    }

    pub fn num_params(&self) -> usize {
        self.d
    }

    pub fn normal_dim(&self) -> usize {
        self.m
    }

    pub fn c_sld(&self) -> f64 {
        self.c_sld
    }

    pub fn q_inverse(&self) -> &RealMatrix {
        &self.qi
    }

    /// Objective at `K` (`m×d`).
    pub fn value(&self, k: &RealMatrix) -> f64 {
        self.smooth_part(k) + trace_norm_real(&(&self.sqrt_w * self.imaginary_part(k) * &self.sqrt_w))
    }

    /// `Tr[W Re Z]`, the objective without its trace-norm term.
    fn smooth_part(&self, k: &RealMatrix) -> f64 {
        self.c_sld + (&self.w * (k.transpose() * &self.re_p * k)).trace()
    }

    /// `Im Z` at `K`.
    fn imaginary_part(&self, k: &RealMatrix) -> RealMatrix {
        let a = &self.qi_s * k;
        &self.base_im + k.transpose() * &self.im_p * k + &a - a.transpose()
    }

    fn unflatten(&self, x: &[f64]) -> RealMatrix {
        RealMatrix::from_column_slice(self.m, self.d, x)
    }

    fn value_flat(&self, x: &[f64]) -> f64 {
        self.value(&self.unflatten(x))
    }
}

/// Convenience wrapper for [`HolevoProblem::value`].
pub fn holevo_objective(
    g: &InformationGeometry,
    basis: &NormalSpaceBasis,
    w: &WeightMatrix,
    k: &RealMatrix,
) -> Result<f64> {
    Ok(HolevoProblem::new(g, basis, w)?.value(k))
}

/// Minimizes the Holevo objective over `K` by restarted Nelder-Mead.
///
/// Starts at `K = 0` (where the objective equals `C_T`); each restart round
/// re-seeds a fresh simplex at the incumbent and one at a random perturbation
/// of it, with a shrinking perturbation scale. Every simplex result is refined
/// by damped Newton steps, which converge tightly wherever the trace norm is
/// smooth. Stops once a round improves by less than `tol` relative.
pub fn holevo_tangent_min(
    g: &InformationGeometry,
    basis: &NormalSpaceBasis,
    w: &WeightMatrix,
    opts: &HolevoOptions,
) -> Result<HolevoSolution> {
    let problem = HolevoProblem::new(g, basis, w)?;
    let (d, m) = (problem.d, problem.m);
    let n = d * m;
    let zero = vec![0.0; n];
    let f0 = problem.value_flat(&zero);
    if n == 0 {
        return Ok(HolevoSolution {
            k: RealMatrix::zeros(m, d),
            value: f0,
            iterations: 0,
            converged: true,
            restarts_used: 0,
        });
    }

    let qi_norm = sym_eig(&problem.qi).0.max();
    let mut scale = 0.1 * qi_norm;
    let xtol = 1e-10 * qi_norm.max(1.0);
    let ftol = 1e-15;
    let f = |x: &[f64]| problem.value_flat(x);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let h = 1e-5 * qi_norm.max(1e-3);
    // The minimum often sits where Im Z vanishes and the trace norm has a
    // kink; that branch is refined as `min Tr[W Re Z]` subject to `Im Z = 0`.
    let smooth = |x: &[f64]| problem.smooth_part(&problem.unflatten(x));
    let entries: Vec<(usize, usize)> = (0..d).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let constraint = |j: usize, x: &[f64]| problem.imaginary_part(&problem.unflatten(x))[entries[j]];
    let polish = |x: &[f64]| {
        let free = newton_polish(f, x, h, 30, 1e-16);
        let kink = constrained_polish(smooth, constraint, entries.len(), f, x, 10.0 * h, 30);
        if kink.value < free.value {
            kink
        } else {
            free
        }
    };

    let first = nelder_mead(f, &zero, scale, opts.max_iter, ftol, xtol);
    let mut iterations = first.iterations;
    let refined = polish(&first.x);
    let (mut best_x, mut best_f) = if refined.value < f0 {
        (refined.x, refined.value)
    } else {
        (zero.clone(), f0)
    };

    let mut converged = false;
    let mut restarts_used = 0;
    for round in 1..=opts.restarts {
        restarts_used = round;
        let before = best_f;
        let start: Vec<f64> = best_x.iter().map(|x| x + scale * rng.gen_range(-1.0..1.0)).collect();
        for x0 in [best_x.clone(), start] {
            let run = nelder_mead(f, &x0, scale, opts.max_iter, ftol, xtol);
            iterations += run.iterations;
            let refined = polish(&run.x);
            if refined.value < best_f {
                best_x = refined.x;
                best_f = refined.value;
            }
        }
        if before - best_f <= opts.tol * best_f.abs() {
            converged = true;
            break;
        }
        scale *= 0.5;
    }
    if opts.restarts == 0 {
        converged = first.converged;
    }

    let k = RealMatrix::from_column_slice(m, d, &best_x);
    let value = problem.value(&k);
    Ok(HolevoSolution {
        k,
        value,
        iterations,
        converged,
        restarts_used,
    })
}
