// SPDX-License-Identifier: Apache-2.0

//! Parameterized state families.

mod bloch;
pub mod random;
mod su2;
mod tunable;

pub(crate) use tunable::rotation_geometry;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    anticommutator, commutator, max_abs, ComplexMatrix, ComplexVector, DensityMatrix, HermitianOperator, RealMatrix,
};

pub use bloch::BlochVector;
pub use su2::{qutrit_determinants, spin_half, spin_one, su2_qubit_point, su2_qutrit_point, Su2Probe};
pub use tunable::{
    tunable_qubit_bloch, tunable_qubit_bloch_closed_form, tunable_qubit_bloch_rotations, tunable_qubit_point,
    TunableQubit,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelId {
    TunableQubit,
    Su2Qubit,
    Su2Qutrit,
}

impl ModelId {
    pub const ALL: [ModelId; 3] = [ModelId::TunableQubit, ModelId::Su2Qubit, ModelId::Su2Qutrit];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::TunableQubit => "tunable_qubit",
            ModelId::Su2Qubit => "su2_qubit",
            ModelId::Su2Qutrit => "su2_qutrit",
        }
    }

    /// Names of the estimated parameters, in the order of `ModelPoint::params`.
    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            ModelId::TunableQubit => &["lambda1", "lambda2"],
            ModelId::Su2Qubit => &["B", "theta"],
            ModelId::Su2Qutrit => &["B", "theta", "phi"],
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ModelId::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown model `{s}`")))
    }
}

/// Fixed constants of a model family.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelConfig {
    TunableQubit(TunableQubit),
    Su2Qubit(Su2Probe),
    Su2Qutrit(Su2Probe),
}

impl ModelConfig {
    pub fn id(&self) -> ModelId {
        match self {
            ModelConfig::TunableQubit(_) => ModelId::TunableQubit,
            ModelConfig::Su2Qubit(_) => ModelId::Su2Qubit,
            ModelConfig::Su2Qutrit(_) => ModelId::Su2Qutrit,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelConfig::TunableQubit(c) => c.validate(),
            ModelConfig::Su2Qubit(c) | ModelConfig::Su2Qutrit(c) => c.validate(),
        }
    }

    pub fn num_params(&self) -> usize {
        self.id().parameter_names().len()
    }

    /// Evaluates the model at `lambda` with analytic derivatives.
    pub fn point(&self, lambda: &[f64]) -> Result<ModelPoint> {
        self.check_arity(lambda)?;
        match self {
            ModelConfig::TunableQubit(c) => tunable_qubit_point(c, lambda),
            ModelConfig::Su2Qubit(c) => su2_qubit_point(c, lambda[0], lambda[1]),
            ModelConfig::Su2Qutrit(c) => su2_qutrit_point(c, lambda[0], lambda[1], lambda[2]),
        }
    }

    /// The state alone, without derivatives.
    pub fn state(&self, lambda: &[f64]) -> Result<DensityMatrix> {
        self.check_arity(lambda)?;
        match self {
            ModelConfig::TunableQubit(c) => {
                let r = tunable::bloch_rotations(c, lambda[0], lambda[1]);
                r.density_matrix()
            }
            ModelConfig::Su2Qubit(c) => su2::qubit_state(c, lambda[0], lambda[1]),
            ModelConfig::Su2Qutrit(c) => su2::qutrit_state(c, lambda[0], lambda[1], lambda[2]),
        }
    }

    /// Central finite-difference derivatives of the state, step `1e-5·max(1, |λ_k|)`,
    /// with the rounding-level trace removed.
    pub fn fd_derivatives(&self, lambda: &[f64]) -> Result<Vec<HermitianOperator>> {
        (0..lambda.len())
            .map(|k| {
                let h = 1e-5 * lambda[k].abs().max(1.0);
                let mut plus = lambda.to_vec();
                let mut minus = lambda.to_vec();
                plus[k] += h;
                minus[k] -= h;
                let mut d = (self.state(&plus)?.matrix() - self.state(&minus)?.matrix()) / Complex64::new(2.0 * h, 0.0);
                let n = d.nrows();
                let mean = d.trace() / Complex64::new(n as f64, 0.0);
                for i in 0..n {
                    d[(i, i)] -= mean;
                }
                Ok(HermitianOperator::hermitize(d))
            })
            .collect()
    }

    fn check_arity(&self, lambda: &[f64]) -> Result<()> {
        let d = self.num_params();
        if lambda.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "{} takes {d} parameters, got {}",
                self.id(),
                lambda.len()
            )));
        }
        if lambda.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig("parameters must be finite".into()));
        }
        Ok(())
    }
}

/// A state together with its parameter derivatives and optional closed forms.
#[derive(Debug, Clone)]
pub struct ModelPoint {
    pub params: Vec<f64>,
    pub rho: DensityMatrix,
    pub derivs: Vec<HermitianOperator>,
    /// Closed-form `(Q, U)`.
    pub analytic_geometry: Option<(RealMatrix, RealMatrix)>,
    pub analytic_slds: Option<Vec<HermitianOperator>>,
    /// Generators `ℋ_k` acting on the initial state.
    pub generators: Option<Vec<HermitianOperator>>,
    pub initial_state: Option<ComplexVector>,
}

impl ModelPoint {
    /// A point with no closed-form data attached.
    pub fn new(rho: DensityMatrix, derivs: Vec<HermitianOperator>) -> Result<Self> {
        for d in &derivs {
            if d.dim() != rho.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "state is {0}x{0}, derivative is {1}x{1}",
                    rho.dim(),
                    d.dim()
                )));
            }
        }
        Ok(Self {
            params: Vec::new(),
            rho,
            derivs,
            analytic_geometry: None,
            analytic_slds: None,
            generators: None,
            initial_state: None,
        })
    }

    pub fn num_params(&self) -> usize {
        self.derivs.len()
    }
}

/// Result of [`unitary_generator`].
#[derive(Debug, Clone)]
pub struct GeneratorEstimate {
    pub generator: HermitianOperator,
    /// `‖A − A†‖_max` before symmetrization.
    pub hermiticity_defect: f64,
}

/// Generator `iU†∂_kU` of a unitary path, by a 4-point central stencil.
///
/// Fails with `StepTooLarge` when the 4-point and 2-point derivative estimates
/// differ by more than `1e-4`.
pub fn unitary_generator<F>(path: F, at: &[f64], k: usize, h: f64) -> Result<GeneratorEstimate>
where
    F: Fn(&[f64]) -> ComplexMatrix,
{
    if k >= at.len() {
        return Err(Error::DimensionMismatch(format!(
            "index {k} out of range for {} parameters",
            at.len()
        )));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidConfig("step must be positive".into()));
    }
    let shifted = |s: f64| {
        let mut x = at.to_vec();
        x[k] += s * h;
        path(&x)
    };
    let (m2, m1, p1, p2) = (shifted(-2.0), shifted(-1.0), shifted(1.0), shifted(2.0));
    let four =
        (&m2 - &m1 * Complex64::new(8.0, 0.0) + &p1 * Complex64::new(8.0, 0.0) - &p2) / Complex64::new(12.0 * h, 0.0);
    let two = (&p1 - &m1) / Complex64::new(2.0 * h, 0.0);
    let discrepancy = max_abs(&(&four - &two));
    if discrepancy > 1e-4 {
        return Err(Error::StepTooLarge { discrepancy });
    }
    let u = path(at);
    let a = u.adjoint() * four * Complex64::new(0.0, 1.0);
    let hermiticity_defect = max_abs(&(&a - a.adjoint()));
    Ok(GeneratorEstimate {
        generator: HermitianOperator::hermitize(a),
        hermiticity_defect,
    })
}

/// Pure-state geometry from generators:
/// `Q_kl = 2⟨{ℋ_k,ℋ_l}⟩ − 4⟨ℋ_k⟩⟨ℋ_l⟩`, `U_kl = −2i⟨[ℋ_k,ℋ_l]⟩`.
pub fn generator_geometry(psi: &ComplexVector, gens: &[HermitianOperator]) -> (RealMatrix, RealMatrix) {
    let d = gens.len();
    let ev = |m: &ComplexMatrix| psi.dotc(&(m * psi));
    let means: Vec<f64> = gens.iter().map(|g| g.expectation(psi)).collect();
    let mut q = RealMatrix::zeros(d, d);
    let mut u = RealMatrix::zeros(d, d);
    for k in 0..d {
        for l in 0..d {
            let (a, b) = (gens[k].matrix(), gens[l].matrix());
            q[(k, l)] = 2.0 * ev(&anticommutator(a, b)).re - 4.0 * means[k] * means[l];
            u[(k, l)] = (Complex64::new(0.0, -2.0) * ev(&commutator(a, b))).re;
        }
    }
    let q = (&q + q.transpose()) * 0.5;
    let u = (&u - u.transpose()) * 0.5;
    (q, u)
}

/// `∂ρ = i[VℋV†, ρ]` for `ρ = Vρ₀V†` and a generator in the initial frame.
pub(crate) fn derivative_from_generator(
    v: &ComplexMatrix,
    gen: &HermitianOperator,
    rho: &ComplexMatrix,
) -> HermitianOperator {
    let lab = v * gen.matrix() * v.adjoint();
    HermitianOperator::hermitize(commutator(&lab, rho) * Complex64::new(0.0, 1.0))
}
