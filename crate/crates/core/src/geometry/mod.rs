// SPDX-License-Identifier: Apache-2.0

//! SLD quantum Fisher information, mean Uhlmann curvature and derived measures.

mod measures;
mod normal;

use crate::error::{Error, Result};
use crate::linalg::{
    c, max_abs_real, rld_solve, sld_solve, spd_inverse, spd_sqrt, sym_eig, sym_pinv, sym_rank, ComplexMatrix,
    DensityMatrix, HermitianOperator, RealMatrix,
};

pub use measures::{
    paired_singular_values, quantumness_r, quantumness_r_direct, quantumness_r_with, r_closed_form, t_closed_form,
    t_diag2_closed_form, t_diag3_closed_form, t_measure, t_measure_with, t_saturation_analysis, trace_norm_numerator,
    weight_transform, SaturationReport, WeightTransform,
};
pub use normal::{gell_mann_basis, tangent_normal_decomposition, NormalSpaceBasis};

/// Relative eigenvalue cut used for ranks and the normal-space null directions.
pub const RANK_TOL: f64 = 1e-9;
/// Condition number above which `Q` is treated as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

/// How to treat a singular QFIM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingularPolicy {
    #[default]
    Error,
    /// Rank-revealing pseudo-inverse at [`RANK_TOL`].
    PseudoInverse,
}

/// Positive definite cost matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix(RealMatrix);

impl WeightMatrix {
    pub fn new(w: RealMatrix) -> Result<Self> {
        if w.nrows() != w.ncols() {
            return Err(Error::NotSquare {
                rows: w.nrows(),
                cols: w.ncols(),
            });
        }
        if w.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let asym = max_abs_real(&(&w - w.transpose()));
        if asym > 1e-10 * (1.0 + max_abs_real(&w)) {
            return Err(Error::InvalidWeight {
                min_eigenvalue: f64::NAN,
            });
        }
        let w = (&w + w.transpose()) * 0.5;
        let (vals, _) = sym_eig(&w);
        let min = vals.min();
        if !(min > 1e-12) {
            return Err(Error::InvalidWeight { min_eigenvalue: min });
        }
        Ok(WeightMatrix(w))
    }

    pub fn identity(d: usize) -> Self {
        WeightMatrix(RealMatrix::identity(d, d))
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::new(RealMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values)))
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn sqrt(&self) -> RealMatrix {
        spd_sqrt(&self.0)
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.0[(i, j)] == 0.0))
    }

    pub(crate) fn check_dim(&self, d: usize) -> Result<()> {
        if self.dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "weight is {0}x{0}, geometry has {d} parameters",
                self.dim()
            )));
        }
        Ok(())
    }
}

/// SLD QFIM `Q`, mean Uhlmann curvature `U` and the SLDs they come from.
#[derive(Debug, Clone, PartialEq)]
pub struct InformationGeometry {
    pub q: RealMatrix,
    pub u: RealMatrix,
    pub slds: Vec<HermitianOperator>,
    pub tangent_dim: usize,
}

impl InformationGeometry {
    /// Geometry given directly by `(Q, U)`, with no operators attached.
    pub fn from_matrices(q: RealMatrix, u: RealMatrix) -> Result<Self> {
        if q.nrows() != q.ncols() || u.shape() != q.shape() {
            return Err(Error::DimensionMismatch(format!(
                "Q is {:?}, U is {:?}",
                q.shape(),
                u.shape()
            )));
        }
        let q = (&q + q.transpose()) * 0.5;
        let u = (&u - u.transpose()) * 0.5;
        let tangent_dim = sym_rank(&q, RANK_TOL);
        Ok(Self {
            q,
            u,
            slds: Vec::new(),
            tangent_dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn condition_number(&self) -> f64 {
        crate::linalg::condition_number(&self.q)
    }

    pub fn is_singular(&self) -> bool {
        !(self.condition_number() <= SINGULAR_CONDITION)
    }

    /// `Q⁻¹`, failing with `SingularQfim` above the condition cut.
    pub fn q_inverse(&self) -> Result<RealMatrix> {
        self.q_inverse_with(SingularPolicy::Error).map(|(m, _)| m)
    }

    /// `Q⁻¹` or `Q⁺`; the flag reports whether the pseudo-inverse was used.
    pub fn q_inverse_with(&self, policy: SingularPolicy) -> Result<(RealMatrix, bool)> {
        let cond = self.condition_number();
        if cond <= SINGULAR_CONDITION {
            return Ok((spd_inverse(&self.q), false));
        }
        match policy {
            SingularPolicy::Error => Err(Error::SingularQfim { condition: cond }),
            SingularPolicy::PseudoInverse => Ok((sym_pinv(&self.q, RANK_TOL), true)),
        }
    }

    /// `Tr[ρ L_μ L_ν] = Q + iU`.
    pub fn l_gram(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), self.dim(), |i, j| c(self.q[(i, j)], self.u[(i, j)]))
    }
}

/// SLDs and `Q_μν = Re Tr[ρL_μL_ν]`, `U_μν = Im Tr[ρL_μL_ν]`.
pub fn compute_geometry(
    rho: &DensityMatrix,
    derivs: &[HermitianOperator],
    support_tol: f64,
) -> Result<InformationGeometry> {
    if derivs.is_empty() {
        return Err(Error::DimensionMismatch("at least one derivative is required".into()));
    }
    let slds = derivs
        .iter()
        .map(|d| sld_solve(rho, d, support_tol))
        .collect::<Result<Vec<_>>>()?;
    let d = slds.len();
    let gram = ComplexMatrix::from_fn(d, d, |i, j| rho.expect2(slds[i].matrix(), slds[j].matrix()));
    let q = gram.map(|z| z.re);
    let u = gram.map(|z| z.im);
    let q = (&q + q.transpose()) * 0.5;
    let u = (&u - u.transpose()) * 0.5;
    let tangent_dim = sym_rank(&q, RANK_TOL);
    Ok(InformationGeometry {
        q,
        u,
        slds,
        tangent_dim,
    })
}

/// RLD QFIM `J_μν = Tr[∂_μρ ∂_νρ ρ⁻¹]`; requires a full-rank state.
pub fn rld_qfim(rho: &DensityMatrix, derivs: &[HermitianOperator]) -> Result<ComplexMatrix> {
    let rld = derivs.iter().map(|d| rld_solve(rho, d)).collect::<Result<Vec<_>>>()?;
    let d = rld.len();
    let j = ComplexMatrix::from_fn(d, d, |a, b| {
        crate::linalg::trace_product(&(rho.matrix() * &rld[a]), &rld[b].adjoint())
    });
    Ok((&j + j.adjoint()) * c(0.5, 0.0))
}
