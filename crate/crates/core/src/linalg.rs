// SPDX-License-Identifier: Apache-2.0

//! Dense complex-matrix primitives for small Hermitian operators.
//!
//! Everything here targets dimensions n ≤ 8, so norms and inverses are
//! computed from full eigen/singular value decompositions rather than
//! iterative estimators.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type RealMatrix = DMatrix<f64>;
pub type ComplexVector = DVector<Complex64>;

/// Default cut for `p_i + p_j` in the SLD solve.
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-10;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const DERIVATIVE_TRACE_TOL: f64 = 1e-10;
const RLD_RANK_TOL: f64 = 1e-10;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_real(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().sum()
}

/// `Tr[A B]` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b + b * a
}

pub fn to_complex(m: &RealMatrix) -> ComplexMatrix {
    m.map(|x| c(x, 0.0))
}

/// A square complex matrix that is Hermitian to within
/// `1e-12 · (1 + ‖H‖_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_square_finite(&m)?;
        let defect = hermiticity_defect(&m);
        if defect > HERMITIAN_TOL * (1.0 + max_abs(&m)) {
            return Err(Error::NonHermitianInput { defect });
        }
        Ok(Self::hermitize(m))
    }

    /// Symmetrizes `(A + A†)/2`; use for results that are Hermitian up to rounding.
    pub fn hermitize(m: ComplexMatrix) -> Self {
        let adj = m.adjoint();
        HermitianOperator((m + adj) * c(0.5, 0.0))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianOperator(ComplexMatrix::zeros(n, n))
    }

    pub fn from_real(m: &RealMatrix) -> Result<Self> {
        Self::new(to_complex(m))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn eig(&self) -> SpectralDecomposition {
        eig_unchecked(&self.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianOperator(&self.0 * c(s, 0.0))
    }

    /// `⟨ψ|H|ψ⟩`, real for Hermitian `H`.
    pub fn expectation(&self, psi: &ComplexVector) -> f64 {
        psi.dotc(&(&self.0 * psi)).re
    }
}

impl std::ops::Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        HermitianOperator(&self.0 + &rhs.0)
    }
}

/// Eigenvalues sorted descending with unitary eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let d = ComplexMatrix::from_diagonal(&DVector::from_iterator(n, self.eigenvalues.iter().map(|&x| c(x, 0.0))));
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }

    /// `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let d = ComplexMatrix::from_diagonal(&DVector::from_iterator(n, self.eigenvalues.iter().map(|&x| f(x))));
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }
}

fn check_square_finite(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted descending. Each eigenvector is rotated so that its
/// largest-magnitude component (lowest index among ties) is real positive.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<SpectralDecomposition> {
    check_square_finite(h)?;
    let defect = hermiticity_defect(h);
    if defect > HERMITIAN_TOL * (1.0 + max_abs(h)) {
        return Err(Error::NonHermitianInput { defect });
    }
    Ok(eig_unchecked(h))
}

fn eig_unchecked(h: &ComplexMatrix) -> SpectralDecomposition {
    let n = h.nrows();
    let herm = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut values = DVector::zeros(n);
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        values[col] = eig.eigenvalues[src];
        let v = eig.eigenvectors.column(src);
        let peak = v.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
        let pivot = v.iter().position(|z| z.norm() >= peak * (1.0 - 1e-12)).unwrap_or(0);
        let phase = if v[pivot].norm() > 0.0 {
            v[pivot].conj() / v[pivot].norm()
        } else {
            c(1.0, 0.0)
        };
        for row in 0..n {
            vectors[(row, col)] = v[row] * phase;
        }
    }
    SpectralDecomposition {
        eigenvalues: values,
        eigenvectors: vectors,
    }
}

pub fn singular_values(a: &ComplexMatrix) -> DVector<f64> {
    if a.is_empty() {
        return DVector::zeros(0);
    }
    a.clone().svd(false, false).singular_values
}

/// Trace norm `Tr|A| = Σ σ_i(A)`.
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).sum()
}

/// Largest singular value.
pub fn op_norm_inf(a: &ComplexMatrix) -> f64 {
    singular_values(a).iter().fold(0.0, |acc, &s| acc.max(s))
}

pub fn trace_norm_real(a: &RealMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values.sum()
}

/// A unit-trace positive semidefinite Hermitian operator.
///
/// The spectrum is computed once at construction; eigenvalues in
/// `[-1e-12, 0)` are clamped to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
    spectrum: SpectralDecomposition,
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let op = HermitianOperator::new(m)?;
        let tr = trace(op.matrix());
        if (tr - c(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let mut spectrum = op.eig();
        let min = spectrum.eigenvalues.min();
        if min < -TRACE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        spectrum.eigenvalues.apply(|x| *x = x.max(0.0));
        Ok(Self { op, spectrum })
    }

    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("state vector norm {norm}")));
        }
        Self::new(psi * psi.adjoint())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum.eigenvalues.min()
    }

    pub fn is_full_rank(&self, tol: f64) -> bool {
        self.min_eigenvalue() > tol
    }

    /// `Tr[ρ A B]`.
    pub fn expect2(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
        trace_product(&(self.matrix() * a), b)
    }
}

/// Solves `∂ρ = (Lρ + ρL)/2` in the eigenbasis of `ρ`.
///
/// Matrix elements with `p_i + p_j ≤ support_tol` are set to zero, which picks
/// the solution of minimal `Tr[ρL²]` on rank-deficient states.
pub fn sld_solve(rho: &DensityMatrix, drho: &HermitianOperator, support_tol: f64) -> Result<HermitianOperator> {
    let n = rho.dim();
    if drho.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "state is {n}x{n}, derivative is {0}x{0}",
            drho.dim()
        )));
    }
    let tr = trace(drho.matrix()).norm();
    if tr > DERIVATIVE_TRACE_TOL {
        return Err(Error::DerivativeNotTraceless { trace: tr });
    }
    let spec = rho.spectrum();
    let v = &spec.eigenvectors;
    let p = &spec.eigenvalues;
    let d = v.adjoint() * drho.matrix() * v;
    let l = ComplexMatrix::from_fn(n, n, |i, j| {
        let s = p[i] + p[j];
        if s > support_tol {
            d[(i, j)] * (2.0 / s)
        } else {
            c(0.0, 0.0)
        }
    });
    Ok(HermitianOperator::hermitize(v * l * v.adjoint()))
}

/// Right logarithmic derivative `L^R = ρ⁻¹ ∂ρ`; requires a full-rank state.
pub fn rld_solve(rho: &DensityMatrix, drho: &HermitianOperator) -> Result<ComplexMatrix> {
    let min = rho.min_eigenvalue();
    if min <= RLD_RANK_TOL {
        return Err(Error::SingularState { min_eigenvalue: min });
    }
    let inv = rho.spectrum().map(|p| c(1.0 / p, 0.0));
    Ok(inv * drho.matrix())
}

/// `exp(-i t H)` via the spectral decomposition of `H`.
pub fn expm_hermitian(h: &HermitianOperator, t: f64) -> ComplexMatrix {
    h.eig().map(|e| Complex64::from_polar(1.0, -t * e))
}

/// Real symmetric eigendecomposition, eigenvalues sorted descending.
pub fn sym_eig(m: &RealMatrix) -> (DVector<f64>, RealMatrix) {
    let n = m.nrows();
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = RealMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

fn sym_map(m: &RealMatrix, f: impl Fn(f64) -> f64) -> RealMatrix {
    let (vals, vecs) = sym_eig(m);
    let d = RealMatrix::from_diagonal(&vals.map(f));
    &vecs * d * vecs.transpose()
}

/// Spectral condition number of a symmetric PSD matrix (∞ when singular).
pub fn condition_number(m: &RealMatrix) -> f64 {
    let (vals, _) = sym_eig(m);
    let max = vals.max();
    let min = vals.min();
    if min <= 0.0 || max <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Inverse of a symmetric positive definite matrix.
pub fn spd_inverse(m: &RealMatrix) -> RealMatrix {
    let inv = sym_map(m, |x| 1.0 / x);
    (&inv + inv.transpose()) * 0.5
}

/// Rank-revealing pseudo-inverse: eigenvalues below `rel_tol · λ_max` are dropped.
pub fn sym_pinv(m: &RealMatrix, rel_tol: f64) -> RealMatrix {
    let (vals, _) = sym_eig(m);
    let cut = rel_tol * vals.max().max(0.0);
    sym_map(m, |x| if x > cut { 1.0 / x } else { 0.0 })
}

/// Principal square root of a symmetric PSD matrix.
pub fn spd_sqrt(m: &RealMatrix) -> RealMatrix {
    sym_map(m, |x| x.max(0.0).sqrt())
}

/// Numerical rank of a symmetric PSD matrix relative to its largest eigenvalue.
pub fn sym_rank(m: &RealMatrix, rel_tol: f64) -> usize {
    let (vals, _) = sym_eig(m);
    let max = vals.iter().fold(0.0_f64, |a, &x| a.max(x.abs()));
    if max == 0.0 {
        return 0;
    }
    vals.iter().filter(|x| x.abs() > rel_tol * max).count()
}

/// Numerical rank of a general real matrix from its singular values.
pub fn rank(m: &RealMatrix, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}
