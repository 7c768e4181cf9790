// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NonHermitianInput { defect: f64 },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("derivative is not traceless (|Tr| = {trace:.3e})")]
    DerivativeNotTraceless { trace: f64 },

    #[error("state is rank deficient (smallest eigenvalue {min_eigenvalue:.3e}); RLD undefined")]
    SingularState { min_eigenvalue: f64 },

    #[error("QFIM is singular (condition number {condition:.3e})")]
    SingularQfim { condition: f64 },

    #[error("weight matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    InvalidWeight { min_eigenvalue: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("finite-difference step too large: one-step and Richardson estimates differ by {discrepancy:.3e}")]
    StepTooLarge { discrepancy: f64 },

    #[error("bound hierarchy violated: {0}")]
    HierarchyViolation(String),

    #[error("invalid model configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid sweep specification: {0}")]
    InvalidSpec(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}
