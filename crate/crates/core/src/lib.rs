// SPDX-License-Identifier: Apache-2.0

//! Multiparameter quantum estimation bounds.
//!
//! Computes the SLD, RLD, `T` and `R` bounds and a numerical Holevo bound for
//! finite-dimensional parameterized states, plus parameter sweeps over a few
//! qubit and qutrit model families.

// `!(a <= b)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod models;
pub mod sweep;

pub use bounds::{
    c_r_bound, c_rld, c_sld, c_t_bound, full_report, holevo_pure_qubit_closed_form, holevo_tangent_min, BoundsReport,
    Flag, HolevoOptions, HolevoSolution, ReportOptions,
};
pub use error::{Error, Result};
pub use geometry::{
    compute_geometry, quantumness_r, rld_qfim, t_measure, t_saturation_analysis, tangent_normal_decomposition,
    weight_transform, InformationGeometry, NormalSpaceBasis, WeightMatrix,
};
pub use linalg::{
    eig_hermitian, op_norm_inf, rld_solve, sld_solve, trace_norm, ComplexMatrix, DensityMatrix, HermitianOperator,
    RealMatrix, SpectralDecomposition,
};
pub use models::{BlochVector, ModelConfig, ModelId, ModelPoint};
pub use sweep::{
    emit, figure_preset, run_point, run_sweep, Axis, Output, OutputFormat, ResultRow, SweepSpec, WeightSpec,
};
