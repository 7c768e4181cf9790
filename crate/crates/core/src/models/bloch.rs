// SPDX-License-Identifier: Apache-2.0

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, DensityMatrix, HermitianOperator};

/// Qubit Bloch vector, `ρ = (I + r·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(Vector3<f64>);

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Vector3::new(x, y, z);
        if !v.iter().all(|a| a.is_finite()) {
            return Err(Error::InvalidConfig("Bloch components must be finite".into()));
        }
        if v.norm() > 1.0 + 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "Bloch vector norm {:.6} exceeds 1",
                v.norm()
            )));
        }
        Ok(BlochVector(v))
    }

    pub(crate) fn from_vector(v: Vector3<f64>) -> Self {
        BlochVector(v)
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }

    pub fn y(&self) -> f64 {
        self.0.y
    }

    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn density_matrix(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(pauli_combination(&self.0, 0.5) + ComplexMatrix::identity(2, 2) * c(0.5, 0.0))
    }
}

/// `s · (v·σ)`.
pub(crate) fn pauli_combination(v: &Vector3<f64>, s: f64) -> ComplexMatrix {
    ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            c(s * v.z, 0.0),
            c(s * v.x, -s * v.y),
            c(s * v.x, s * v.y),
            c(-s * v.z, 0.0),
        ],
    )
}

pub(crate) fn pauli_operator(v: &Vector3<f64>, s: f64) -> HermitianOperator {
    HermitianOperator::hermitize(pauli_combination(v, s))
}
