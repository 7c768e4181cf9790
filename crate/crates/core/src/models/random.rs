// SPDX-License-Identifier: Apache-2.0

//! Random states, derivatives and weights for property tests and benchmarks.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::Vector3;
use rand::Rng;

use super::{BlochVector, ModelPoint, TunableQubit};
use crate::linalg::{c, trace, ComplexMatrix, DensityMatrix, HermitianOperator, RealMatrix};

fn complex_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Full-rank state whose smallest eigenvalue is at least `floor`.
pub fn density(n: usize, floor: f64, rng: &mut impl Rng) -> DensityMatrix {
    let a = complex_matrix(n, n, rng);
    let m = &a * a.adjoint();
    let m = &m / trace(&m);
    let mixed = m * c(1.0 - n as f64 * floor, 0.0) + ComplexMatrix::identity(n, n) * c(floor, 0.0);
    DensityMatrix::new(mixed).expect("random state is valid")
}

pub fn traceless_hermitian(n: usize, rng: &mut impl Rng) -> HermitianOperator {
    let a = complex_matrix(n, n, rng);
    let mut h = (&a + a.adjoint()) * c(0.5, 0.0);
    let shift = trace(&h) / c(n as f64, 0.0);
    h -= ComplexMatrix::identity(n, n) * shift;
    HermitianOperator::hermitize(h)
}

/// A full-rank `n`-level state with `d` independent random derivatives.
pub fn point(n: usize, d: usize, rng: &mut impl Rng) -> ModelPoint {
    let rho = density(n, 0.05, rng);
    let derivs = (0..d).map(|_| traceless_hermitian(n, rng)).collect();
    ModelPoint::new(rho, derivs).expect("dimensions agree")
}

/// Symmetric positive definite matrix with eigenvalues bounded below by 0.1.
pub fn spd(d: usize, rng: &mut impl Rng) -> RealMatrix {
    let b = RealMatrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
    &b * b.transpose() + RealMatrix::identity(d, d) * 0.1
}

/// Random real antisymmetric matrix.
pub fn antisymmetric(d: usize, scale: f64, rng: &mut impl Rng) -> RealMatrix {
    let a = RealMatrix::from_fn(d, d, |_, _| rng.gen_range(-scale..scale));
    &a - a.transpose()
}

/// A valid `(Q, U)` pair: the real and imaginary parts of a random Gram matrix.
pub fn geometry_pair(d: usize, rng: &mut impl Rng) -> (RealMatrix, RealMatrix) {
    let n = d + 2;
    let v = complex_matrix(n, d, rng);
    let g = v.adjoint() * v;
    let q = g.map(|z| z.re) + RealMatrix::identity(d, d) * 1e-3;
    let u = g.map(|z| z.im);
    ((&q + q.transpose()) * 0.5, (&u - u.transpose()) * 0.5)
}

/// Haar-like random unitary from the QR factorization of a random matrix.
pub fn unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    complex_matrix(n, n, rng).qr().q()
}

fn unit_vector(rng: &mut impl Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Pure tunable-qubit configuration with generic angles, plus `(λ₁, λ₂)`.
///
/// Draws are rejected until `det Q` is comfortably non-zero.
pub fn pure_tunable(rng: &mut impl Rng) -> (TunableQubit, [f64; 2]) {
    loop {
        let r = unit_vector(rng);
        let cfg = TunableQubit {
            r0: BlochVector::from_vector(r),
            gamma: rng.gen_range(0.0..PI),
            theta: rng.gen_range(0.0..PI),
            phi: rng.gen_range(0.0..2.0 * PI),
        };
        let lam = [rng.gen_range(0.0..PI), rng.gen_range(0.0..PI)];
        let p = super::tunable_qubit_point(&cfg, &lam).expect("valid config");
        let (q, _) = p.analytic_geometry.expect("tunable qubit has closed form");
        if q.determinant() > 1e-3 {
            return (cfg, lam);
        }
    }
}

/// Mixed tunable qubit at `γ = π/4`, `θ = π/2`, `|r₀| ∈ [0.1, 0.95]`.
pub fn mixed_balanced_tunable(rng: &mut impl Rng) -> (TunableQubit, [f64; 2]) {
    loop {
        let r = unit_vector(rng) * rng.gen_range(0.1..0.95);
        let cfg = TunableQubit {
            r0: BlochVector::from_vector(r),
            gamma: FRAC_PI_4,
            theta: FRAC_PI_2,
            phi: rng.gen_range(0.0..2.0 * PI),
        };
        let lam = [rng.gen_range(0.0..PI), 0.0];
        let p = super::tunable_qubit_point(&cfg, &lam).expect("valid config");
        let (q, _) = p.analytic_geometry.expect("tunable qubit has closed form");
        if q.determinant() > 1e-4 {
            return (cfg, lam);
        }
    }
}
