// SPDX-License-Identifier: Apache-2.0

//! Orthogonal complement of the SLD tangent space.

use super::InformationGeometry;
use crate::error::{Error, Result};
use crate::linalg::{c, sym_eig, trace, ComplexMatrix, DensityMatrix, HermitianOperator, RealMatrix};

/// Basis `P_j` of the normal space with the matrices the Holevo objective needs.
#[derive(Debug, Clone)]
pub struct NormalSpaceBasis {
    pub ops: Vec<HermitianOperator>,
    /// `[P_λ]_ij = Tr[ρP_iP_j]`, `m×m`.
    pub gram: ComplexMatrix,
    /// `S_ij = Im Tr[ρL_iP_j]`, `d×m`.
    pub coupling: RealMatrix,
    /// `Tr[ρL_μL_ν] = Q + iU`, `d×d`.
    pub l_gram: ComplexMatrix,
}

impl NormalSpaceBasis {
    pub fn dim(&self) -> usize {
        self.ops.len()
    }
}

/// Generalized Gell-Mann matrices: symmetric and antisymmetric pairs in
/// lexicographic `(j, k)` order, then the diagonal ones.
pub fn gell_mann_basis(n: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(n * n - 1);
    for j in 0..n {
        for k in j + 1..n {
            let mut s = ComplexMatrix::zeros(n, n);
            s[(j, k)] = c(1.0, 0.0);
            s[(k, j)] = c(1.0, 0.0);
            out.push(s);
            let mut a = ComplexMatrix::zeros(n, n);
            a[(j, k)] = c(0.0, -1.0);
            a[(k, j)] = c(0.0, 1.0);
            out.push(a);
        }
    }
    for l in 1..n {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut d = ComplexMatrix::zeros(n, n);
        for j in 0..l {
            d[(j, j)] = c(norm, 0.0);
        }
        d[(l, l)] = c(-(l as f64) * norm, 0.0);
        out.push(d);
    }
    out
}

fn inner(rho: &DensityMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    rho.expect2(a, b).re
}

/// Orthonormal basis (w.r.t. `⟨A,B⟩_ρ = Re Tr[ρAB]`) of the trace-zero
/// Hermitian operators orthogonal to the SLDs. Directions whose squared norm
/// falls below `tol` times the largest Gram eigenvalue are discarded.
pub fn tangent_normal_decomposition(
    rho: &DensityMatrix,
    g: &InformationGeometry,
    tol: f64,
) -> Result<NormalSpaceBasis> {
    let qi = g.q_inverse()?;
    let d = g.dim();
    if g.slds.len() != d {
        return Err(Error::DimensionMismatch("geometry carries no SLD operators".into()));
    }
    let n = rho.dim();
    let identity = ComplexMatrix::identity(n, n);
    let candidates: Vec<ComplexMatrix> = gell_mann_basis(n)
        .into_iter()
        .map(|x| {
            let shift = rho.expect2(&identity, &x).re;
            x - &identity * c(shift, 0.0)
        })
        .collect();

    let k = candidates.len();
    let gram = RealMatrix::from_fn(k, k, |i, j| inner(rho, &candidates[i], &candidates[j]));
    let scale = sym_eig(&gram).0.max().max(0.0);
    let cut = tol * scale;

    // orthonormal SLD frame E_a = Σ_i L_i (Q^{-1/2})_{ia}
    let (vals, vecs) = sym_eig(&qi);
    let qi_sqrt = &vecs * RealMatrix::from_diagonal(&vals.map(|x| x.max(0.0).sqrt())) * vecs.transpose();
    let mut frame: Vec<ComplexMatrix> = (0..d)
        .map(|a| {
            let mut e = ComplexMatrix::zeros(n, n);
            for (i, l) in g.slds.iter().enumerate() {
                e += l.matrix() * c(qi_sqrt[(i, a)], 0.0);
            }
            e
        })
        .collect();

    let mut ops = Vec::new();
    for x in candidates {
        let mut r = x;
        for _ in 0..2 {
            for e in &frame {
                let proj = inner(rho, e, &r);
                r -= e * c(proj, 0.0);
            }
        }
        let norm2 = inner(rho, &r, &r);
        if norm2 <= cut || norm2 <= 0.0 {
            continue;
        }
        let p = &r * c(1.0 / norm2.sqrt(), 0.0);
        frame.push(p.clone());
        ops.push(HermitianOperator::hermitize(p));
    }

    let m = ops.len();
    let gram = ComplexMatrix::from_fn(m, m, |i, j| rho.expect2(ops[i].matrix(), ops[j].matrix()));
    let coupling = RealMatrix::from_fn(d, m, |i, j| rho.expect2(g.slds[i].matrix(), ops[j].matrix()).im);
    let l_gram = ComplexMatrix::from_fn(d, d, |i, j| rho.expect2(g.slds[i].matrix(), g.slds[j].matrix()));
    debug_assert!(ops.iter().all(|p| trace(&(rho.matrix() * p.matrix())).norm() < 1e-8));
    Ok(NormalSpaceBasis {
        ops,
        gram: (&gram + gram.adjoint()) * c(0.5, 0.0),
        coupling,
        l_gram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{compute_geometry, RANK_TOL};
    use crate::linalg::{trace_product, DEFAULT_SUPPORT_TOL};
    use crate::models::{random, su2_qutrit_point, tunable_qubit_point, BlochVector, Su2Probe, TunableQubit};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn check_invariants(
        rho: &DensityMatrix,
        g: &InformationGeometry,
        derivs: &[HermitianOperator],
        b: &NormalSpaceBasis,
    ) {
        for p in &b.ops {
            assert!(trace_product(rho.matrix(), p.matrix()).norm() < 1e-10);
            for d in derivs {
                assert!(trace_product(d.matrix(), p.matrix()).norm() < 1e-8);
            }
        }
        let re = b.gram.map(|z| z.re);
        assert!(sym_eig(&re).0.iter().all(|&x| x > -1e-10));
        assert!((b.l_gram.map(|z| z.re) - &g.q).amax() < 1e-8);
        assert!((b.l_gram.map(|z| z.im) - &g.u).amax() < 1e-8);
    }

    #[test]
    fn gell_mann_is_orthogonal() {
        let b = gell_mann_basis(3);
        assert_eq!(b.len(), 8);
        for (i, x) in b.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let v = trace_product(x, y);
                let expected = if i == j { 2.0 } else { 0.0 };
                assert!((v - c(expected, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn full_rank_qubit_has_one_normal_direction() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let p = random::point(2, 2, &mut rng);
        let g = compute_geometry(&p.rho, &p.derivs, DEFAULT_SUPPORT_TOL).unwrap();
        let b = tangent_normal_decomposition(&p.rho, &g, RANK_TOL).unwrap();
        assert_eq!(b.dim(), 1);
        check_invariants(&p.rho, &g, &p.derivs, &b);
    }

    #[test]
    fn pure_qubit_normal_space_is_empty() {
        let cfg = TunableQubit::new(BlochVector::new(0.6, 0.0, 0.8).unwrap(), 0.7, 1.1, 0.3).unwrap();
        let p = tunable_qubit_point(&cfg, &[0.4, 0.2]).unwrap();
        let g = compute_geometry(&p.rho, &p.derivs, DEFAULT_SUPPORT_TOL).unwrap();
        let b = tangent_normal_decomposition(&p.rho, &g, RANK_TOL).unwrap();
        assert_eq!(b.dim(), 0);
    }

    #[test]
    fn qutrit_anchor_normal_space() {
        let cfg = Su2Probe::new(FRAC_PI_4, 0.0, 1.0).unwrap();
        let p = su2_qutrit_point(&cfg, PI, 0.0, 0.0).unwrap();
        let g = compute_geometry(&p.rho, &p.derivs, DEFAULT_SUPPORT_TOL).unwrap();
        let b = tangent_normal_decomposition(&p.rho, &g, RANK_TOL).unwrap();
        // pure state: only n−1 = 2 complex directions carry weight, three taken by the SLDs
        assert_eq!(b.dim(), 1);
        check_invariants(&p.rho, &g, &p.derivs, &b);
        assert!((b.gram.map(|z| z.re) - RealMatrix::identity(1, 1)).amax() < 1e-10);
    }

    #[test]
    fn random_qutrit_dimension_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for d in 1..=3 {
            let p = random::point(3, d, &mut rng);
            let g = compute_geometry(&p.rho, &p.derivs, DEFAULT_SUPPORT_TOL).unwrap();
            let b = tangent_normal_decomposition(&p.rho, &g, RANK_TOL).unwrap();
            assert_eq!(b.dim(), 8 - d);
            check_invariants(&p.rho, &g, &p.derivs, &b);
        }
    }

    #[test]
    fn mixed_balanced_qubit_element() {
        let cfg = TunableQubit::new(BlochVector::new(0.3, 0.2, 0.5).unwrap(), FRAC_PI_4, FRAC_PI_2, 0.7).unwrap();
        let p = tunable_qubit_point(&cfg, &[0.4, 0.0]).unwrap();
        let g = compute_geometry(&p.rho, &p.derivs, DEFAULT_SUPPORT_TOL).unwrap();
        let b = tangent_normal_decomposition(&p.rho, &g, RANK_TOL).unwrap();
        assert_eq!(b.dim(), 1);
        assert!(b.coupling.amax() < 1e-10);
    }

    #[test]
    fn singular_q_is_rejected() {
        let cfg = TunableQubit::new(BlochVector::new(0.3, 0.2, 0.5).unwrap(), 0.0, FRAC_PI_2, 0.7).unwrap();
        let p = tunable_qubit_point(&cfg, &[0.4, 0.0]).unwrap();
        let g = compute_geometry(&p.rho, &p.derivs, DEFAULT_SUPPORT_TOL).unwrap();
        assert!(matches!(
            tangent_normal_decomposition(&p.rho, &g, RANK_TOL),
            Err(Error::SingularQfim { .. })
        ));
    }
}
