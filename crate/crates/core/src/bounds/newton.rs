// SPDX-License-Identifier: Apache-2.0

//! Damped Newton refinement with central-difference derivatives.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct PolishResult {
    pub x: Vec<f64>,
    pub value: f64,
    /// Objective evaluations spent.
    pub evaluations: usize,
    /// The predicted Newton decrease fell below `ftol·|f|`.
    pub stationary: bool,
}

/// Refines `x0` by Newton steps on `f`, using difference step `h` for the
/// gradient and Hessian. The Hessian spectrum is floored so every step is a
/// descent direction, and a backtracking line search accepts only strict
/// decreases, so the result is never worse than `x0`.
pub fn newton_polish<F>(f: F, x0: &[f64], h: f64, max_steps: usize, ftol: f64) -> PolishResult
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut evaluations = 1;
    let mut stationary = n == 0;
    for _ in 0..max_steps {
        if n == 0 {
            break;
        }
        let (grad, hess) = derivatives(&f, &x, fx, h);
        evaluations += n * (n + 1);

        let eig = hess.symmetric_eigen();
        let top = eig.eigenvalues.amax();
        if !top.is_finite() || top <= 0.0 {
            break;
        }
        let floor = 1e-10 * top;
        let coeffs = eig.eigenvectors.transpose() * &grad;
        let scaled = DVector::from_iterator(
            n,
            coeffs.iter().zip(eig.eigenvalues.iter()).map(|(c, l)| c / l.max(floor)),
        );
        let step = -(&eig.eigenvectors * &scaled);
        let predicted = 0.5 * coeffs.dot(&scaled);
        if predicted <= ftol * fx.abs() {
            stationary = true;
            break;
        }

        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + t * s).collect();
            let ft = f(&trial);
            evaluations += 1;
            if ft < fx {
                x = trial;
                fx = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }

    PolishResult {
        x,
        value: fx,
        evaluations,
        stationary,
    }
}

/// Central-difference gradient and Hessian of `f` at `x`.
fn derivatives<F>(f: &F, x: &[f64], fx: f64, h: f64) -> (DVector<f64>, DMatrix<f64>)
where
    F: Fn(&[f64]) -> f64,
{
    let n = x.len();
    let mut y = x.to_vec();
    let mut at = |moves: &[(usize, f64)]| {
        for &(i, s) in moves {
            y[i] += s;
        }
        let v = f(&y);
        for &(i, s) in moves {
            y[i] -= s;
        }
        v
    };
    let plus: Vec<f64> = (0..n).map(|i| at(&[(i, h)])).collect();
    let minus: Vec<f64> = (0..n).map(|i| at(&[(i, -h)])).collect();
    let grad = DVector::from_iterator(n, (0..n).map(|i| (plus[i] - minus[i]) / (2.0 * h)));
    let mut hess = DMatrix::zeros(n, n);
    for i in 0..n {
        hess[(i, i)] = (plus[i] - 2.0 * fx + minus[i]) / (h * h);
        for j in 0..i {
            let pp = at(&[(i, h), (j, h)]);
            let mm = at(&[(i, -h), (j, -h)]);
            let v = (pp + mm - plus[i] - minus[i] - plus[j] - minus[j] + 2.0 * fx) / (2.0 * h * h);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    (grad, hess)
}

/// Sequential quadratic programming for `min s(x)` subject to `c_j(x) = 0`
/// for `j < count`, with `c_j(x) = constraint(j, x)`.
///
/// Steps are accepted by backtracking on `merit`, which must be an exact
/// penalty for the constrained problem (in the Holevo case the objective
/// itself). The result is never worse than `x0` under `merit`. Difference
/// derivatives are exact for the quadratic functions this is used with, so
/// `h` may be large.
pub fn constrained_polish<S, C, M>(
    s: S,
    constraint: C,
    count: usize,
    merit: M,
    x0: &[f64],
    h: f64,
    max_steps: usize,
) -> PolishResult
where
    S: Fn(&[f64]) -> f64,
    C: Fn(usize, &[f64]) -> f64,
    M: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let p = count;
    let mut x = x0.to_vec();
    let mut best = merit(&x);
    let mut evaluations = 1;
    let mut stationary = false;
    let mut mult = DVector::zeros(p);

    for _ in 0..max_steps {
        if n == 0 || p == 0 {
            break;
        }
        let (g, mut lag) = derivatives(&s, &x, s(&x), h);
        let mut jac = DMatrix::zeros(p, n);
        let mut resid = DVector::zeros(p);
        for j in 0..p {
            let c = |y: &[f64]| constraint(j, y);
            let cx = c(&x);
            let (cg, ch) = derivatives(&c, &x, cx, h);
            resid[j] = cx;
            jac.set_row(j, &cg.transpose());
            lag += ch * mult[j];
        }
        evaluations += (p + 1) * (n * (n + 1) + 1);

        let mut kkt = DMatrix::zeros(n + p, n + p);
        kkt.view_mut((0, 0), (n, n)).copy_from(&lag);
        kkt.view_mut((n, 0), (p, n)).copy_from(&jac);
        kkt.view_mut((0, n), (n, p)).copy_from(&jac.transpose());
        let mut rhs = DVector::zeros(n + p);
        rhs.rows_mut(0, n).copy_from(&(-&g));
        rhs.rows_mut(n, p).copy_from(&(-&resid));
        let scale = kkt.amax().max(f64::MIN_POSITIVE);
        let Ok(sol) = kkt.svd(true, true).solve(&rhs, 1e-13 * scale) else {
            break;
        };
        let step = sol.rows(0, n).into_owned();
        let next_mult = sol.rows(n, p).into_owned();

        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a + t * d).collect();
            let v = merit(&trial);
            evaluations += 1;
            if v < best {
                let gain = best - v;
                x = trial;
                best = v;
                accepted = true;
                if gain <= 1e-15 * best.abs() {
                    stationary = true;
                }
                break;
            }
            t *= 0.5;
        }
        mult = next_mult;
        if !accepted {
            stationary = step.amax() <= 1e-12 * (1.0 + x.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
            break;
        }
        if stationary {
            break;
        }
    }

    PolishResult {
        x,
        value: best,
        evaluations,
        stationary,
    }
}
