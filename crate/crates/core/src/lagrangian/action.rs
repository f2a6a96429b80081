use nalgebra::DVector;

use super::{rk4_fundamental, rk4_trajectory, QuadraticLagrangian};
use crate::error::{Error, Result};
use crate::linalg::{RMatrix, Tolerances};
use crate::symplectic::{inverse_with_condition, GeneratingTriple};

pub const DEFAULT_QUADRATURE_STEPS: usize = 256;

/// Generating triple of the Hamiltonian flow over `[t0, t1]`, read off from
/// the action of its orbits.
///
/// For `w = (X1, Y0)` the orbit starting at `(X0, Y0)` with `X(t1) = X1` has
/// `f(w) = <Y0, X0 - X1> + int (<Y, X'> - H) dt`; the integral uses composite
/// Simpson on `quadrature_steps` intervals, and the quadratic form `f` is
/// recovered by polarization on basis inputs.
pub fn action_generating_triple(
    l: &QuadraticLagrangian,
    t0: f64,
    t1: f64,
    quadrature_steps: usize,
    tol: &Tolerances,
) -> Result<GeneratingTriple> {
    if !(t1 > t0) {
        return Err(Error::DegenerateTimeSpan { t0, t1 });
    }
    let d = l.d();
    let n = 2 * d;
    let steps = (quadrature_steps.max(2) + 1) / 2 * 2;
    let s = |t: f64| l.hamiltonian_hessian_or_nan(t);

    let p = rk4_fundamental(&s, t0, t1, steps, None);
    let a = p.view((0, 0), (d, d)).into_owned();
    let b = p.view((0, d), (d, d)).into_owned();
    let (a_inv, cond) = inverse_with_condition(&a, crate::linalg::real_inf_norm(&p)).ok_or(Error::BlockNotInvertible { condition: f64::INFINITY })?;
    if cond > 1.0 / tol.zero {
        return Err(Error::BlockNotInvertible { condition: cond });
    }

    let phi = rk4_trajectory(&s, t0, t1, steps, &RMatrix::identity(n, n));
    let h = (t1 - t0) / steps as f64;
    let hessians: Vec<RMatrix> = (0..=steps).map(|i| s(if i == steps { t1 } else { t0 + i as f64 * h })).collect();

    let action = |w: &DVector<f64>| -> f64 {
        let x1 = w.rows(0, d).into_owned();
        let y0 = w.rows(d, d).into_owned();
        let x0 = &a_inv * (&x1 - &b * &y0);
        let mut z0 = DVector::zeros(n);
        z0.rows_mut(0, d).copy_from(&x0);
        z0.rows_mut(d, d).copy_from(&y0);
        let mut integral = 0.0;
        for i in 0..=steps {
            let z = &phi[i] * &z0;
            let sz = &hessians[i] * &z;
            let y = z.rows(d, d);
            let x_dot = sz.rows(d, d);
            let value = y.dot(&x_dot) - 0.5 * z.dot(&sz);
            let weight = if i == 0 || i == steps {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            integral += weight * value;
        }
        y0.dot(&(x0 - x1)) + integral * h / 3.0
    };

    let basis = |i: usize| {
        let mut e = DVector::zeros(n);
        e[i] = 1.0;
        e
    };
    let diag: Vec<f64> = (0..n).map(|i| action(&basis(i))).collect();
    let mut q = RMatrix::zeros(n, n);
    for i in 0..n {
        q[(i, i)] = 2.0 * diag[i];
        for j in i + 1..n {
            let v = action(&(basis(i) + basis(j))) - diag[i] - diag[j];
            q[(i, j)] = v;
            q[(j, i)] = v;
        }
    }
    let ta = q.view((0, 0), (d, d)).into_owned();
    let tb = q.view((d, 0), (d, d)).into_owned();
    let tc = q.view((d, d), (d, d)).into_owned();
    GeneratingTriple::new(ta, tb, tc, tol)
}

/// [`action_generating_triple`] on the segment `[j/k, (j+1)/k]`.
pub fn segment_action_triple(
    l: &QuadraticLagrangian,
    j: usize,
    k: usize,
    quadrature_steps: usize,
    tol: &Tolerances,
) -> Result<GeneratingTriple> {
    if k == 0 || j >= k {
        return Err(Error::InvalidInput(format!("segment {j} out of range for k = {k}")));
    }
    action_generating_triple(l, j as f64 / k as f64, (j + 1) as f64 / k as f64, quadrature_steps, tol)
}
