use num_complex::Complex64;

use super::FactorList;
use crate::symplectic::eigenspace_dim;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_residual, inertia, CMatrix, HermitianMatrix, InertiaOutcome, Tolerances};

pub(crate) fn check_unit(theta: Complex64, tol: &Tolerances) -> Result<()> {
    if !theta.re.is_finite() || !theta.im.is_finite() || (theta.norm() - 1.0).abs() > tol.zero {
        return Err(Error::NotUnitModulus { re: theta.re, im: theta.im });
    }
    Ok(())
}

/// Hessian of the generating family with the boundary coupling twisted by
/// `theta`, in coordinates `(X_0, Y_0, ..., X_{k-1}, Y_{k-1})`.
///
/// Row `X_j` couples to `Y_{j-1}` through `I + B_{j-1}^T` (times `conj(theta)`
/// when `j = 0`), to `Y_j` through `-I` and to `X_j` through `A_{j-1}`; row
/// `Y_j` couples to `X_{j+1}` through `I + B_j` (times `theta` when
/// `j = k-1`), to `X_j` through `-I` and to `Y_j` through `C_j`.
pub fn theta_hessian(f: &FactorList, theta: Complex64, tol: &Tolerances) -> Result<HermitianMatrix> {
    check_unit(theta, tol)?;
    let d = f.d();
    let k = f.k();
    let n = 2 * d * k;
    let x = |j: usize| 2 * d * j;
    let y = |j: usize| 2 * d * j + d;
    let mut h = CMatrix::zeros(n, n);
    let one = Complex64::new(1.0, 0.0);
    for (j, t) in f.triples().iter().enumerate() {
        let jp = (j + 1) % k;
        let twist = if j == k - 1 { theta } else { one };
        for r in 0..d {
            for c in 0..d {
                h[(x(jp) + r, x(jp) + c)] += Complex64::new(t.a()[(r, c)], 0.0);
                h[(y(j) + r, y(j) + c)] += Complex64::new(t.c()[(r, c)], 0.0);
                let ib = t.b()[(r, c)] + if r == c { 1.0 } else { 0.0 };
                // (Y_j, X_{j+1}) and its adjoint (X_{j+1}, Y_j)
                h[(y(j) + r, x(jp) + c)] += twist * ib;
                h[(x(jp) + c, y(j) + r)] += twist.conj() * ib;
            }
            h[(y(j) + r, x(j) + r)] -= one;
            h[(x(j) + r, y(j) + r)] -= one;
        }
    }
    debug_assert_eq!(hermitian_residual(&h), 0.0);
    Ok(HermitianMatrix::from_exact(h))
}

/// `(ind_theta, coind_theta, nul_theta)`: inertia of the theta-Hessian with the
/// nullity pinned to `dim ker(P - theta I)`, `P` the monodromy.
pub fn bott_indices(f: &FactorList, theta: Complex64, tol: &Tolerances) -> Result<InertiaOutcome> {
    let h = theta_hessian(f, theta, tol)?;
    let p = f.monodromy(tol)?;
    inertia(&h, tol, Some(eigenspace_dim(&p, theta, tol)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigenvalues, Inertia};
    use crate::symplectic::{make_rotation, make_shear};
    use std::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_factors_d1_k2() {
        let h = theta_hessian(&FactorList::identity(1, 2), c(1.0, 0.0), &tol()).unwrap();
        let expected = [
            [0.0, -1.0, 0.0, 1.0],
            [-1.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, -1.0],
            [1.0, 0.0, -1.0, 0.0],
        ];
        for r in 0..4 {
            for s in 0..4 {
                assert_eq!(h.matrix()[(r, s)], c(expected[r][s], 0.0));
            }
        }
        let inr = crate::linalg::inertia(&h, &tol(), None).unwrap().inertia;
        assert_eq!(inr, Inertia::new(1, 1, 2));
    }

    #[test]
    fn identity_factor_bott_indices() {
        for d in 1..3 {
            for k in 1..5 {
                let f = FactorList::identity(d, k);
                let at_one = bott_indices(&f, c(1.0, 0.0), &tol()).unwrap();
                assert_eq!(at_one.inertia, Inertia::new(d * (k - 1), d * (k - 1), 2 * d));
                assert_eq!(at_one.warning, None);
                let at_minus = bott_indices(&f, c(-1.0, 0.0), &tol()).unwrap();
                assert_eq!(at_minus.inertia, Inertia::new(d * k, d * k, 0));
            }
        }
    }

    #[test]
    fn single_rotation_factor() {
        let alpha = 0.7;
        let f = FactorList::from_factors(&[make_rotation(alpha)], &tol()).unwrap();
        let h = theta_hessian(&f, c(1.0, 0.0), &tol()).unwrap();
        let (t, s) = (alpha.tan(), 1.0 / alpha.cos() - 1.0);
        assert!((h.matrix()[(0, 0)].re - t).abs() < 1e-12);
        assert!((h.matrix()[(0, 1)].re - s).abs() < 1e-12);
        assert!((h.matrix()[(1, 1)].re - t).abs() < 1e-12);
        let at_eig = bott_indices(&f, Complex64::from_polar(1.0, alpha), &tol()).unwrap();
        assert_eq!(at_eig.inertia, Inertia::new(0, 1, 1));
    }

    #[test]
    fn shear_factor_matches_small_form() {
        // k = 1 with triple (0, 0, -r)
        for r in [-1.0, 0.0, 2.0] {
            let f = FactorList::from_factors(&[make_shear(r)], &tol()).unwrap();
            for a in [0.0, 0.4, PI / 2.0, 2.0, PI] {
                let th = Complex64::from_polar(1.0, a);
                let h = theta_hessian(&f, th, &tol()).unwrap();
                let m = h.matrix();
                assert!((m[(0, 0)]).norm() < 1e-15);
                assert!((m[(1, 0)] - (th - 1.0)).norm() < 1e-15);
                assert!((m[(1, 1)] - c(-r, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn conjugate_theta_same_spectrum() {
        let f = FactorList::from_factors(&[make_rotation(0.3), make_shear(0.5), make_rotation(-0.2)], &tol()).unwrap();
        for a in [0.2, 1.0, 2.5] {
            let th = Complex64::from_polar(1.0, a);
            let e1 = hermitian_eigenvalues(&theta_hessian(&f, th, &tol()).unwrap(), &tol()).unwrap();
            let e2 = hermitian_eigenvalues(&theta_hessian(&f, th.conj(), &tol()).unwrap(), &tol()).unwrap();
            for (u, v) in e1.iter().zip(&e2) {
                assert!((u - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn off_circle_theta_rejected() {
        let r = theta_hessian(&FactorList::identity(1, 2), c(1.1, 0.0), &tol());
        assert!(matches!(r, Err(Error::NotUnitModulus { .. })));
    }
}
