use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::{bott_indices, check_unit, FactorList};
use crate::linalg::{inertia, CMatrix, HermitianMatrix, Inertia, Tolerances};
use crate::symplectic::{circle_spectrum, direct_sum, eigenspace_dim, generating_triple, make_rotation, SymplecticMatrix};

/// Jumps of the Bott indices when `theta` is rotated slightly
/// counter-clockwise (`plus`) or clockwise (`minus`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplittingNumbers {
    pub theta: Complex64,
    pub s_plus: usize,
    pub s_minus: usize,
    pub co_s_plus: usize,
    pub co_s_minus: usize,
    /// `dim ker(P - theta I)`.
    pub nullity: usize,
    /// Rotation angle used for the one-sided perturbations.
    pub epsilon: f64,
}

impl SplittingNumbers {
    pub fn as_tuple(&self) -> (usize, usize, usize, usize) {
        (self.s_plus, self.s_minus, self.co_s_plus, self.co_s_minus)
    }

    fn zero(theta: Complex64, epsilon: f64) -> Self {
        SplittingNumbers { theta, s_plus: 0, s_minus: 0, co_s_plus: 0, co_s_minus: 0, nullity: 0, epsilon }
    }
}

/// Matrix `G` with `g_theta(Z, Z') = <G Z, Z'>`, where
/// `g_theta(Z, Z') = <Y~ - theta Y, X~'> + <X - conj(theta) X~, Y'>` and
/// `(X~, Y~) = P (X, Y)`. In blocks of `P = [[a, b], [c, d]]`:
/// `G = [[a^T c, a^T d - theta a^T], [b^T c + I - conj(theta) a, b^T d - theta b^T - conj(theta) b]]`.
pub fn g_theta_matrix(p: &SymplecticMatrix, theta: Complex64, tol: &Tolerances) -> Result<HermitianMatrix> {
    check_unit(theta, tol)?;
    let n = p.d();
    let (a, b, c, d) = p.blocks();
    let cx = |m: &crate::linalg::RMatrix| crate::linalg::to_complex(m);
    let id = CMatrix::identity(n, n);
    let at = cx(&a.transpose());
    let bt = cx(&b.transpose());
    let xx = cx(&(a.transpose() * &c));
    let xy = cx(&(a.transpose() * &d)) - &at * theta;
    let yx = cx(&(b.transpose() * &c)) + &id - cx(&a) * theta.conj();
    let yy = cx(&(b.transpose() * &d)) - &bt * theta - cx(&b) * theta.conj();
    let mut g = CMatrix::zeros(2 * n, 2 * n);
    g.view_mut((0, 0), (n, n)).copy_from(&xx);
    g.view_mut((0, n), (n, n)).copy_from(&xy);
    g.view_mut((n, 0), (n, n)).copy_from(&yx);
    g.view_mut((n, n), (n, n)).copy_from(&yy);
    HermitianMatrix::new(g, &Tolerances { sym: tol.sym.max(tol.sp), ..*tol })
        .map_err(|e| match e {
            Error::NonHermitianInput { residual } => Error::NotSymplectic { residual },
            other => other,
        })
}

/// Half the smallest angular distance between distinct circle eigenvalues of
/// `P`, clamped to `[1e-3, 0.1]`; `0.1` when there is at most one.
pub fn splitting_epsilon(p: &SymplecticMatrix, tol: &Tolerances) -> Result<f64> {
    let spec = circle_spectrum(p, tol)?;
    if spec.len() < 2 {
        return Ok(0.1);
    }
    let mut gap = f64::INFINITY;
    for i in 0..spec.len() {
        let next = if i + 1 < spec.len() { spec[i + 1].angle } else { spec[0].angle + TAU };
        gap = gap.min(next - spec[i].angle);
    }
    Ok((0.5 * gap).clamp(1e-3, 0.1))
}

fn check_splitting(s: &SplittingNumbers, d: usize) -> Result<()> {
    let bound = s.nullity.min(d);
    let within = [s.s_plus, s.s_minus, s.co_s_plus, s.co_s_minus].iter().all(|&x| x <= bound);
    if !within || s.s_plus + s.co_s_plus != s.nullity || s.s_minus + s.co_s_minus != s.nullity {
        return Err(Error::InvariantViolation(format!(
            "splitting numbers {:?} inconsistent with nullity {} in dimension {d}",
            s.as_tuple(),
            s.nullity
        )));
    }
    Ok(())
}

fn jump(after: usize, before: usize, what: &str, theta: Complex64) -> Result<usize> {
    after.checked_sub(before).ok_or_else(|| {
        Error::InvariantViolation(format!("{what} decreases away from theta = {theta} ({before} -> {after})"))
    })
}

/// `S^± = ind(g_{theta e^{±i eps}}) - ind(g_theta)` and the coindex analogues.
pub fn splitting_numbers(p: &SymplecticMatrix, theta: Complex64, tol: &Tolerances) -> Result<SplittingNumbers> {
    check_unit(theta, tol)?;
    let epsilon = splitting_epsilon(p, tol)?;
    let nullity = eigenspace_dim(p, theta, tol)?;
    if nullity == 0 {
        return Ok(SplittingNumbers::zero(theta, epsilon));
    }
    let at = |th: Complex64| -> Result<Inertia> { Ok(inertia(&g_theta_matrix(p, th, tol)?, tol, None)?.inertia) };
    let base = at(theta)?;
    let plus = at(theta * Complex64::from_polar(1.0, epsilon))?;
    let minus = at(theta * Complex64::from_polar(1.0, -epsilon))?;
    let s = SplittingNumbers {
        theta,
        s_plus: jump(plus.index, base.index, "index", theta)?,
        s_minus: jump(minus.index, base.index, "index", theta)?,
        co_s_plus: jump(plus.coindex, base.coindex, "coindex", theta)?,
        co_s_minus: jump(minus.coindex, base.coindex, "coindex", theta)?,
        nullity,
        epsilon,
    };
    check_splitting(&s, p.d())?;
    Ok(s)
}

/// The same numbers read from the theta-Hessian of a generating family whose
/// monodromy is the matrix of interest.
pub fn splitting_numbers_via_family(f: &FactorList, theta: Complex64, tol: &Tolerances) -> Result<SplittingNumbers> {
    check_unit(theta, tol)?;
    let p = f.monodromy(tol)?;
    let epsilon = splitting_epsilon(&p, tol)?;
    let nullity = eigenspace_dim(&p, theta, tol)?;
    if nullity == 0 {
        return Ok(SplittingNumbers::zero(theta, epsilon));
    }
    let base = bott_indices(f, theta, tol)?.inertia;
    let plus = bott_indices(f, theta * Complex64::from_polar(1.0, epsilon), tol)?.inertia;
    let minus = bott_indices(f, theta * Complex64::from_polar(1.0, -epsilon), tol)?.inertia;
    let s = SplittingNumbers {
        theta,
        s_plus: jump(plus.index, base.index, "index", theta)?,
        s_minus: jump(minus.index, base.index, "index", theta)?,
        co_s_plus: jump(plus.coindex, base.coindex, "coindex", theta)?,
        co_s_minus: jump(minus.coindex, base.coindex, "coindex", theta)?,
        nullity,
        epsilon,
    };
    check_splitting(&s, p.d())?;
    Ok(s)
}

/// A short factor list with monodromy `P`: `P` itself when it has a
/// generating triple, else `R` followed by `P R^{-1}` for a uniform rotation
/// `R` of every conjugate plane.
pub fn factorize_matrix(p: &SymplecticMatrix, tol: &Tolerances) -> Result<FactorList> {
    if let Ok(f) = FactorList::from_factors(std::slice::from_ref(p), tol) {
        return Ok(f);
    }
    let d = p.d();
    for phi in [FRAC_PI_4, -FRAC_PI_4, FRAC_PI_3, -FRAC_PI_3, FRAC_PI_6, -FRAC_PI_6, 1.0, -1.0] {
        let mut r = make_rotation(phi);
        for _ in 1..d {
            r = direct_sum(&r, &make_rotation(phi));
        }
        let rest = p.compose(&r.inverse());
        if generating_triple(&rest, tol).is_ok() {
            return FactorList::from_factors(&[r, rest], tol);
        }
    }
    Err(Error::BlockNotInvertible { condition: f64::INFINITY })
}
