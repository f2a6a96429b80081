//! Inertia of restricted Hermitian forms and kernels of matrix powers.

use num_complex::Complex64;

use super::{h_orthogonal, inertia, kernel_basis, CMatrix, HermitianMatrix, Inertia, Subspace, Tolerances};
use crate::error::{Error, Result};

/// Both sides of the index, coindex and nullity identities relating `h` to
/// its restrictions to `V` and to the h-orthogonal `V^h`.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedInertiaReport {
    pub full: Inertia,
    pub on_v: Inertia,
    pub on_vh: Inertia,
    pub dim_v_cap_vh: usize,
    pub dim_v_cap_ker: usize,
    /// Right-hand sides for (index, coindex, nullity).
    pub predicted: (i64, i64, i64),
}

impl RestrictedInertiaReport {
    pub fn index_ok(&self) -> bool {
        self.full.index as i64 == self.predicted.0
    }

    pub fn coindex_ok(&self) -> bool {
        self.full.coindex as i64 == self.predicted.1
    }

    pub fn nullity_ok(&self) -> bool {
        self.full.nullity as i64 == self.predicted.2
    }

    pub fn pass(&self) -> bool {
        self.index_ok() && self.coindex_ok() && self.nullity_ok()
    }
}

pub fn restricted_inertia_report(
    h: &HermitianMatrix,
    v: &Subspace,
    tol: &Tolerances,
) -> Result<RestrictedInertiaReport> {
    if v.ambient() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subspace lives in C^{} but form acts on C^{}",
            v.ambient(),
            h.dim()
        )));
    }
    let full = inertia(h, tol, None)?.inertia;
    let vh = h_orthogonal(h, v, tol)?;
    let ker = kernel_basis(h.matrix(), tol)?;
    // Restrictions are judged against the scale of the full form.
    let scale = h.inf_norm();
    let restricted = |s: &Subspace| -> Result<Inertia> {
        let r = h.restrict(s);
        let values = super::hermitian_eigenvalues(&r, tol)?;
        Ok(super::classify(&values, scale, tol, None).inertia)
    };
    let on_v = restricted(v)?;
    let on_vh = restricted(&vh)?;
    let dim_v_cap_vh = v.intersection_dim(&vh, tol)?;
    let dim_v_cap_ker = v.intersection_dim(&ker, tol)?;
    let shift = dim_v_cap_vh as i64 - dim_v_cap_ker as i64;
    let predicted = (
        on_v.index as i64 + on_vh.index as i64 + shift,
        on_v.coindex as i64 + on_vh.coindex as i64 + shift,
        on_vh.nullity as i64 - shift,
    );
    Ok(RestrictedInertiaReport { full, on_v, on_vh, dim_v_cap_vh, dim_v_cap_ker, predicted })
}

/// `dim ker(M^n - theta I)` against the sum over n-th roots `mu` of theta of
/// `dim ker(M - mu I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerEigenspaceReport {
    pub lhs: usize,
    pub per_root: Vec<(Complex64, usize)>,
    pub rhs: usize,
}

impl PowerEigenspaceReport {
    pub fn pass(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// The `n` complex n-th roots of `theta`, by increasing root index.
pub fn nth_roots(theta: Complex64, n: usize) -> Vec<Complex64> {
    let r = theta.norm().powf(1.0 / n as f64);
    let a = theta.arg();
    (0..n)
        .map(|j| Complex64::from_polar(r, (a + std::f64::consts::TAU * j as f64) / n as f64))
        .collect()
}

pub fn power_eigenspace_check(
    m: &CMatrix,
    theta: Complex64,
    n: usize,
    tol: &Tolerances,
) -> Result<PowerEigenspaceReport> {
    if theta.norm() == 0.0 {
        return Err(Error::ZeroTheta);
    }
    if n == 0 {
        return Err(Error::InvalidInput("power must be positive".into()));
    }
    let size = m.nrows();
    let id = CMatrix::identity(size, size);
    let mut power = id.clone();
    for _ in 0..n {
        power = &power * m;
    }
    let lhs = kernel_basis(&(power - &id * theta), tol)?.dim();
    let mut per_root = Vec::with_capacity(n);
    for mu in nth_roots(theta, n) {
        per_root.push((mu, kernel_basis(&(m - &id * mu), tol)?.dim()));
    }
    let rhs = per_root.iter().map(|(_, k)| k).sum();
    Ok(PowerEigenspaceReport { lhs, per_root, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RMatrix;
    use nalgebra::DVector;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn diagonal_with_kernel() {
        let h = HermitianMatrix::from_real_symmetric(
            &RMatrix::from_diagonal(&DVector::from_row_slice(&[1.0, -1.0, 0.0])),
            &tol(),
        )
        .unwrap();
        let e1 = Subspace::from_orthonormal(CMatrix::from_column_slice(3, 1, &[c(1.0), c(0.0), c(0.0)]), &tol())
            .unwrap();
        let rep = restricted_inertia_report(&h, &e1, &tol()).unwrap();
        assert_eq!(rep.full.index, 1);
        assert_eq!(rep.predicted.0, 1);
        assert_eq!(rep.on_v, Inertia::new(0, 1, 0));
        assert_eq!(rep.on_vh, Inertia::new(1, 0, 1));
        assert!(rep.pass());
    }

    #[test]
    fn zero_subspace_is_trivial() {
        let h = HermitianMatrix::from_real_symmetric(
            &RMatrix::from_diagonal(&DVector::from_row_slice(&[3.0, -1.0])),
            &tol(),
        )
        .unwrap();
        let rep = restricted_inertia_report(&h, &Subspace::zero(2), &tol()).unwrap();
        assert_eq!(rep.on_vh, rep.full);
        assert!(rep.pass());
    }

    #[test]
    fn isotropic_line_is_counted() {
        // V = span(e1 + e2) is h-isotropic for diag(1, -1)
        let h = HermitianMatrix::from_real_symmetric(
            &RMatrix::from_diagonal(&DVector::from_row_slice(&[1.0, -1.0])),
            &tol(),
        )
        .unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = Subspace::from_orthonormal(CMatrix::from_column_slice(2, 1, &[c(s), c(s)]), &tol()).unwrap();
        let rep = restricted_inertia_report(&h, &v, &tol()).unwrap();
        assert_eq!(rep.dim_v_cap_vh, 1);
        assert_eq!(rep.on_v, Inertia::new(0, 0, 1));
        assert!(rep.pass());
    }

    #[test]
    fn jordan_block_power() {
        let m = CMatrix::from_row_slice(3, 3, &[c(2.0), c(1.0), c(0.0), c(0.0), c(2.0), c(1.0), c(0.0), c(0.0), c(2.0)]);
        let rep = power_eigenspace_check(&m, c(4.0), 2, &tol()).unwrap();
        assert_eq!((rep.lhs, rep.rhs), (1, 1));
    }

    #[test]
    fn identity_cube_roots() {
        let rep = power_eigenspace_check(&CMatrix::identity(2, 2), c(1.0), 3, &tol()).unwrap();
        assert_eq!(rep.lhs, 2);
        let dims: Vec<usize> = rep.per_root.iter().map(|r| r.1).collect();
        assert_eq!(dims, vec![2, 0, 0]);
    }

    #[test]
    fn rotation_fifth_power() {
        let a = std::f64::consts::TAU / 5.0;
        let m = CMatrix::from_row_slice(2, 2, &[c(a.cos()), c(-a.sin()), c(a.sin()), c(a.cos())]);
        let rep = power_eigenspace_check(&m, c(1.0), 5, &tol()).unwrap();
        assert_eq!(rep.lhs, 2);
        assert_eq!(rep.per_root.iter().filter(|r| r.1 == 1).count(), 2);
        assert!(rep.pass());
    }

    #[test]
    fn zero_theta_rejected() {
        assert_eq!(
            power_eigenspace_check(&CMatrix::identity(2, 2), c(0.0), 2, &tol()),
            Err(Error::ZeroTheta)
        );
    }
}
