//! The linear symplectic group in the standard structure, near-identity
//! generating triples and circle spectra.

mod spectrum;
mod triple;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{real_inf_norm, to_complex, CMatrix, RMatrix, Tolerances};

pub use spectrum::{circle_spectrum, eigenspace_dim, eigenspace_structure_report, CircleEigenvalue, EigenspaceReport};
pub use triple::{generating_triple, triple_to_matrix, GeneratingTriple};
pub(crate) use triple::inverse_with_condition;

/// Matrix of `omega` in `(x, y)` block order: `[[0, I], [-I, 0]]`.
pub fn omega(d: usize) -> RMatrix {
    let mut o = RMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        o[(i, d + i)] = 1.0;
        o[(d + i, i)] = -1.0;
    }
    o
}

/// Hermitian extension `omega(z, z') = z_x^T conj(z'_y) - z_y^T conj(z'_x)`,
/// evaluated on every pair of columns: entry `(i, j)` is `omega(u_j, v_i)`.
pub fn omega_gram(u: &CMatrix, v: &CMatrix) -> CMatrix {
    let d = u.nrows() / 2;
    v.adjoint() * to_complex(&omega(d).transpose()) * u
}

/// Returns whether `P^T Omega P = Omega` within `tol.sp` in the max-row-sum
/// norm, together with the residual.
pub fn is_symplectic(p: &RMatrix, tol: &Tolerances) -> Result<(bool, f64)> {
    if p.nrows() != p.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "symplectic matrix must be square, got {}x{}",
            p.nrows(),
            p.ncols()
        )));
    }
    if p.nrows() % 2 == 1 {
        return Err(Error::OddDimension(p.nrows()));
    }
    let o = omega(p.nrows() / 2);
    let residual = real_inf_norm(&(p.transpose() * &o * p - &o));
    Ok((residual <= tol.sp, residual))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    d: usize,
    m: RMatrix,
}

impl SymplecticMatrix {
    pub fn new(m: RMatrix, tol: &Tolerances) -> Result<Self> {
        let (ok, residual) = is_symplectic(&m, tol)?;
        if !ok || m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotSymplectic { residual });
        }
        Ok(SymplecticMatrix { d: m.nrows() / 2, m })
    }

    /// For matrices that are symplectic by construction.
    pub(crate) fn from_exact(m: RMatrix) -> Self {
        debug_assert!(m.nrows() % 2 == 0 && m.nrows() == m.ncols());
        SymplecticMatrix { d: m.nrows() / 2, m }
    }

    pub fn identity(d: usize) -> Self {
        SymplecticMatrix { d, m: RMatrix::identity(2 * d, 2 * d) }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> RMatrix {
        self.m
    }

    pub fn complex(&self) -> CMatrix {
        to_complex(&self.m)
    }

    /// Blocks `(a, b, c, d)` of `(x, y) -> (a x + b y, c x + d y)`.
    pub fn blocks(&self) -> (RMatrix, RMatrix, RMatrix, RMatrix) {
        let d = self.d;
        (
            self.m.view((0, 0), (d, d)).into_owned(),
            self.m.view((0, d), (d, d)).into_owned(),
            self.m.view((d, 0), (d, d)).into_owned(),
            self.m.view((d, d), (d, d)).into_owned(),
        )
    }

    pub fn from_blocks(a: &RMatrix, b: &RMatrix, c: &RMatrix, d: &RMatrix, tol: &Tolerances) -> Result<Self> {
        Self::new(assemble_blocks(a, b, c, d), tol)
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        SymplecticMatrix { d: self.d, m: &self.m * &other.m }
    }

    /// Exact inverse `Omega^T P^T Omega`.
    pub fn inverse(&self) -> SymplecticMatrix {
        let o = omega(self.d);
        SymplecticMatrix { d: self.d, m: o.transpose() * self.m.transpose() * o }
    }

    pub fn pow(&self, p: usize) -> SymplecticMatrix {
        let mut acc = RMatrix::identity(2 * self.d, 2 * self.d);
        for _ in 0..p {
            acc = &self.m * acc;
        }
        SymplecticMatrix { d: self.d, m: acc }
    }

    /// `Q P Q^{-1}`.
    pub fn conjugate_by(&self, q: &SymplecticMatrix) -> SymplecticMatrix {
        q.compose(self).compose(&q.inverse())
    }

    pub fn residual(&self) -> f64 {
        let o = omega(self.d);
        real_inf_norm(&(self.m.transpose() * &o * &self.m - &o))
    }
}

pub(crate) fn assemble_blocks(a: &RMatrix, b: &RMatrix, c: &RMatrix, d: &RMatrix) -> RMatrix {
    let n = a.nrows();
    let mut m = RMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(c);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

/// Counter-clockwise rotation `[[cos b, -sin b], [sin b, cos b]]` of the
/// `(x, y)` plane.
pub fn make_rotation(beta: f64) -> SymplecticMatrix {
    let (s, c) = beta.sin_cos();
    SymplecticMatrix::from_exact(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))
}

/// `[[1, r], [0, 1]]`.
pub fn make_shear(r: f64) -> SymplecticMatrix {
    SymplecticMatrix::from_exact(DMatrix::from_row_slice(2, 2, &[1.0, r, 0.0, 1.0]))
}

/// The complex structure `[[0, -I], [I, 0]]`.
pub fn make_j(d: usize) -> SymplecticMatrix {
    SymplecticMatrix::from_exact(omega(d).transpose())
}

/// Block sum acting as `p1` on the first `d1` conjugate coordinate pairs and
/// as `p2` on the remaining ones, in `(x..., y...)` order.
pub fn direct_sum(p1: &SymplecticMatrix, p2: &SymplecticMatrix) -> SymplecticMatrix {
    let (d1, d2) = (p1.d, p2.d);
    let d = d1 + d2;
    let place1 = |i: usize| if i < d1 { i } else { d + (i - d1) };
    let place2 = |i: usize| if i < d2 { d1 + i } else { d + d1 + (i - d2) };
    let mut m = RMatrix::zeros(2 * d, 2 * d);
    for r in 0..2 * d1 {
        for c in 0..2 * d1 {
            m[(place1(r), place1(c))] = p1.m[(r, c)];
        }
    }
    for r in 0..2 * d2 {
        for c in 0..2 * d2 {
            m[(place2(r), place2(c))] = p2.m[(r, c)];
        }
    }
    SymplecticMatrix::from_exact(m)
}
