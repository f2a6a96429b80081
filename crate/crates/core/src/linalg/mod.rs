//! Dense Hermitian linear algebra: eigenvalues, inertia, kernels and
//! h-orthogonal complements.

mod jacobi;
pub mod restricted;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use restricted::{
    nth_roots, power_eigenspace_check, restricted_inertia_report, PowerEigenspaceReport,
    RestrictedInertiaReport,
};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

/// Numerical thresholds shared by every computation in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative threshold below which an eigenvalue counts as zero.
    pub zero: f64,
    /// Residual allowed for symmetry and orthonormality checks.
    pub sym: f64,
    /// Residual allowed for `P^T Omega P = Omega`.
    pub sp: f64,
    pub jacobi_max_sweeps: usize,
    pub jacobi_off_target: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero: 1e-9,
            sym: 1e-9,
            sp: 1e-7,
            jacobi_max_sweeps: 100,
            jacobi_off_target: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.zero, self.sym, self.sp, self.jacobi_off_target];
        if positive.iter().any(|x| !(*x > 0.0) || !x.is_finite()) || self.jacobi_max_sweeps == 0 {
            return Err(Error::InvalidInput(format!("tolerances must be positive: {self:?}")));
        }
        Ok(())
    }

    /// Minimal angular separation between distinct circle eigenvalues.
    pub fn angle_gap(&self) -> f64 {
        (10.0 * self.zero).max(1e-6)
    }
}

/// Index, coindex and nullity of a Hermitian form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Inertia {
    pub index: usize,
    pub coindex: usize,
    pub nullity: usize,
}

impl Inertia {
    pub fn new(index: usize, coindex: usize, nullity: usize) -> Self {
        Inertia { index, coindex, nullity }
    }

    pub fn dim(&self) -> usize {
        self.index + self.coindex + self.nullity
    }
}

impl std::ops::Add for Inertia {
    type Output = Inertia;
    fn add(self, o: Inertia) -> Inertia {
        Inertia::new(self.index + o.index, self.coindex + o.coindex, self.nullity + o.nullity)
    }
}

impl std::iter::Sum for Inertia {
    fn sum<I: Iterator<Item = Inertia>>(iter: I) -> Inertia {
        iter.fold(Inertia::default(), |a, b| a + b)
    }
}

impl std::fmt::Display for Inertia {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(ind {}, coind {}, nul {})", self.index, self.coindex, self.nullity)
    }
}

/// A dense Hermitian matrix. Construction checks the Hermitian residual and
/// then stores the exact Hermitian part.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: CMatrix,
}

impl HermitianMatrix {
    pub fn new(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let residual = hermitian_residual(&m);
        let scale = max_abs(&m).max(1.0);
        if residual > tol.sym * scale {
            return Err(Error::NonHermitianInput { residual });
        }
        let sym = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(HermitianMatrix { m: sym })
    }

    pub fn from_real_symmetric(m: &RMatrix, tol: &Tolerances) -> Result<Self> {
        Self::new(m.map(|x| Complex64::new(x, 0.0)), tol)
    }

    /// Wraps a matrix that is Hermitian by construction, without checks.
    pub(crate) fn from_exact(m: CMatrix) -> Self {
        debug_assert!(hermitian_residual(&m) == 0.0);
        HermitianMatrix { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn is_real(&self) -> bool {
        self.m.iter().all(|z| z.im == 0.0)
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        inf_norm(&self.m)
    }

    /// Restriction of the form to `v`, expressed in the basis of `v`.
    pub fn restrict(&self, v: &Subspace) -> HermitianMatrix {
        let b = v.basis();
        let r = b.adjoint() * &self.m * b;
        let sym = (&r + r.adjoint()) * Complex64::new(0.5, 0.0);
        HermitianMatrix { m: sym }
    }
}

pub fn hermitian_residual(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

pub fn inf_norm(m: &CMatrix) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn real_inf_norm(m: &RMatrix) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Past this dimension eigenvalue-only requests skip Jacobi.
const DENSE_QR_ABOVE: usize = 64;

/// Eigenvalues in nondecreasing order.
pub fn hermitian_eigenvalues(h: &HermitianMatrix, tol: &Tolerances) -> Result<Vec<f64>> {
    Ok(eigh(h, false, tol)?.0)
}

/// Eigenvalues (nondecreasing) and matching orthonormal eigenvectors.
pub fn hermitian_eigh(h: &HermitianMatrix, tol: &Tolerances) -> Result<(Vec<f64>, CMatrix)> {
    let (values, vectors) = eigh(h, true, tol)?;
    Ok((values, vectors.expect("vectors requested")))
}

fn eigh(h: &HermitianMatrix, want: bool, tol: &Tolerances) -> Result<(Vec<f64>, Option<CMatrix>)> {
    if !want && h.dim() > DENSE_QR_ABOVE {
        // tridiagonal QR: eigenvalues only, far cheaper than Jacobi sweeps
        let mut values: Vec<f64> = if h.is_real() {
            h.m.map(|z| z.re).symmetric_eigenvalues().iter().copied().collect()
        } else {
            h.m.symmetric_eigenvalues().iter().copied().collect()
        };
        if values.iter().any(|l| !l.is_finite()) {
            return Err(Error::NoConvergence { sweeps: 0 });
        }
        values.sort_by(f64::total_cmp);
        return Ok((values, None));
    }
    if h.is_real() {
        let re = h.m.map(|z| z.re);
        let dec = jacobi::diagonalize(re, want, tol.jacobi_off_target, tol.jacobi_max_sweeps)?;
        Ok((dec.values, dec.vectors.map(|v| to_complex(&v))))
    } else {
        let dec =
            jacobi::diagonalize(h.m.clone(), want, tol.jacobi_off_target, tol.jacobi_max_sweeps)?;
        Ok((dec.values, dec.vectors))
    }
}

/// Raised when a pinned nullity disagrees with the threshold classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NullityDisagreement {
    pub pinned: usize,
    pub by_threshold: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InertiaOutcome {
    pub inertia: Inertia,
    /// Smallest |eigenvalue| classified nonzero, or infinity when none.
    pub gap: f64,
    pub warning: Option<NullityDisagreement>,
}

/// Sign counts of the eigenvalues of `h`.
///
/// Without a pin, an eigenvalue is zero iff `|l| <= zero * max(1, ||h||_inf)`.
/// With `pinned_nullity = Some(m)`, exactly the `m` smallest-magnitude
/// eigenvalues are zero; a disagreement with the threshold rule is reported
/// in `warning` but is not an error.
pub fn inertia(
    h: &HermitianMatrix,
    tol: &Tolerances,
    pinned_nullity: Option<usize>,
) -> Result<InertiaOutcome> {
    let n = h.dim();
    if let Some(m) = pinned_nullity {
        if m > n {
            return Err(Error::PinnedNullityOutOfRange { pinned: m, dim: n });
        }
    }
    let values = hermitian_eigenvalues(h, tol)?;
    Ok(classify(&values, h.inf_norm(), tol, pinned_nullity))
}

pub(crate) fn classify(
    values: &[f64],
    norm: f64,
    tol: &Tolerances,
    pinned_nullity: Option<usize>,
) -> InertiaOutcome {
    let threshold = tol.zero * norm.max(1.0);
    let by_threshold = values.iter().filter(|l| l.abs() <= threshold).count();
    let nullity = pinned_nullity.unwrap_or(by_threshold);

    let mut by_magnitude: Vec<f64> = values.to_vec();
    by_magnitude.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let nonzero = &by_magnitude[nullity..];
    let index = nonzero.iter().filter(|&&l| l < 0.0).count();
    let coindex = nonzero.len() - index;
    let gap = nonzero.first().map(|l| l.abs()).unwrap_or(f64::INFINITY);
    let warning = match pinned_nullity {
        Some(p) if p != by_threshold => Some(NullityDisagreement { pinned: p, by_threshold }),
        _ => None,
    };
    InertiaOutcome { inertia: Inertia::new(index, coindex, nullity), gap, warning }
}

/// A subspace of C^n given by an orthonormal basis (stored as columns).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: CMatrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { basis: CMatrix::zeros(ambient, 0) }
    }

    pub fn whole(ambient: usize) -> Self {
        Subspace { basis: CMatrix::identity(ambient, ambient) }
    }

    /// Wraps columns that are already orthonormal.
    pub fn from_orthonormal(basis: CMatrix, tol: &Tolerances) -> Result<Self> {
        let m = basis.ncols();
        let gram = basis.adjoint() * &basis;
        let dev = (gram - CMatrix::identity(m, m)).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        if dev > tol.sym.max(1e-10) * 10.0 {
            return Err(Error::InvalidInput(format!("basis is not orthonormal (deviation {dev:.3e})")));
        }
        Ok(Subspace { basis })
    }

    /// Orthonormal basis of the span of the columns of `vectors`.
    pub fn span(vectors: &CMatrix, tol: &Tolerances) -> Result<Self> {
        let n = vectors.nrows();
        if vectors.ncols() == 0 {
            return Ok(Subspace::zero(n));
        }
        let g = vectors * vectors.adjoint();
        let h = HermitianMatrix { m: (&g + g.adjoint()) * Complex64::new(0.5, 0.0) };
        let (values, vecs) = hermitian_eigh(&h, tol)?;
        let threshold = tol.zero * h.inf_norm().max(1.0);
        let keep: Vec<usize> = (0..n).filter(|&i| values[i] > threshold).collect();
        Ok(Subspace { basis: select_columns(&vecs, &keep) })
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn orthogonal_complement(&self, tol: &Tolerances) -> Result<Subspace> {
        if self.dim() == 0 {
            return Ok(Subspace::whole(self.ambient()));
        }
        null_space(&self.basis.adjoint(), tol)
    }

    pub fn sum(&self, other: &Subspace, tol: &Tolerances) -> Result<Subspace> {
        let n = self.ambient();
        let mut joined = CMatrix::zeros(n, self.dim() + other.dim());
        joined.columns_mut(0, self.dim()).copy_from(&self.basis);
        joined.columns_mut(self.dim(), other.dim()).copy_from(&other.basis);
        Subspace::span(&joined, tol)
    }

    /// `dim(self ∩ other) = dim self + dim other - dim(self + other)`.
    pub fn intersection_dim(&self, other: &Subspace, tol: &Tolerances) -> Result<usize> {
        let sum = self.sum(other, tol)?;
        Ok(self.dim() + other.dim() - sum.dim())
    }
}

pub(crate) fn select_columns(m: &CMatrix, cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(m.nrows(), cols.len(), |r, c| m[(r, cols[c])])
}

/// Orthonormal basis of `{x : m x = 0}` for a possibly rectangular `m`.
pub fn null_space(m: &CMatrix, tol: &Tolerances) -> Result<Subspace> {
    let n = m.ncols();
    if m.nrows() == 0 {
        return Ok(Subspace::whole(n));
    }
    let g = m.adjoint() * m;
    let h = HermitianMatrix { m: (&g + g.adjoint()) * Complex64::new(0.5, 0.0) };
    let (values, vecs) = hermitian_eigh(&h, tol)?;
    let threshold = tol.zero * h.inf_norm().max(1.0);
    let keep: Vec<usize> = (0..n).filter(|&i| values[i] <= threshold).collect();
    Ok(Subspace { basis: select_columns(&vecs, &keep) })
}

/// Orthonormal basis of the kernel of a square matrix; the rank is decided
/// on the spectrum of `M^* M`.
pub fn kernel_basis(m: &CMatrix, tol: &Tolerances) -> Result<Subspace> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "kernel_basis expects a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    null_space(m, tol)
}

/// `V^h = { w : <H w, v> = 0 for all v in V }`.
pub fn h_orthogonal(h: &HermitianMatrix, v: &Subspace, tol: &Tolerances) -> Result<Subspace> {
    if v.ambient() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subspace lives in C^{} but form acts on C^{}",
            v.ambient(),
            h.dim()
        )));
    }
    if v.dim() == 0 {
        return Ok(Subspace::whole(h.dim()));
    }
    let constraints = v.basis().adjoint() * h.matrix();
    null_space(&constraints, tol)
}
