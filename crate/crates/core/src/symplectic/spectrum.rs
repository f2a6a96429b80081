use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::{omega_gram, SymplecticMatrix};
use crate::error::Result;
use crate::linalg::{hermitian_eigh, kernel_basis, select_columns, CMatrix, HermitianMatrix, Tolerances};

/// An eigenvalue on the unit circle with its geometric multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleEigenvalue {
    pub theta: Complex64,
    /// Argument in `[0, 2 pi)`.
    pub angle: f64,
    pub multiplicity: usize,
}

pub(crate) fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed angular distance from `a` to `b`, in `(-pi, pi]`.
pub(crate) fn angle_diff(a: f64, b: f64) -> f64 {
    let r = (b - a).rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Eigenvalues of `P` on the unit circle, ordered by argument in `[0, 2 pi)`.
///
/// Eigenvalues whose moduli are within `max(zero, gap)` of one are kept and
/// grouped when their arguments are within `gap = tol.angle_gap()` of each
/// other. Groups near `1` and `-1` are snapped onto them; the list is closed
/// under conjugation, and each multiplicity is `dim ker(P - theta I)`.
pub fn circle_spectrum(p: &SymplecticMatrix, tol: &Tolerances) -> Result<Vec<CircleEigenvalue>> {
    let gap = tol.angle_gap();
    let band = tol.zero.max(gap);
    let eig = p.matrix().complex_eigenvalues();
    let mut angles: Vec<f64> = eig
        .iter()
        .filter(|z| (z.norm() - 1.0).abs() <= band)
        .map(|z| normalize_angle(z.arg()))
        .collect();
    if angles.is_empty() {
        return Ok(Vec::new());
    }
    angles.sort_by(f64::total_cmp);

    // Chains of arguments with consecutive spacing at most `gap`, allowing
    // the chain to wrap through angle zero.
    let mut groups: Vec<Vec<f64>> = vec![vec![angles[0]]];
    for w in angles.windows(2) {
        if w[1] - w[0] <= gap {
            groups.last_mut().unwrap().push(w[1]);
        } else {
            groups.push(vec![w[1]]);
        }
    }
    if groups.len() > 1 && angles[0] + TAU - angles[angles.len() - 1] <= gap {
        let last = groups.pop().unwrap();
        groups[0].extend(last.into_iter().map(|a| a - TAU));
    }

    let mut reps: Vec<f64> = Vec::new();
    for g in &groups {
        let mean = g.iter().sum::<f64>() / g.len() as f64;
        let mut a = normalize_angle(mean);
        let near_one = g.iter().any(|&x| angle_diff(0.0, x).abs() <= gap);
        let near_minus = g.iter().any(|&x| angle_diff(PI, x).abs() <= gap);
        if near_one {
            a = 0.0;
        } else if near_minus {
            a = PI;
        }
        push_distinct(&mut reps, a.min(TAU - a), gap);
    }
    let mirrored: Vec<f64> = reps.iter().filter(|&&a| a != 0.0 && a != PI).map(|a| TAU - a).collect();
    reps.extend(mirrored);
    reps.sort_by(f64::total_cmp);

    let pc = p.complex();
    let n = pc.nrows();
    let mut out = Vec::with_capacity(reps.len());
    for a in reps {
        let theta = unit(a);
        let shifted = &pc - CMatrix::identity(n, n) * theta;
        let multiplicity = kernel_basis(&shifted, tol)?.dim();
        out.push(CircleEigenvalue { theta, angle: a, multiplicity });
    }
    // conjugate pairs share kernels up to conjugation
    for i in 0..out.len() {
        let a = out[i].angle;
        if a != 0.0 && a != PI {
            let j = out.iter().position(|e| e.angle == TAU - a || TAU - e.angle == a).unwrap();
            let m = out[i].multiplicity.max(out[j].multiplicity);
            out[i].multiplicity = m;
            out[j].multiplicity = m;
        }
    }
    Ok(out)
}

/// `dim ker(P - theta I)`.
///
/// The count from `kernel_basis` is capped by the number of eigenvalues of `P`
/// within `1e-4 sqrt(max(1, |P|_inf))` of `theta`. Powers of hyperbolic
/// matrices are badly conditioned, and a threshold relative to `|P - theta I|`
/// alone then reads small but honest singular values as zero.
pub fn eigenspace_dim(p: &SymplecticMatrix, theta: Complex64, tol: &Tolerances) -> Result<usize> {
    let pc = p.complex();
    let n = pc.nrows();
    let dim = kernel_basis(&(&pc - CMatrix::identity(n, n) * theta), tol)?.dim();
    if dim == 0 {
        return Ok(0);
    }
    let m = p.matrix();
    let norm = (0..n).map(|i| m.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(1.0f64, f64::max);
    let radius = 1e-4 * norm.sqrt();
    let near = m.complex_eigenvalues().iter().filter(|z| (**z - theta).norm() <= radius).count();
    Ok(dim.min(near))
}

fn push_distinct(reps: &mut Vec<f64>, a: f64, gap: f64) {
    if !reps.iter().any(|&r| angle_diff(r, a).abs() <= gap) {
        reps.push(a);
    }
}

/// `e^{i a}` with exact values at multiples of a quarter turn.
pub(crate) fn unit(a: f64) -> Complex64 {
    if a == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if a == PI {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenspaceReport {
    /// Eigenvalue clusters with their algebraic multiplicities.
    pub clusters: Vec<(Complex64, usize)>,
    /// `(lambda, mu, max |omega(u, v)|)` for every pair with `lambda conj(mu) != 1`.
    pub pairs: Vec<(Complex64, Complex64, f64)>,
    pub max_pair_residual: f64,
    pub e1_dim: usize,
    /// Smallest singular value of the omega Gram matrix on `E_1`.
    pub e1_min_singular: Option<f64>,
    pub pair_tolerance: f64,
}

impl EigenspaceReport {
    pub fn orthogonality_ok(&self) -> bool {
        self.max_pair_residual <= self.pair_tolerance
    }

    pub fn e1_nondegenerate(&self) -> bool {
        self.e1_min_singular.map_or(true, |s| s > 1e-6)
    }

    pub fn pass(&self) -> bool {
        self.orthogonality_ok() && self.e1_nondegenerate()
    }
}

/// Checks that generalized eigenspaces `F_lambda`, `F_mu` with
/// `lambda conj(mu) != 1` are omega-orthogonal and that omega restricted to
/// `E_1` is nondegenerate.
pub fn eigenspace_structure_report(p: &SymplecticMatrix, tol: &Tolerances) -> Result<EigenspaceReport> {
    let n = 2 * p.d();
    let merge = 1e-5;
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    let mut members: Vec<Vec<Complex64>> = Vec::new();
    for z in p.matrix().complex_eigenvalues().iter() {
        match members.iter().position(|g| g.iter().any(|w| (w - z).norm() <= merge * z.norm().max(1.0))) {
            Some(i) => members[i].push(*z),
            None => members.push(vec![*z]),
        }
    }
    for g in &members {
        let mean = g.iter().sum::<Complex64>() / g.len() as f64;
        clusters.push((mean, g.len()));
    }
    // snap the cluster at one so that E_1 is recognized exactly
    for c in clusters.iter_mut() {
        if (c.0 - 1.0).norm() <= merge {
            c.0 = Complex64::new(1.0, 0.0);
        }
    }

    let pc = p.complex();
    let id = CMatrix::identity(n, n);
    let mut spaces = Vec::with_capacity(clusters.len());
    for (i, &(_, m)) in clusters.iter().enumerate() {
        // the range of the complementary spectral product is F_lambda
        let mut prod = id.clone();
        for (j, &(mu, mj)) in clusters.iter().enumerate() {
            if j != i {
                let f = &pc - &id * mu;
                for _ in 0..mj {
                    prod = &f * prod;
                }
            }
        }
        spaces.push(top_left_singular(&prod, m, tol)?);
    }

    let mut pairs = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..clusters.len() {
        for j in 0..clusters.len() {
            let (l, mu) = (clusters[i].0, clusters[j].0);
            if (l * mu.conj() - 1.0).norm() <= merge {
                continue;
            }
            let g = omega_gram(&spaces[i], &spaces[j]);
            let r = g.iter().fold(0.0f64, |a, z| a.max(z.norm()));
            worst = worst.max(r);
            pairs.push((l, mu, r));
        }
    }

    let one = clusters.iter().position(|c| c.0 == Complex64::new(1.0, 0.0));
    let (e1_dim, e1_min_singular) = match one {
        None => (0, None),
        Some(i) => {
            let basis = &spaces[i];
            let g = omega_gram(basis, basis);
            let gg = g.adjoint() * &g;
            let h = HermitianMatrix::from_exact((&gg + gg.adjoint()) * Complex64::new(0.5, 0.0));
            let (vals, _) = hermitian_eigh(&h, tol)?;
            (basis.ncols(), Some(vals[0].max(0.0).sqrt()))
        }
    };
    let scale = p.matrix().amax().max(1.0);
    Ok(EigenspaceReport {
        clusters,
        pairs,
        max_pair_residual: worst,
        e1_dim,
        e1_min_singular,
        pair_tolerance: 1e-6 * scale,
    })
}

/// Orthonormal basis of the dominant `m`-dimensional left singular subspace.
fn top_left_singular(m: &CMatrix, count: usize, tol: &Tolerances) -> Result<CMatrix> {
    let g = m * m.adjoint();
    let h = HermitianMatrix::from_exact((&g + g.adjoint()) * Complex64::new(0.5, 0.0));
    let (_, vecs) = hermitian_eigh(&h, tol)?;
    let n = vecs.ncols();
    let cols: Vec<usize> = (n - count..n).collect();
    Ok(select_columns(&vecs, &cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{direct_sum, make_j, make_rotation, make_shear};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn summary(p: &SymplecticMatrix) -> Vec<(f64, f64, usize)> {
        circle_spectrum(p, &tol()).unwrap().iter().map(|e| (e.theta.re, e.theta.im, e.multiplicity)).collect()
    }

    #[test]
    fn identity_spectrum() {
        assert_eq!(summary(&SymplecticMatrix::identity(1)), vec![(1.0, 0.0, 2)]);
    }

    #[test]
    fn complex_structure_spectrum() {
        for d in 1..4 {
            let s = circle_spectrum(&make_j(d), &tol()).unwrap();
            assert_eq!(s.len(), 2);
            assert!((s[0].theta - Complex64::i()).norm() < 1e-12);
            assert!((s[1].theta + Complex64::i()).norm() < 1e-12);
            assert_eq!((s[0].multiplicity, s[1].multiplicity), (d, d));
        }
    }

    #[test]
    fn shear_spectra() {
        assert_eq!(summary(&make_shear(1.0)), vec![(1.0, 0.0, 1)]);
        let p = direct_sum(&make_shear(1.0), &make_shear(-1.0));
        assert_eq!(summary(&p), vec![(1.0, 0.0, 2)]);
    }

    #[test]
    fn hyperbolic_has_empty_circle_spectrum() {
        let p = SymplecticMatrix::new(
            nalgebra::DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]),
            &tol(),
        )
        .unwrap();
        assert!(circle_spectrum(&p, &tol()).unwrap().is_empty());
    }

    #[test]
    fn direct_sum_spectrum_is_union() {
        let p = direct_sum(&make_rotation(1.0), &make_rotation(2.0));
        let s = circle_spectrum(&p, &tol()).unwrap();
        let angles: Vec<f64> = s.iter().map(|e| e.angle).collect();
        let expected = [1.0, 2.0, TAU - 2.0, TAU - 1.0];
        assert_eq!(angles.len(), 4);
        for (a, b) in angles.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(s.iter().all(|e| e.multiplicity == 1));
        let q = direct_sum(&make_rotation(1.0), &make_rotation(1.0));
        assert!(circle_spectrum(&q, &tol()).unwrap().iter().all(|e| e.multiplicity == 2));
    }

    #[test]
    fn minus_identity() {
        let p = make_rotation(PI);
        assert_eq!(summary(&p), vec![(-1.0, 0.0, 2)]);
    }

    #[test]
    fn eigenspace_reports() {
        let rep = eigenspace_structure_report(&SymplecticMatrix::identity(2), &tol()).unwrap();
        assert_eq!(rep.e1_dim, 4);
        assert!(rep.pass());

        let p = direct_sum(&make_shear(1.0), &make_rotation(1.0));
        let rep = eigenspace_structure_report(&p, &tol()).unwrap();
        assert_eq!(rep.e1_dim, 2);
        assert!(rep.e1_nondegenerate());
        assert!(rep.orthogonality_ok(), "{rep:?}");
        assert!(!rep.pairs.is_empty());

        let rep = eigenspace_structure_report(&make_rotation(1.0), &tol()).unwrap();
        assert_eq!(rep.e1_dim, 0);
        assert!(rep.pass());
    }

    #[test]
    fn hyperbolic_pairs_are_checked() {
        let h = SymplecticMatrix::new(
            nalgebra::DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 1.0 / 3.0]),
            &tol(),
        )
        .unwrap();
        let p = direct_sum(&h, &make_rotation(0.5));
        let rep = eigenspace_structure_report(&p, &tol()).unwrap();
        assert!(rep.pass(), "{rep:?}");
        // 3 and 1/3 are paired by omega, so (3, 1/3) is not among the checked pairs
        assert!(!rep.pairs.iter().any(|(l, m, _)| (l.re - 3.0).abs() < 1e-9 && (m.re - 1.0 / 3.0).abs() < 1e-9));
    }
}
