//! Jacobi diagonalization of Hermitian matrices.
//!
//! A single generic routine serves both real symmetric and complex Hermitian
//! storage; real inputs simply never pick up a phase.

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};

pub(crate) struct Decomposition<T> {
    pub values: Vec<f64>,
    /// Columns are eigenvectors, in the same order as `values`.
    pub vectors: Option<DMatrix<T>>,
}

/// Diagonalizes `a` in place by sweeps of 2x2 unitary rotations.
///
/// Each sweep visits every pair once in round-robin order: a round applies
/// `n/2` rotations on disjoint pairs at once, first to columns and then to
/// rows, so both passes walk contiguous column-major storage.
///
/// The input must already be exactly Hermitian. Converged when the
/// off-diagonal Frobenius norm falls below `off_target * ||a||_F`.
pub(crate) fn diagonalize<T>(
    mut a: DMatrix<T>,
    want_vectors: bool,
    off_target: f64,
    max_sweeps: usize,
) -> Result<Decomposition<T>>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    let mut v = want_vectors.then(|| DMatrix::<T>::identity(n, n));

    let frob = a.iter().map(|x| x.modulus_squared()).sum::<f64>().sqrt();
    let target = off_target * frob;
    // Entries this small cannot move the off-diagonal norm above target.
    let skip_below = if n > 1 { 1e-3 * target / n as f64 } else { 0.0 };

    // round-robin schedule on an even number of slots; slot `n` is a bye
    let m = n + (n & 1);
    let mut slots: Vec<usize> = (0..m).collect();
    let mut rotations = Vec::with_capacity(m / 2);

    let mut sweeps = 0;
    if n > 1 && frob > 0.0 {
        while off_diagonal_norm(&a) > target {
            if sweeps == max_sweeps {
                return Err(Error::NoConvergence { sweeps });
            }
            sweeps += 1;
            for _ in 0..m - 1 {
                rotations.clear();
                for i in 0..m / 2 {
                    let (p, q) = (slots[i].min(slots[m - 1 - i]), slots[i].max(slots[m - 1 - i]));
                    if q < n {
                        if let Some(r) = Rotation::annihilating(&a, p, q, skip_below) {
                            rotations.push(r);
                        }
                    }
                }
                apply_round(&mut a, v.as_mut(), &rotations);
                slots[1..].rotate_right(1);
            }
            symmetrize(&mut a);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].real()).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = v.map(|v| DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]));
    Ok(Decomposition { values, vectors })
}

fn off_diagonal_norm<T: ComplexField<RealField = f64> + Copy>(a: &DMatrix<T>) -> f64 {
    let n = a.nrows();
    let s = a.as_slice();
    let mut acc = 0.0;
    for c in 0..n {
        for r in 0..n {
            if r != c {
                acc += s[r + c * n].modulus_squared();
            }
        }
    }
    acc.sqrt()
}

/// Replaces `a` by `(a + a^*) / 2` and makes the diagonal real.
fn symmetrize<T: ComplexField<RealField = f64> + Copy>(a: &mut DMatrix<T>) {
    let n = a.nrows();
    let s = a.as_mut_slice();
    for c in 0..n {
        s[c + c * n] = T::from_real(s[c + c * n].real());
        for r in c + 1..n {
            let mean = (s[r + c * n] + s[c + r * n].conjugate()) * T::from_real(0.5);
            s[r + c * n] = mean;
            s[c + r * n] = mean.conjugate();
        }
    }
}

/// `U = diag(1, conj(w)) * R(c, s)` on the pair `(p, q)`, `w` the phase of
/// `a[p, q]`, chosen so that `(U^* a U)[p, q] = 0`.
struct Rotation<T> {
    p: usize,
    q: usize,
    c: T,
    s: T,
    u_qp: T,
    u_qq: T,
    new_pp: f64,
    new_qq: f64,
}

impl<T: ComplexField<RealField = f64> + Copy> Rotation<T> {
    fn annihilating(a: &DMatrix<T>, p: usize, q: usize, skip_below: f64) -> Option<Self> {
        let apq = a[(p, q)];
        let r = apq.modulus();
        if r == 0.0 || r < skip_below {
            return None;
        }
        let app = a[(p, p)].real();
        let aqq = a[(q, q)].real();
        let w_bar = (apq / T::from_real(r)).conjugate();
        let tau = (aqq - app) / (2.0 * r);
        let t = if tau >= 0.0 {
            1.0 / (tau + (1.0 + tau * tau).sqrt())
        } else {
            -1.0 / (-tau + (1.0 + tau * tau).sqrt())
        };
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = t * c;
        let (c, s) = (T::from_real(c), T::from_real(s));
        Some(Rotation { p, q, c, s, u_qp: -(w_bar * s), u_qq: w_bar * c, new_pp: app - t * r, new_qq: aqq + t * r })
    }
}

fn rotate_columns<T: ComplexField<RealField = f64> + Copy>(m: &mut DMatrix<T>, rotations: &[Rotation<T>]) {
    let n = m.nrows();
    let data = m.as_mut_slice();
    for r in rotations {
        let (head, tail) = data.split_at_mut(r.q * n);
        let col_p = &mut head[r.p * n..r.p * n + n];
        let col_q = &mut tail[..n];
        for (x, y) in col_p.iter_mut().zip(col_q.iter_mut()) {
            let (u, w) = (*x, *y);
            *x = u * r.c + w * r.u_qp;
            *y = u * r.s + w * r.u_qq;
        }
    }
}

/// `a <- U^* a U` and `v <- v U` for a set of rotations on disjoint pairs.
fn apply_round<T>(a: &mut DMatrix<T>, v: Option<&mut DMatrix<T>>, rotations: &[Rotation<T>])
where
    T: ComplexField<RealField = f64> + Copy,
{
    if rotations.is_empty() {
        return;
    }
    let n = a.nrows();
    rotate_columns(a, rotations);
    for col in a.as_mut_slice().chunks_exact_mut(n) {
        for r in rotations {
            let (u, w) = (col[r.p], col[r.q]);
            col[r.p] = u * r.c + w * r.u_qp.conjugate();
            col[r.q] = u * r.s + w * r.u_qq.conjugate();
        }
    }
    for r in rotations {
        a[(r.p, r.p)] = T::from_real(r.new_pp);
        a[(r.q, r.q)] = T::from_real(r.new_qq);
        a[(r.p, r.q)] = T::zero();
        a[(r.q, r.p)] = T::zero();
    }
    if let Some(v) = v {
        rotate_columns(v, rotations);
    }
}
