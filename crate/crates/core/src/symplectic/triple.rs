use crate::error::{Error, Result};
use crate::linalg::{real_inf_norm, RMatrix, Tolerances};

use super::{assemble_blocks, SymplecticMatrix};

/// Blocks of `f(X1, Y0) = 1/2 <A X1, X1> + <B X1, Y0> + 1/2 <C Y0, Y0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingTriple {
    a: RMatrix,
    b: RMatrix,
    c: RMatrix,
}

impl GeneratingTriple {
    /// Checks that `A` and `C` are symmetric and keeps their exact
    /// symmetric parts.
    pub fn new(a: RMatrix, b: RMatrix, c: RMatrix, tol: &Tolerances) -> Result<Self> {
        let d = a.nrows();
        for (name, m) in [("A", &a), ("B", &b), ("C", &c)] {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "block {name} is {}x{}, expected {d}x{d}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        for m in [&a, &c] {
            let residual = (m - m.transpose()).amax();
            if residual > tol.sym * m.amax().max(1.0) {
                return Err(Error::NonHermitianInput { residual });
            }
        }
        let a = (&a + a.transpose()) * 0.5;
        let c = (&c + c.transpose()) * 0.5;
        Ok(GeneratingTriple { a, b, c })
    }

    pub fn zero(d: usize) -> Self {
        GeneratingTriple { a: RMatrix::zeros(d, d), b: RMatrix::zeros(d, d), c: RMatrix::zeros(d, d) }
    }

    pub fn d(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &RMatrix {
        &self.a
    }

    pub fn b(&self) -> &RMatrix {
        &self.b
    }

    pub fn c(&self) -> &RMatrix {
        &self.c
    }

    /// Largest max-row-sum norm among the three blocks.
    pub fn size(&self) -> f64 {
        real_inf_norm(&self.a).max(real_inf_norm(&self.b)).max(real_inf_norm(&self.c))
    }

    pub fn scaled(&self, s: f64) -> GeneratingTriple {
        GeneratingTriple { a: &self.a * s, b: &self.b * s, c: &self.c * s }
    }
}

/// Inverse with a max-row-sum condition estimate; `None` when singular.
/// Inverse of `m` with the condition number `max(|m|, scale) |m^-1|`; `scale`
/// is the size of the matrix `m` was cut from, so that a tiny block is not
/// mistaken for a well conditioned one.
pub(crate) fn inverse_with_condition(m: &RMatrix, scale: f64) -> Option<(RMatrix, f64)> {
    let inv = m.clone().try_inverse()?;
    if inv.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let cond = real_inf_norm(m).max(scale) * real_inf_norm(&inv);
    Some((inv, cond))
}

/// Solves the defining relations for the triple:
/// `A = c a^{-1}`, `B = a^{-1} - I`, `C = -a^{-1} b`.
pub fn generating_triple(p: &SymplecticMatrix, tol: &Tolerances) -> Result<GeneratingTriple> {
    let (a, b, c, _) = p.blocks();
    let (a_inv, cond) = match inverse_with_condition(&a, real_inf_norm(p.matrix())) {
        Some(x) => x,
        None => return Err(Error::BlockNotInvertible { condition: f64::INFINITY }),
    };
    if cond > 1.0 / tol.zero {
        return Err(Error::BlockNotInvertible { condition: cond });
    }
    let d = p.d();
    let ta = &c * &a_inv;
    let tb = &a_inv - RMatrix::identity(d, d);
    let tc = -(&a_inv * &b);
    // symmetry of A and C is equivalent to symplecticity given a invertible
    let scale = ta.amax().max(tc.amax()).max(1.0);
    let residual = (&ta - ta.transpose()).amax().max((&tc - tc.transpose()).amax());
    if residual > tol.sym.max(tol.sp) * scale {
        return Err(Error::NotSymplectic { residual });
    }
    GeneratingTriple::new(ta, tb, tc, tol)
}

/// The unique matrix with generating triple `t`:
/// `a = (I+B)^{-1}`, `b = -a C`, `c = A a`, `d = I + B^T - A a C`.
pub fn triple_to_matrix(t: &GeneratingTriple, tol: &Tolerances) -> Result<SymplecticMatrix> {
    let d = t.d();
    let id = RMatrix::identity(d, d);
    let (a, cond) = inverse_with_condition(&(&id + &t.b), 1.0).ok_or(Error::SingularReconstruction)?;
    if cond > 1.0 / tol.zero {
        return Err(Error::SingularReconstruction);
    }
    let b = -(&a * &t.c);
    let c = &t.a * &a;
    let dd = &id + t.b.transpose() + &c * &t.c * -1.0;
    Ok(SymplecticMatrix::from_exact(assemble_blocks(&a, &b, &c, &dd)))
}
