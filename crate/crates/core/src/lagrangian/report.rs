use rayon::prelude::*;

use super::{lagrangian_morse_index, segment_action_triple, LagrangianMorse, QuadraticLagrangian, DEFAULT_QUADRATURE_STEPS};
use crate::error::Result;
use crate::family::{discretize, discretize_at, DiscretizeOptions, PathSpec};
use crate::linalg::{hermitian_eigenvalues, HermitianMatrix, RMatrix, Tolerances};
use crate::maslov::{maslov, MaslovIndices};
use crate::symplectic::GeneratingTriple;

/// Largest allowed entrywise gap between action-integral and algebraic triples.
pub const ACTION_TRIPLE_TOLERANCE: f64 = 1e-6;

/// Morse index of the discrete action against the Maslov index of the
/// linearized Hamiltonian flow, with the side checks on the triples.
#[derive(Debug, Clone, PartialEq)]
pub struct MorseMaslovReport {
    pub k: usize,
    pub morse: LagrangianMorse,
    pub maslov: MaslovIndices,
    /// `dim ker(Gamma(1) - I)`.
    pub kernel_dim: usize,
    /// Largest eigenvalue over all `C_j` extracted from the segment flows.
    pub max_c_eigenvalue: f64,
    /// Same, for the triples recovered from the action integral.
    pub max_action_c_eigenvalue: f64,
    /// Largest entrywise difference between the two kinds of triple.
    pub action_deviation: f64,
}

impl MorseMaslovReport {
    pub fn index_matches(&self) -> bool {
        self.morse.outcome.inertia.index as i64 == self.maslov.mas
    }

    pub fn nullities_match(&self) -> bool {
        self.morse.outcome.inertia.nullity == self.kernel_dim
            && self.maslov.nul == self.kernel_dim
            && self.morse.outcome.warning.is_none()
            && self.maslov.warning.is_none()
    }

    /// Every `C_j`, from either route, is negative definite.
    pub fn concave(&self) -> bool {
        self.max_c_eigenvalue < 0.0 && self.max_action_c_eigenvalue < 0.0
    }

    pub fn pass(&self) -> bool {
        self.index_matches() && self.nullities_match() && self.concave() && self.action_deviation <= ACTION_TRIPLE_TOLERANCE
    }
}

fn max_eigenvalue(m: &RMatrix, tol: &Tolerances) -> Result<f64> {
    let h = HermitianMatrix::from_real_symmetric(m, tol)?;
    Ok(hermitian_eigenvalues(&h, tol)?.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

fn triple_gap(x: &GeneratingTriple, y: &GeneratingTriple) -> f64 {
    (x.a() - y.a()).amax().max((x.b() - y.b()).amax()).max((x.c() - y.c()).amax())
}

/// Runs both sides at `k` (or at the discretization chosen by `opts`).
pub fn morse_equals_maslov_report(
    l: &QuadraticLagrangian,
    k: Option<usize>,
    opts: &DiscretizeOptions,
    tol: &Tolerances,
) -> Result<MorseMaslovReport> {
    let path = PathSpec::Lagrangian(l.clone());
    let factors = match k {
        Some(k) => discretize_at(&path, k, tol)?,
        None => discretize(&path, opts, tol)?,
    };
    let k = factors.k();
    let mas = maslov(&factors, tol)?;
    let morse = lagrangian_morse_index(l, k, tol)?;

    let action: Vec<GeneratingTriple> = (0..k)
        .into_par_iter()
        .map(|j| segment_action_triple(l, j, k, DEFAULT_QUADRATURE_STEPS, tol))
        .collect::<Result<_>>()?;
    let mut max_c = f64::NEG_INFINITY;
    let mut max_action_c = f64::NEG_INFINITY;
    let mut deviation = 0.0f64;
    for (t, s) in factors.triples().iter().zip(&action) {
        max_c = max_c.max(max_eigenvalue(t.c(), tol)?);
        max_action_c = max_action_c.max(max_eigenvalue(s.c(), tol)?);
        deviation = deviation.max(triple_gap(t, s));
    }
    Ok(MorseMaslovReport {
        k,
        kernel_dim: morse.kernel_dim,
        morse,
        maslov: mas,
        max_c_eigenvalue: max_c,
        max_action_c_eigenvalue: max_action_c,
        action_deviation: deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn free_particle() {
        let r = morse_equals_maslov_report(&QuadraticLagrangian::free_particle(1), None, &DiscretizeOptions::default(), &tol())
            .unwrap();
        assert_eq!(r.maslov.mas, 0);
        assert_eq!(r.kernel_dim, 1);
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn oscillators() {
        for (w, ind, nul) in [(1.0, 1, 0), (2.0 * PI, 1, 2), (7.0, 3, 0)] {
            let r = morse_equals_maslov_report(
                &QuadraticLagrangian::harmonic_oscillator(w),
                Some(32),
                &DiscretizeOptions::default(),
                &tol(),
            )
            .unwrap();
            assert_eq!((r.maslov.mas, r.kernel_dim), (ind, nul), "w = {w}");
            assert!(r.pass(), "{r:?}");
        }
    }
}
