//! Maslov indices of discretized symplectic paths, their theta-profiles,
//! splitting numbers and iteration theory.

mod iteration;
mod profile;
mod splitting;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::{bott_indices, discretize, discretize_at, DiscretizeOptions, FactorList, PathSpec};
use crate::linalg::{Inertia, NullityDisagreement, Tolerances};

pub use iteration::{
    bott_formula_report, iterate_path, iteration_inequality_report, BottFormulaReport, BottRow,
    IterationInequalityReport,
};
pub use profile::{average_comaslov, average_maslov, index_profile, IndexProfile, PointValue, ProfileArc};
pub use splitting::{
    factorize_matrix, g_theta_matrix, splitting_epsilon, splitting_numbers, splitting_numbers_via_family,
    SplittingNumbers,
};

/// `mas_theta = ind(h_theta) - dk`, `comas_theta = coind(h_theta) - dk` and
/// `nul_theta = dim ker(P - theta I)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaslovIndices {
    pub mas: i64,
    pub comas: i64,
    pub nul: usize,
    /// Bott indices of the family the values were read from.
    pub inertia: Inertia,
    pub warning: Option<NullityDisagreement>,
}

impl MaslovIndices {
    fn from_inertia(inertia: Inertia, dk: usize, warning: Option<NullityDisagreement>) -> Result<Self> {
        let mas = inertia.index as i64 - dk as i64;
        let comas = inertia.coindex as i64 - dk as i64;
        let nul = inertia.nullity;
        if mas + comas + nul as i64 != 0 {
            return Err(Error::InvariantViolation(format!(
                "mas + comas + nul = {mas} + {comas} + {nul} is not zero"
            )));
        }
        Ok(MaslovIndices { mas, comas, nul, inertia, warning })
    }

    pub fn triple(&self) -> (i64, i64, usize) {
        (self.mas, self.comas, self.nul)
    }
}

pub fn theta_maslov(f: &FactorList, theta: Complex64, tol: &Tolerances) -> Result<MaslovIndices> {
    let out = bott_indices(f, theta, tol)?;
    MaslovIndices::from_inertia(out.inertia, f.d() * f.k(), out.warning)
}

pub fn maslov(f: &FactorList, tol: &Tolerances) -> Result<MaslovIndices> {
    theta_maslov(f, Complex64::new(1.0, 0.0), tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathMaslov {
    pub indices: MaslovIndices,
    pub factors: FactorList,
    /// Indices recomputed at `2k` when requested.
    pub refined: Option<MaslovIndices>,
}

/// Discretizes `path` and computes its Maslov indices. With `verify`, the
/// computation is repeated at `2k` and any disagreement is an error.
pub fn maslov_of_path(path: &PathSpec, opts: &DiscretizeOptions, verify: bool, tol: &Tolerances) -> Result<PathMaslov> {
    let factors = discretize(path, opts, tol)?;
    let indices = maslov(&factors, tol)?;
    let refined = if verify {
        let fine = discretize_at(path, 2 * factors.k(), tol)?;
        let r = maslov(&fine, tol)?;
        if r.triple() != indices.triple() {
            return Err(Error::InvariantViolation(format!(
                "Maslov indices differ between k = {} {:?} and k = {} {:?}",
                factors.k(),
                indices.triple(),
                fine.k(),
                r.triple()
            )));
        }
        Some(r)
    } else {
        None
    };
    Ok(PathMaslov { indices, factors, refined })
}
