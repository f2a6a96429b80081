//! Discretized symplectic paths as lists of generating triples, and the
//! (twisted) Hessians of the associated generating families.

mod hessian;
mod path;

use crate::error::{Error, Result};
use crate::linalg::Tolerances;
use crate::symplectic::{generating_triple, triple_to_matrix, GeneratingTriple, SymplecticMatrix};

pub use hessian::{bott_indices, theta_hessian};
pub(crate) use hessian::check_unit;
pub use path::{discretize, discretize_at, DiscretizeOptions, PathSpec, DEFAULT_STEPS_PER_UNIT};

/// An ordered list of generating triples; factor `j` maps time `j/k` to
/// `(j+1)/k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorList {
    d: usize,
    triples: Vec<GeneratingTriple>,
    /// Values of `k` tried while discretizing, last one accepted.
    trace: Vec<usize>,
}

impl FactorList {
    pub fn new(triples: Vec<GeneratingTriple>) -> Result<Self> {
        let d = triples.first().map(|t| t.d()).ok_or_else(|| Error::InvalidInput("empty factor list".into()))?;
        if triples.iter().any(|t| t.d() != d) {
            return Err(Error::DimensionMismatch("triples of different sizes".into()));
        }
        let k = triples.len();
        Ok(FactorList { d, triples, trace: vec![k] })
    }

    /// Extracts the triple of every factor.
    pub fn from_factors(factors: &[SymplecticMatrix], tol: &Tolerances) -> Result<Self> {
        let triples = factors.iter().map(|p| generating_triple(p, tol)).collect::<Result<Vec<_>>>()?;
        Self::new(triples)
    }

    /// `k` zero triples: the constant path at the identity.
    pub fn identity(d: usize, k: usize) -> Self {
        FactorList { d, triples: vec![GeneratingTriple::zero(d); k.max(1)], trace: vec![k.max(1)] }
    }

    pub(crate) fn with_trace(mut self, trace: Vec<usize>) -> Self {
        self.trace = trace;
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.triples.len()
    }

    pub fn triples(&self) -> &[GeneratingTriple] {
        &self.triples
    }

    pub fn trace(&self) -> &[usize] {
        &self.trace
    }

    /// Largest block norm among the triples.
    pub fn max_triple_size(&self) -> f64 {
        self.triples.iter().map(|t| t.size()).fold(0.0, f64::max)
    }

    pub fn factors(&self, tol: &Tolerances) -> Result<Vec<SymplecticMatrix>> {
        self.triples.iter().map(|t| triple_to_matrix(t, tol)).collect()
    }

    /// `P_{k-1} ... P_0`.
    pub fn monodromy(&self, tol: &Tolerances) -> Result<SymplecticMatrix> {
        let mut acc = SymplecticMatrix::identity(self.d);
        for p in self.factors(tol)? {
            acc = p.compose(&acc);
        }
        Ok(acc)
    }

    /// The `p`-fold concatenation of the list.
    pub fn iterate(&self, p: usize) -> Result<FactorList> {
        if p == 0 {
            return Err(Error::InvalidInput("iteration count must be positive".into()));
        }
        let mut triples = Vec::with_capacity(self.k() * p);
        for _ in 0..p {
            triples.extend(self.triples.iter().cloned());
        }
        let k = triples.len();
        Ok(FactorList { d: self.d, triples, trace: vec![k] })
    }

    /// Appends `m` identity factors; the monodromy is unchanged.
    pub fn stabilize(&self, m: usize) -> FactorList {
        let mut triples = self.triples.clone();
        triples.extend(std::iter::repeat(GeneratingTriple::zero(self.d)).take(m));
        let k = triples.len();
        FactorList { d: self.d, triples, trace: vec![k] }
    }
}

/// Alias of [`FactorList::iterate`].
pub fn iterate(f: &FactorList, p: usize) -> Result<FactorList> {
    f.iterate(p)
}

/// Alias of [`FactorList::monodromy`].
pub fn monodromy(f: &FactorList, tol: &Tolerances) -> Result<SymplecticMatrix> {
    f.monodromy(tol)
}
