use rayon::prelude::*;

use super::FactorList;
use crate::coefficients::CoefficientMap;
use crate::error::{Error, Result};
use crate::lagrangian::{hamiltonian_segment_flows, linear_hamiltonian_flow, QuadraticLagrangian};
use crate::linalg::{real_inf_norm, RMatrix, Tolerances};
use crate::symplectic::{generating_triple, make_rotation, make_shear, triple_to_matrix, GeneratingTriple, SymplecticMatrix};

/// Default RK4 resolution for [`PathSpec::LinearHamiltonian`].
pub const DEFAULT_STEPS_PER_UNIT: usize = 4096;

/// A symplectic path `Gamma: [0, 1] -> Sp(2d)` with `Gamma(0) = I`.
#[derive(Debug, Clone, PartialEq)]
pub enum PathSpec {
    /// `t -> rotation(beta t)` in the plane.
    NamedRotation { beta: f64 },
    /// `t -> shear(r t)` in the plane.
    NamedShear { r: f64 },
    /// Samples `Gamma(t_i)`. Between samples the path follows the
    /// generating-function segment `s -> M(s T_i) Gamma(t_i)`, where `T_i` is
    /// the triple of `Gamma(t_{i+1}) Gamma(t_i)^{-1}` and `M` reconstructs a
    /// matrix from a triple.
    Sampled(SampledPath),
    /// Flow of `z' = Omega S(t) z`.
    LinearHamiltonian { hessian: CoefficientMap, steps_per_unit: usize },
    /// Flow of the Hamiltonian dual to a quadratic Lagrangian.
    Lagrangian(QuadraticLagrangian),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    times: Vec<f64>,
    matrices: Vec<SymplecticMatrix>,
    segments: Vec<GeneratingTriple>,
}

impl SampledPath {
    pub fn new(times: Vec<f64>, matrices: Vec<SymplecticMatrix>, tol: &Tolerances) -> Result<Self> {
        if times.len() != matrices.len() || times.len() < 2 {
            return Err(Error::InvalidPath(format!(
                "need at least two samples with one time each, got {} times and {} matrices",
                times.len(),
                matrices.len()
            )));
        }
        if times[0] != 0.0 || *times.last().unwrap() != 1.0 {
            return Err(Error::InvalidPath("sample times must start at 0 and end at 1".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidPath("sample times must be strictly increasing".into()));
        }
        let d = matrices[0].d();
        if matrices.iter().any(|m| m.d() != d) {
            return Err(Error::DimensionMismatch("samples of different sizes".into()));
        }
        if (matrices[0].matrix() - RMatrix::identity(2 * d, 2 * d)).amax() > tol.sp {
            return Err(Error::NotStartingAtIdentity);
        }
        let mut segments = Vec::with_capacity(times.len() - 1);
        for i in 0..times.len() - 1 {
            let step = matrices[i + 1].compose(&matrices[i].inverse());
            let t = generating_triple(&step, tol).map_err(|_| {
                Error::InvalidPath(format!(
                    "samples at t = {} and t = {} are too far apart; insert intermediate samples",
                    times[i],
                    times[i + 1]
                ))
            })?;
            segments.push(t);
        }
        Ok(SampledPath { times, matrices, segments })
    }

    pub fn d(&self) -> usize {
        self.matrices[0].d()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn matrices(&self) -> &[SymplecticMatrix] {
        &self.matrices
    }

    pub fn eval(&self, t: f64, tol: &Tolerances) -> Result<SymplecticMatrix> {
        let n = self.times.len();
        let i = match self.times.iter().position(|&ti| ti > t) {
            Some(0) => 0,
            Some(i) => i - 1,
            None => n - 2,
        };
        if t == self.times[i] {
            return Ok(self.matrices[i].clone());
        }
        if t == self.times[i + 1] {
            return Ok(self.matrices[i + 1].clone());
        }
        let s = (t - self.times[i]) / (self.times[i + 1] - self.times[i]);
        let step = triple_to_matrix(&self.segments[i].scaled(s), tol)
            .map_err(|_| Error::InvalidPath(format!("interpolation degenerates inside sample interval {i}")))?;
        Ok(step.compose(&self.matrices[i]))
    }
}

impl PathSpec {
    pub fn sampled(times: Vec<f64>, matrices: Vec<SymplecticMatrix>, tol: &Tolerances) -> Result<Self> {
        Ok(PathSpec::Sampled(SampledPath::new(times, matrices, tol)?))
    }

    pub fn linear_hamiltonian(hessian: CoefficientMap, tol: &Tolerances) -> Result<Self> {
        hessian.validate()?;
        let (r, c) = hessian.shape();
        if r != c || r % 2 == 1 || r == 0 {
            return Err(Error::DimensionMismatch(format!("Hamiltonian Hessian must be 2d x 2d, got {r}x{c}")));
        }
        let residual = hessian.asymmetry();
        if residual > tol.sym {
            return Err(Error::InvalidInput(format!("Hamiltonian Hessian is not symmetric (residual {residual:.3e})")));
        }
        Ok(PathSpec::LinearHamiltonian { hessian: hessian.symmetrized(), steps_per_unit: DEFAULT_STEPS_PER_UNIT })
    }

    pub fn d(&self) -> usize {
        match self {
            PathSpec::NamedRotation { .. } | PathSpec::NamedShear { .. } => 1,
            PathSpec::Sampled(s) => s.d(),
            PathSpec::LinearHamiltonian { hessian, .. } => hessian.shape().0 / 2,
            PathSpec::Lagrangian(l) => l.d(),
        }
    }

    /// `P_j = Gamma((j+1)/k) Gamma(j/k)^{-1}` for `j = 0..k`.
    pub fn factors(&self, k: usize, tol: &Tolerances) -> Result<Vec<SymplecticMatrix>> {
        if k == 0 {
            return Err(Error::InvalidInput("k must be positive".into()));
        }
        let kf = k as f64;
        match self {
            PathSpec::NamedRotation { beta } => Ok(vec![make_rotation(beta / kf); k]),
            PathSpec::NamedShear { r } => Ok(vec![make_shear(r / kf); k]),
            PathSpec::Sampled(s) => {
                let gammas = (0..=k).map(|j| s.eval(j as f64 / kf, tol)).collect::<Result<Vec<_>>>()?;
                Ok(gammas.windows(2).map(|w| w[1].compose(&w[0].inverse())).collect())
            }
            PathSpec::LinearHamiltonian { hessian, steps_per_unit } => {
                let steps = (steps_per_unit.div_ceil(k)).max(16);
                (0..k)
                    .into_par_iter()
                    .map(|j| {
                        linear_hamiltonian_flow(|t| hessian.eval(t), j as f64 / kf, (j + 1) as f64 / kf, steps, tol)
                    })
                    .collect()
            }
            PathSpec::Lagrangian(l) => hamiltonian_segment_flows(l, k, tol),
        }
    }

    /// `Gamma(1)` as the ordered product of the factors at `k`.
    pub fn endpoint(&self, k: usize, tol: &Tolerances) -> Result<SymplecticMatrix> {
        let mut acc = SymplecticMatrix::identity(self.d());
        for p in self.factors(k, tol)? {
            acc = p.compose(&acc);
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscretizeOptions {
    /// Bound on `||P_j - I||_inf` for every factor.
    pub eta: f64,
    pub k0: usize,
    pub k_max: usize,
}

impl Default for DiscretizeOptions {
    fn default() -> Self {
        DiscretizeOptions { eta: 0.2, k0: 4, k_max: 1 << 16 }
    }
}

impl DiscretizeOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::InvalidInput(format!("eta must lie in (0, 1), got {}", self.eta)));
        }
        if self.k0 == 0 || self.k_max < self.k0 {
            return Err(Error::InvalidInput(format!("need 1 <= k0 <= k_max, got {} and {}", self.k0, self.k_max)));
        }
        Ok(())
    }
}

/// Triples of the factors when every factor is within `eta` of the identity
/// and has a triple of size below one; `None` otherwise.
fn admissible(factors: &[SymplecticMatrix], eta: f64, tol: &Tolerances) -> Option<Vec<GeneratingTriple>> {
    let mut out = Vec::with_capacity(factors.len());
    for p in factors {
        let n = 2 * p.d();
        if !(real_inf_norm(&(p.matrix() - RMatrix::identity(n, n))) < eta) {
            return None;
        }
        let t = generating_triple(p, tol).ok()?;
        if !(t.size() < 1.0) {
            return None;
        }
        out.push(t);
    }
    Some(out)
}

/// Doubles `k` from `k0` until every factor is admissible.
pub fn discretize(path: &PathSpec, opts: &DiscretizeOptions, tol: &Tolerances) -> Result<FactorList> {
    opts.validate()?;
    let mut k = opts.k0;
    let mut trace = Vec::new();
    while k <= opts.k_max {
        trace.push(k);
        let factors = path.factors(k, tol)?;
        if let Some(triples) = admissible(&factors, opts.eta, tol) {
            return Ok(FactorList::new(triples)?.with_trace(trace));
        }
        k *= 2;
    }
    Err(Error::KMaxExceeded { k_max: opts.k_max })
}

/// Factor list at exactly `k`; every factor must admit a triple.
pub fn discretize_at(path: &PathSpec, k: usize, tol: &Tolerances) -> Result<FactorList> {
    let factors = path.factors(k, tol)?;
    Ok(FactorList::from_factors(&factors, tol)?.with_trace(vec![k]))
}
