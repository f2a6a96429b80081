//! Quadratic Tonelli Lagrangians
//! `L(t, q, v) = 1/2 <alpha_t v, v> + <beta_t q, v> + 1/2 <delta_t q, q>`,
//! their dual Hamiltonian flows and the action Hessian on broken
//! Euler-Lagrange loops.

mod action;
mod flow;
mod report;

use nalgebra::Cholesky;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::coefficients::CoefficientMap;
use crate::error::{Error, Result};
use crate::linalg::{inertia, HermitianMatrix, InertiaOutcome, RMatrix, Tolerances};
use crate::symplectic::{inverse_with_condition, SymplecticMatrix};

pub use action::{action_generating_triple, segment_action_triple, DEFAULT_QUADRATURE_STEPS};
pub use flow::{linear_hamiltonian_flow, MAX_FLOW_STEPS};
pub use report::{morse_equals_maslov_report, MorseMaslovReport, ACTION_TRIPLE_TOLERANCE};

pub(crate) use flow::{rk4_fundamental, rk4_trajectory};

/// RK4 steps per segment for the Hamiltonian segment flows.
pub const SEGMENT_STEPS: usize = 64;

/// Grid on which positivity of `alpha` is verified.
const ALPHA_CHECK_POINTS: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticLagrangian {
    d: usize,
    alpha: CoefficientMap,
    beta: CoefficientMap,
    delta: CoefficientMap,
}

impl QuadraticLagrangian {
    pub fn new(alpha: CoefficientMap, beta: CoefficientMap, delta: CoefficientMap, tol: &Tolerances) -> Result<Self> {
        for m in [&alpha, &beta, &delta] {
            m.validate()?;
        }
        let (d, dc) = alpha.shape();
        if d == 0 || d != dc || beta.shape() != (d, d) || delta.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "alpha {:?}, beta {:?}, delta {:?} must all be square of one size",
                alpha.shape(),
                beta.shape(),
                delta.shape()
            )));
        }
        for (name, m) in [("alpha", &alpha), ("delta", &delta)] {
            let residual = m.asymmetry();
            if residual > tol.sym {
                return Err(Error::InvalidInput(format!("{name} is not symmetric (residual {residual:.3e})")));
            }
        }
        let l = QuadraticLagrangian { d, alpha: alpha.symmetrized(), beta, delta: delta.symmetrized() };
        for i in 0..ALPHA_CHECK_POINTS {
            let t = i as f64 / ALPHA_CHECK_POINTS as f64;
            if Cholesky::new(l.alpha.eval(t)).is_none() {
                return Err(Error::SingularAlpha { t });
            }
        }
        Ok(l)
    }

    pub fn free_particle(d: usize) -> Self {
        QuadraticLagrangian {
            d,
            alpha: CoefficientMap::Constant(RMatrix::identity(d, d)),
            beta: CoefficientMap::zeros(d),
            delta: CoefficientMap::zeros(d),
        }
    }

    /// `1/2 v^2 - 1/2 w^2 q^2`.
    pub fn harmonic_oscillator(w: f64) -> Self {
        QuadraticLagrangian {
            d: 1,
            alpha: CoefficientMap::scalar(1.0),
            beta: CoefficientMap::scalar(0.0),
            delta: CoefficientMap::scalar(-w * w),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> &CoefficientMap {
        &self.alpha
    }

    pub fn beta(&self) -> &CoefficientMap {
        &self.beta
    }

    pub fn delta(&self) -> &CoefficientMap {
        &self.delta
    }

    /// Hessian of the dual Hamiltonian in `(q, p)` order, falling back to a
    /// NaN matrix where `alpha` is singular so that integration fails loudly.
    pub(crate) fn hamiltonian_hessian_or_nan(&self, t: f64) -> RMatrix {
        dual_hamiltonian_hessian(self, t).unwrap_or_else(|_| RMatrix::from_element(2 * self.d, 2 * self.d, f64::NAN))
    }
}

/// Hessian in `(q, p)` order of
/// `H_t(q, p) = 1/2 <a^-1 p, p> - <a^-1 b q, p> + 1/2 <(b^T a^-1 b - delta) q, q>`.
pub fn dual_hamiltonian_hessian(l: &QuadraticLagrangian, t: f64) -> Result<RMatrix> {
    let a = l.alpha.eval(t);
    let b = l.beta.eval(t);
    let delta = l.delta.eval(t);
    let a_inv = Cholesky::new(a).ok_or(Error::SingularAlpha { t })?.inverse();
    let d = l.d;
    let mut s = RMatrix::zeros(2 * d, 2 * d);
    let ainv_b = &a_inv * &b;
    let qq = b.transpose() * &ainv_b - delta;
    s.view_mut((0, 0), (d, d)).copy_from(&((&qq + qq.transpose()) * 0.5));
    s.view_mut((d, 0), (d, d)).copy_from(&(-&ainv_b));
    s.view_mut((0, d), (d, d)).copy_from(&(-ainv_b.transpose()));
    s.view_mut((d, d), (d, d)).copy_from(&((&a_inv + a_inv.transpose()) * 0.5));
    Ok(s)
}

/// Legendre map `(x, v) -> (x, alpha_t v + beta_t x)`.
pub fn legendre_map(l: &QuadraticLagrangian, t: f64) -> RMatrix {
    let d = l.d;
    let mut m = RMatrix::identity(2 * d, 2 * d);
    m.view_mut((d, 0), (d, d)).copy_from(&l.beta.eval(t));
    m.view_mut((d, d), (d, d)).copy_from(&l.alpha.eval(t));
    m
}

fn legendre_inverse(l: &QuadraticLagrangian, t: f64) -> Result<RMatrix> {
    let d = l.d;
    let a_inv = Cholesky::new(l.alpha.eval(t)).ok_or(Error::SingularAlpha { t })?.inverse();
    let mut m = RMatrix::identity(2 * d, 2 * d);
    m.view_mut((d, 0), (d, d)).copy_from(&(-(&a_inv * l.beta.eval(t))));
    m.view_mut((d, d), (d, d)).copy_from(&a_inv);
    Ok(m)
}

/// Hamiltonian flows over `[j/k, (j+1)/k]` for `j = 0..k`.
pub fn hamiltonian_segment_flows(l: &QuadraticLagrangian, k: usize, tol: &Tolerances) -> Result<Vec<SymplecticMatrix>> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    (0..k)
        .into_par_iter()
        .map(|j| {
            let (t0, t1) = (j as f64 / k as f64, (j + 1) as f64 / k as f64);
            linear_hamiltonian_flow(|t| l.hamiltonian_hessian_or_nan(t), t0, t1, SEGMENT_STEPS, tol)
        })
        .collect()
}

/// Flow of the Euler-Lagrange equation on one segment in `(x, v)`
/// coordinates, alongside the Hamiltonian flow it is conjugate to.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentMap {
    pub flow: SymplecticMatrix,
    pub q: RMatrix,
}

impl SegmentMap {
    fn block(&self, r: usize, c: usize) -> RMatrix {
        let d = self.q.nrows() / 2;
        self.q.view((r * d, c * d), (d, d)).into_owned()
    }

    pub fn qa(&self) -> RMatrix {
        self.block(0, 0)
    }

    pub fn qb(&self) -> RMatrix {
        self.block(0, 1)
    }

    pub fn qc(&self) -> RMatrix {
        self.block(1, 0)
    }

    pub fn qd(&self) -> RMatrix {
        self.block(1, 1)
    }
}

/// `Q_j = Lambda_{(j+1)/k}^{-1} P_j Lambda_{j/k}` with `Lambda_t` the
/// Legendre map. Each velocity-to-position block must be invertible.
pub fn lagrangian_segment_maps(l: &QuadraticLagrangian, k: usize, tol: &Tolerances) -> Result<Vec<SegmentMap>> {
    let flows = hamiltonian_segment_flows(l, k, tol)?;
    segment_maps_from_flows(l, flows, tol)
}

fn segment_maps_from_flows(l: &QuadraticLagrangian, flows: Vec<SymplecticMatrix>, tol: &Tolerances) -> Result<Vec<SegmentMap>> {
    let k = flows.len();
    let mut out = Vec::with_capacity(k);
    for (j, flow) in flows.into_iter().enumerate() {
        let (t0, t1) = (j as f64 / k as f64, (j + 1) as f64 / k as f64);
        let q = legendre_inverse(l, t1)? * flow.matrix() * legendre_map(l, t0);
        let seg = SegmentMap { flow, q };
        match inverse_with_condition(&seg.qb(), crate::linalg::real_inf_norm(&seg.q)) {
            Some((_, cond)) if cond <= 1.0 / tol.zero => {}
            _ => return Err(Error::ConjugatePointInSegment { segment: j, k }),
        }
        out.push(seg);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteActionHessian {
    pub d: usize,
    pub k: usize,
    /// Symmetric `dk x dk` matrix in node coordinates `(x_0, ..., x_{k-1})`.
    pub matrix: RMatrix,
    pub segments: Vec<SegmentMap>,
}

impl DiscreteActionHessian {
    /// `Gamma(1)`, the product of the Hamiltonian segment flows.
    pub fn monodromy(&self) -> SymplecticMatrix {
        let mut acc = SymplecticMatrix::identity(self.d);
        for s in &self.segments {
            acc = s.flow.compose(&acc);
        }
        acc
    }
}

/// Second variation of the action on loops that solve the Euler-Lagrange
/// equation on each `[j/k, (j+1)/k]`, written in the node values.
///
/// With `V_j = q_b^{-1}(x_{j+1} - q_a x_j)` the outgoing and
/// `W_{j+1} = q_c x_j + q_d V_j` the incoming velocity at each node, the form
/// is `sum_j <alpha_{j/k} (W_j - V_j), x'_j>` with cyclic indices.
pub fn discrete_action_hessian(l: &QuadraticLagrangian, k: usize, tol: &Tolerances) -> Result<DiscreteActionHessian> {
    let segments = lagrangian_segment_maps(l, k, tol)?;
    assemble_action_hessian(l, segments, tol)
}

fn assemble_action_hessian(l: &QuadraticLagrangian, segments: Vec<SegmentMap>, tol: &Tolerances) -> Result<DiscreteActionHessian> {
    let d = l.d;
    let k = segments.len();
    // per segment: V_j = vx * x_j + vy * x_{j+1}; W_{j+1} = wx * x_j + wy * x_{j+1}
    let mut parts = Vec::with_capacity(k);
    for s in &segments {
        let qb_inv = s.qb().try_inverse().ok_or(Error::ConjugatePointInSegment { segment: parts.len(), k })?;
        let vx = -(&qb_inv * s.qa());
        let vy = qb_inv;
        let wx = s.qc() + s.qd() * &vx;
        let wy = s.qd() * &vy;
        parts.push((vx, vy, wx, wy));
    }
    let mut m = RMatrix::zeros(d * k, d * k);
    for j in 0..k {
        let alpha = l.alpha.eval(j as f64 / k as f64);
        let jm = (j + k - 1) % k;
        let jp = (j + 1) % k;
        let (vx, vy, _, _) = &parts[j];
        let (_, _, wx, wy) = &parts[jm];
        let mut add = |col: usize, block: RMatrix| {
            let mut view = m.view_mut((j * d, col * d), (d, d));
            view += &alpha * block;
        };
        add(jm, wx.clone());
        add(j, wy - vx);
        add(jp, -vy);
    }
    let scale = m.amax().max(1.0);
    let residual = (&m - m.transpose()).amax();
    if residual > tol.sym * scale {
        return Err(Error::InvariantViolation(format!(
            "discrete action Hessian is not symmetric (residual {residual:.3e})"
        )));
    }
    let matrix = (&m + m.transpose()) * 0.5;
    Ok(DiscreteActionHessian { d, k, matrix, segments })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianMorse {
    pub k: usize,
    pub outcome: InertiaOutcome,
    /// `dim ker(Gamma(1) - I)`, the pinned nullity.
    pub kernel_dim: usize,
    /// Inertia of the same form at `2k`.
    pub refined: InertiaOutcome,
}

/// Inertia of the discrete action Hessian at `k`, nullity pinned to
/// `dim ker(Gamma(1) - I)`, cross-checked at `2k`.
pub fn lagrangian_morse_index(l: &QuadraticLagrangian, k: usize, tol: &Tolerances) -> Result<LagrangianMorse> {
    let run = |k: usize| -> Result<(InertiaOutcome, usize)> {
        let h = discrete_action_hessian(l, k, tol)?;
        let gamma = h.monodromy();
        let kernel = crate::symplectic::eigenspace_dim(&gamma, Complex64::new(1.0, 0.0), tol)?;
        let form = HermitianMatrix::from_real_symmetric(&h.matrix, tol)?;
        Ok((inertia(&form, tol, Some(kernel))?, kernel))
    };
    let (outcome, kernel_dim) = run(k)?;
    let (refined, _) = run(2 * k)?;
    if refined.inertia.index != outcome.inertia.index || refined.inertia.nullity != outcome.inertia.nullity {
        return Err(Error::InvariantViolation(format!(
            "action Hessian index changed under refinement: {} at k = {k}, {} at k = {}",
            outcome.inertia,
            refined.inertia,
            2 * k
        )));
    }
    Ok(LagrangianMorse { k, outcome, kernel_dim, refined })
}
