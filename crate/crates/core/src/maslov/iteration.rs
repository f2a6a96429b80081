use num_complex::Complex64;

use super::{average_maslov, index_profile, maslov};
use crate::error::Result;
use crate::family::{bott_indices, FactorList};
use crate::linalg::{nth_roots, Inertia, RMatrix, Tolerances};

/// The `p`-fold iterate of a discretized path: the factor list repeated `p`
/// times, so its monodromy is `P^p`.
pub fn iterate_path(f: &FactorList, p: usize) -> Result<FactorList> {
    f.iterate(p)
}

/// One value of `theta`: Bott indices of the `p`-th iterate against the sum
/// over the `p`-th roots of `theta` for the original path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BottRow {
    pub theta: Complex64,
    pub lhs: Inertia,
    pub rhs: Inertia,
}

impl BottRow {
    pub fn pass(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BottFormulaReport {
    pub p: usize,
    pub rows: Vec<BottRow>,
}

impl BottFormulaReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(BottRow::pass)
    }
}

pub fn bott_formula_report(f: &FactorList, p: usize, thetas: &[Complex64], tol: &Tolerances) -> Result<BottFormulaReport> {
    let iterated = f.iterate(p)?;
    let mut rows = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let lhs = bott_indices(&iterated, theta, tol)?.inertia;
        let mut rhs = Inertia::default();
        for w in nth_roots(theta, p) {
            rhs = rhs + bott_indices(f, w, tol)?.inertia;
        }
        rows.push(BottRow { theta, lhs, rhs });
    }
    Ok(BottFormulaReport { p, rows })
}

/// `p avg - d <= mas_p` and `mas_p + nul_p <= p avg + d` for the `p`-th
/// iterate, with the equality cases.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationInequalityReport {
    pub p: usize,
    pub d: usize,
    pub average: f64,
    pub mas: i64,
    pub nul: usize,
    /// `mas_p - (p avg - d)`.
    pub lower_slack: f64,
    /// `p avg + d - mas_p - nul_p`.
    pub upper_slack: f64,
    /// `P^p - I` is nilpotent.
    pub unipotent: bool,
    pub identity: bool,
    pub slack_tolerance: f64,
}

impl IterationInequalityReport {
    pub fn lower_equal(&self) -> bool {
        self.lower_slack.abs() <= self.slack_tolerance
    }

    pub fn upper_equal(&self) -> bool {
        self.upper_slack.abs() <= self.slack_tolerance
    }

    pub fn inequalities_hold(&self) -> bool {
        self.lower_slack >= -self.slack_tolerance && self.upper_slack >= -self.slack_tolerance
    }

    /// Both inequalities hold, an equality forces `sigma(P^p) = {1}` and
    /// `nul_p >= d`, and both equalities together happen exactly when
    /// `P^p = I`.
    pub fn pass(&self) -> bool {
        let one_sided = !(self.lower_equal() || self.upper_equal()) || (self.unipotent && self.nul >= self.d);
        let both = (self.lower_equal() && self.upper_equal()) == self.identity;
        self.inequalities_hold() && one_sided && both
    }
}

fn is_unipotent(m: &RMatrix) -> bool {
    let n = m.nrows();
    let e = m - RMatrix::identity(n, n);
    let scale = e.amax().max(1.0).powi(n as i32);
    let mut power = RMatrix::identity(n, n);
    for _ in 0..n {
        power = &power * &e;
    }
    power.amax() <= 1e-8 * scale
}

pub fn iteration_inequality_report(f: &FactorList, p: usize, tol: &Tolerances) -> Result<IterationInequalityReport> {
    let d = f.d();
    let average = average_maslov(&index_profile(f, tol)?);
    let iterated = f.iterate(p)?;
    let m = maslov(&iterated, tol)?;
    let power = iterated.monodromy(tol)?;
    let n = 2 * d;
    let identity = (power.matrix() - RMatrix::identity(n, n)).amax() <= 1e-8 * power.matrix().amax().max(1.0);
    let pa = p as f64 * average;
    Ok(IterationInequalityReport {
        p,
        d,
        average,
        mas: m.mas,
        nul: m.nul,
        lower_slack: m.mas as f64 - (pa - d as f64),
        upper_slack: pa + d as f64 - m.mas as f64 - m.nul as f64,
        unipotent: is_unipotent(power.matrix()),
        identity,
        slack_tolerance: 1e-6,
    })
}
