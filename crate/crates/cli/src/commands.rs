//! The subcommands proper: document in, result value out.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use sympindex::family::{discretize, discretize_at, DiscretizeOptions, FactorList, PathSpec};
use sympindex::lagrangian::{morse_equals_maslov_report, QuadraticLagrangian, ACTION_TRIPLE_TOLERANCE};
use sympindex::linalg::NullityDisagreement;
use sympindex::maslov::{
    average_comaslov, average_maslov, bott_formula_report, factorize_matrix, index_profile, iteration_inequality_report,
    maslov, splitting_numbers, splitting_numbers_via_family, theta_maslov, MaslovIndices,
};
use sympindex::symplectic::circle_spectrum;
use sympindex::{Error, Tolerances};

use crate::angle::Angle;
use crate::document::{ProblemDoc, ProblemDocument, ToleranceEcho, SCHEMA_VERSION};
use crate::output::{cell, cell_f, to_value, Rendered, Table};

/// Everything a command needs once the document and the flags are merged.
pub struct Settings {
    pub doc: ProblemDocument,
    pub tol: Tolerances,
    pub opts: DiscretizeOptions,
    pub k: Option<usize>,
    pub k2x: bool,
    pub verify: bool,
    pub thetas: Option<Vec<Angle>>,
    pub p_range: Option<(usize, usize)>,
}

fn angle_of(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

#[derive(Serialize)]
struct ThetaOut {
    re: f64,
    im: f64,
    angle: f64,
}

impl From<Complex64> for ThetaOut {
    fn from(z: Complex64) -> Self {
        ThetaOut { re: z.re, im: z.im, angle: angle_of(z) }
    }
}

#[derive(Serialize)]
struct WarningOut {
    pinned: usize,
    by_threshold: usize,
}

fn warning(w: Option<NullityDisagreement>) -> Option<WarningOut> {
    w.map(|w| WarningOut { pinned: w.pinned, by_threshold: w.by_threshold })
}

impl Settings {
    fn path(&self) -> Result<PathSpec, Error> {
        match &self.doc.problem {
            ProblemDoc::Path(p) => self.doc.path(p, &self.tol),
            ProblemDoc::Lagrangian(l) => Ok(PathSpec::Lagrangian(self.doc.lagrangian(l, &self.tol)?)),
            ProblemDoc::Matrix(_) => Err(Error::InvalidInput(
                "this command needs a path; a matrix alone does not determine one".into(),
            )),
        }
    }

    fn factors_of(&self, path: &PathSpec) -> Result<FactorList, Error> {
        let f = match self.k {
            Some(k) => discretize_at(path, k, &self.tol)?,
            None => discretize(path, &self.opts, &self.tol)?,
        };
        if self.k2x {
            discretize_at(path, 2 * f.k(), &self.tol)
        } else {
            Ok(f)
        }
    }

    fn theta_list(&self) -> Vec<Complex64> {
        self.thetas.as_ref().map(|ts| ts.iter().map(Angle::unit).collect()).unwrap_or_default()
    }

    fn envelope(&self, command: &str, d: usize, result: Value) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "d": d,
            "result": result,
            "options": to_value(&json!({
                "k0": self.opts.k0,
                "eta": self.opts.eta,
                "k_max": self.opts.k_max,
                "k": self.k,
                "k2x": self.k2x,
                "verify": self.verify,
            })),
            "tolerances": to_value(&ToleranceEcho::from(&self.tol)),
        })
    }
}

#[derive(Serialize)]
struct Indices {
    mas: i64,
    comas: i64,
    nul: usize,
}

impl From<&MaslovIndices> for Indices {
    fn from(m: &MaslovIndices) -> Self {
        Indices { mas: m.mas, comas: m.comas, nul: m.nul }
    }
}

#[derive(Serialize)]
struct IndexResult {
    mas: i64,
    comas: i64,
    nul: usize,
    k_used: usize,
    k_trace: Vec<usize>,
    residuals: Residuals,
    nullity_warning: Option<WarningOut>,
    refined: Option<Refined>,
    theta_values: Vec<ThetaValue>,
}

#[derive(Serialize)]
struct Residuals {
    max_triple_size: f64,
    monodromy_symplectic: f64,
}

#[derive(Serialize)]
struct Refined {
    k: usize,
    mas: i64,
    comas: i64,
    nul: usize,
}

#[derive(Serialize)]
struct ThetaValue {
    theta: ThetaOut,
    mas: i64,
    comas: i64,
    nul: usize,
}

fn k_mismatch(what: &str, k: usize, a: &MaslovIndices, b: &MaslovIndices) -> Error {
    Error::InvariantViolation(format!(
        "{what} differ between k = {k} {:?} and k = {} {:?}",
        a.triple(),
        2 * k,
        b.triple()
    ))
}

pub fn cmd_index(s: &Settings) -> Result<Rendered, Error> {
    let path = s.path()?;
    let f = s.factors_of(&path)?;
    let m = maslov(&f, &s.tol)?;
    let thetas = s.theta_list();
    let mut theta_values = Vec::new();
    for &theta in &thetas {
        let t = theta_maslov(&f, theta, &s.tol)?;
        theta_values.push(ThetaValue { theta: theta.into(), mas: t.mas, comas: t.comas, nul: t.nul });
    }
    let refined = if s.verify {
        let fine = discretize_at(&path, 2 * f.k(), &s.tol)?;
        let r = maslov(&fine, &s.tol)?;
        if r.triple() != m.triple() {
            return Err(k_mismatch("Maslov indices", f.k(), &m, &r));
        }
        for &theta in &thetas {
            let (a, b) = (theta_maslov(&f, theta, &s.tol)?, theta_maslov(&fine, theta, &s.tol)?);
            if a.triple() != b.triple() {
                return Err(k_mismatch(&format!("theta-indices at {theta}"), f.k(), &a, &b));
            }
        }
        Some(Refined { k: fine.k(), mas: r.mas, comas: r.comas, nul: r.nul })
    } else {
        None
    };
    let result = IndexResult {
        mas: m.mas,
        comas: m.comas,
        nul: m.nul,
        k_used: f.k(),
        k_trace: f.trace().to_vec(),
        residuals: Residuals {
            max_triple_size: f.max_triple_size(),
            monodromy_symplectic: f.monodromy(&s.tol)?.residual(),
        },
        nullity_warning: warning(m.warning),
        refined,
        theta_values,
    };
    let mut rows = vec![vec![cell_f(0.0), cell(m.mas), cell(m.comas), cell(m.nul)]];
    for t in &result.theta_values {
        rows.push(vec![cell_f(t.theta.angle), cell(t.mas), cell(t.comas), cell(t.nul)]);
    }
    Ok(Rendered {
        json: s.envelope("index", f.d(), to_value(&result)),
        table: Some(Table { headers: vec!["angle", "mas", "comas", "nul"], rows }),
    })
}

pub fn cmd_profile(s: &Settings) -> Result<Rendered, Error> {
    let path = s.path()?;
    let f = s.factors_of(&path)?;
    let profile = index_profile(&f, &s.tol)?;
    let avg = average_maslov(&profile);
    let coavg = average_comaslov(&profile);
    let eigenvalues: Vec<Value> = profile
        .eigenvalues
        .iter()
        .map(|e| json!({"theta": to_value(&ThetaOut::from(e.theta)), "multiplicity": e.multiplicity}))
        .collect();
    let arcs: Vec<Value> = profile
        .arcs
        .iter()
        .map(|a| json!({"start": a.start, "end": a.end, "mas": a.mas, "comas": a.comas}))
        .collect();
    let points: Vec<Value> = profile
        .points
        .iter()
        .map(|p| json!({"theta": to_value(&ThetaOut::from(p.theta)), "mas": p.mas, "comas": p.comas, "nul": p.nul}))
        .collect();
    let result = json!({
        "k_used": f.k(),
        "eigenvalues": eigenvalues,
        "arcs": arcs,
        "points": points,
        "average_maslov": avg,
        "average_comaslov": coavg,
    });
    let mut rows = Vec::new();
    for a in &profile.arcs {
        rows.push(vec![cell("arc"), cell_f(a.start), cell_f(a.end), cell(a.mas), cell(a.comas), cell(0)]);
    }
    for p in &profile.points {
        rows.push(vec![cell("point"), cell_f(p.angle), cell_f(p.angle), cell(p.mas), cell(p.comas), cell(p.nul)]);
    }
    Ok(Rendered {
        json: s.envelope("profile", f.d(), to_value(&result)),
        table: Some(Table { headers: vec!["kind", "start", "end", "mas", "comas", "nul"], rows }),
    })
}

#[derive(Serialize)]
struct SplittingRow {
    theta: ThetaOut,
    s_plus: usize,
    s_minus: usize,
    co_s_plus: usize,
    co_s_minus: usize,
    nullity: usize,
    epsilon: f64,
}

pub fn cmd_splitting(s: &Settings) -> Result<Rendered, Error> {
    // the monodromy, and a family ending at it for the cross-check
    let (p, family) = match &s.doc.problem {
        ProblemDoc::Matrix(m) => (s.doc.matrix(m, &s.tol)?, None),
        _ => {
            let f = s.factors_of(&s.path()?)?;
            (f.monodromy(&s.tol)?, Some(f))
        }
    };
    let thetas = match &s.thetas {
        Some(_) => s.theta_list(),
        None => circle_spectrum(&p, &s.tol)?.iter().map(|e| e.theta).collect(),
    };
    let family = match (s.verify, family) {
        (false, _) => None,
        (true, Some(f)) => Some(f),
        (true, None) => Some(factorize_matrix(&p, &s.tol)?),
    };
    let mut rows = Vec::new();
    for &theta in &thetas {
        let n = splitting_numbers(&p, theta, &s.tol)?;
        if let Some(f) = &family {
            let m = splitting_numbers_via_family(f, theta, &s.tol)?;
            if m.as_tuple() != n.as_tuple() {
                return Err(Error::InvariantViolation(format!(
                    "splitting numbers at {theta}: {:?} from g_theta but {:?} from the family",
                    n.as_tuple(),
                    m.as_tuple()
                )));
            }
        }
        rows.push(SplittingRow {
            theta: theta.into(),
            s_plus: n.s_plus,
            s_minus: n.s_minus,
            co_s_plus: n.co_s_plus,
            co_s_minus: n.co_s_minus,
            nullity: n.nullity,
            epsilon: n.epsilon,
        });
    }
    let table = rows
        .iter()
        .map(|r| {
            vec![
                cell_f(r.theta.angle),
                cell(r.s_plus),
                cell(r.s_minus),
                cell(r.co_s_plus),
                cell(r.co_s_minus),
                cell(r.nullity),
            ]
        })
        .collect();
    let result = json!({ "splitting": to_value(&rows) });
    Ok(Rendered {
        json: s.envelope("splitting", p.d(), result),
        table: Some(Table {
            headers: vec!["angle", "s_plus", "s_minus", "co_s_plus", "co_s_minus", "nullity"],
            rows: table,
        }),
    })
}

#[derive(Serialize)]
struct IterateRow {
    p: usize,
    mas: i64,
    comas: i64,
    nul: usize,
    inequalities: InequalityOut,
    bott: Vec<BottOut>,
    pass: bool,
}

#[derive(Serialize)]
struct InequalityOut {
    average: f64,
    lower_slack: f64,
    upper_slack: f64,
    lower_equal: bool,
    upper_equal: bool,
    unipotent: bool,
    identity: bool,
    pass: bool,
}

#[derive(Serialize)]
struct BottOut {
    theta: ThetaOut,
    iterated: [usize; 3],
    root_sum: [usize; 3],
    pass: bool,
}

pub const DEFAULT_P_RANGE: (usize, usize) = (1, 4);

pub fn cmd_iterate(s: &Settings) -> Result<Rendered, Error> {
    let path = s.path()?;
    let f = s.factors_of(&path)?;
    let (lo, hi) = s.p_range.unwrap_or(DEFAULT_P_RANGE);
    if lo == 0 || hi < lo {
        return Err(Error::InvalidInput(format!("p range {lo}..{hi} is empty or contains zero")));
    }
    let thetas = match &s.thetas {
        Some(_) => s.theta_list(),
        None => vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
    };
    let mut rows = Vec::new();
    for p in lo..=hi {
        let m = maslov(&f.iterate(p)?, &s.tol)?;
        let ineq = iteration_inequality_report(&f, p, &s.tol)?;
        let bott = bott_formula_report(&f, p, &thetas, &s.tol)?;
        let triple = |i: &sympindex::Inertia| [i.index, i.coindex, i.nullity];
        rows.push(IterateRow {
            p,
            mas: m.mas,
            comas: m.comas,
            nul: m.nul,
            inequalities: InequalityOut {
                average: ineq.average,
                lower_slack: ineq.lower_slack,
                upper_slack: ineq.upper_slack,
                lower_equal: ineq.lower_equal(),
                upper_equal: ineq.upper_equal(),
                unipotent: ineq.unipotent,
                identity: ineq.identity,
                pass: ineq.pass(),
            },
            bott: bott
                .rows
                .iter()
                .map(|r| BottOut { theta: r.theta.into(), iterated: triple(&r.lhs), root_sum: triple(&r.rhs), pass: r.pass() })
                .collect(),
            pass: ineq.pass() && bott.pass(),
        });
    }
    if s.verify {
        if let Some(bad) = rows.iter().find(|r| !r.pass) {
            return Err(Error::InvariantViolation(format!("iteration checks fail at p = {}", bad.p)));
        }
    }
    let table = rows
        .iter()
        .map(|r| {
            vec![
                cell(r.p),
                cell(r.mas),
                cell(r.comas),
                cell(r.nul),
                cell_f(r.inequalities.lower_slack),
                cell_f(r.inequalities.upper_slack),
                cell(r.pass),
            ]
        })
        .collect();
    let result = json!({ "k_used": f.k(), "iterates": to_value(&rows) });
    Ok(Rendered {
        json: s.envelope("iterate", f.d(), result),
        table: Some(Table {
            headers: vec!["p", "mas", "comas", "nul", "lower_slack", "upper_slack", "pass"],
            rows: table,
        }),
    })
}

pub fn cmd_lagrangian(s: &Settings) -> Result<Rendered, Error> {
    let l: QuadraticLagrangian = match &s.doc.problem {
        ProblemDoc::Lagrangian(l) => s.doc.lagrangian(l, &s.tol)?,
        ProblemDoc::Path(_) => match s.path()? {
            PathSpec::Lagrangian(l) => l,
            _ => return Err(Error::InvalidInput("lagrangian needs a Lagrangian problem".into())),
        },
        ProblemDoc::Matrix(_) => return Err(Error::InvalidInput("lagrangian needs a Lagrangian problem".into())),
    };
    let k = match (s.k, s.k2x) {
        (Some(k), true) => Some(2 * k),
        (Some(k), false) => Some(k),
        (None, false) => None,
        (None, true) => Some(2 * discretize(&PathSpec::Lagrangian(l.clone()), &s.opts, &s.tol)?.k()),
    };
    let r = morse_equals_maslov_report(&l, k, &s.opts, &s.tol)?;
    if s.verify && !r.pass() {
        return Err(Error::InvariantViolation(format!(
            "Morse index {} against Maslov index {} (kernel {}), concave {}, triple gap {:.3e}",
            r.morse.outcome.inertia.index,
            r.maslov.mas,
            r.kernel_dim,
            r.concave(),
            r.action_deviation
        )));
    }
    let morse = r.morse.outcome.inertia;
    let result = json!({
        "k_used": r.k,
        "morse": {"index": morse.index, "coindex": morse.coindex, "nullity": morse.nullity},
        "morse_refined": {
            "k": 2 * r.k,
            "index": r.morse.refined.inertia.index,
            "nullity": r.morse.refined.inertia.nullity,
        },
        "maslov": to_value(&Indices::from(&r.maslov)),
        "kernel_dim": r.kernel_dim,
        "index_matches": r.index_matches(),
        "nullities_match": r.nullities_match(),
        "max_c_eigenvalue": r.max_c_eigenvalue,
        "max_action_c_eigenvalue": r.max_action_c_eigenvalue,
        "action_deviation": r.action_deviation,
        "action_tolerance": ACTION_TRIPLE_TOLERANCE,
        "pass": r.pass(),
    });
    let table = Table {
        headers: vec!["k", "morse_index", "mas", "kernel_dim", "max_c_eigenvalue", "pass"],
        rows: vec![vec![
            cell(r.k),
            cell(morse.index),
            cell(r.maslov.mas),
            cell(r.kernel_dim),
            cell_f(r.max_c_eigenvalue),
            cell(r.pass()),
        ]],
    };
    Ok(Rendered { json: s.envelope("lagrangian", l.d(), to_value(&result)), table: Some(table) })
}
