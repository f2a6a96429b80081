//! Problem documents: one JSON object per run.

use serde::{Deserialize, Serialize};

use sympindex::coefficients::CoefficientMap;
use sympindex::family::{DiscretizeOptions, PathSpec, DEFAULT_STEPS_PER_UNIT};
use sympindex::lagrangian::QuadraticLagrangian;
use sympindex::linalg::RMatrix;
use sympindex::symplectic::{direct_sum, make_j, make_rotation, make_shear, SymplecticMatrix};
use sympindex::{Error, Tolerances};

use crate::angle::Angle;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub schema_version: String,
    pub d: Option<usize>,
    pub problem: ProblemDoc,
    #[serde(default)]
    pub options: OptionsDoc,
}

/// Exactly one of `path`, `matrix` or `lagrangian`.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemDoc {
    Path(PathDoc),
    Matrix(MatrixDoc),
    Lagrangian(LagrangianDoc),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PathDoc {
    Rotation { beta: Angle },
    Shear { r: f64 },
    Sampled { times: Vec<f64>, matrices: Vec<Vec<Vec<f64>>> },
    Hamiltonian { hessian: CoefficientDoc, steps_per_unit: Option<usize> },
    Lagrangian { lagrangian: LagrangianDoc },
}

/// `"J"`, `"identity"`, `{"rotation": angle}`, `{"shear": r}`,
/// `{"rows": [[..], ..]}` or `{"direct_sum": [..]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum MatrixDoc {
    Named(String),
    Rotation { rotation: Angle },
    Shear { shear: f64 },
    Rows { rows: Vec<Vec<f64>> },
    DirectSum { direct_sum: Vec<MatrixDoc> },
}

/// A number (a 1x1 constant), rows of a constant matrix,
/// `{"cosine": {"base", "amplitude", "harmonic"}}` or `{"samples": [..]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CoefficientDoc {
    Scalar(f64),
    Constant(Vec<Vec<f64>>),
    Cosine { cosine: CosineDoc },
    Samples { samples: Vec<Vec<Vec<f64>>> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosineDoc {
    pub base: Vec<Vec<f64>>,
    pub amplitude: Vec<Vec<f64>>,
    #[serde(default = "one")]
    pub harmonic: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum LagrangianDoc {
    FreeParticle { d: Option<usize> },
    /// `omega` accepts the angle forms, so `"2*pi"` works.
    Oscillator { omega: Angle },
    General { alpha: CoefficientDoc, beta: CoefficientDoc, delta: CoefficientDoc },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDoc {
    #[serde(default)]
    pub tolerances: TolerancesDoc,
    pub k0: Option<usize>,
    pub k_max: Option<usize>,
    pub eta: Option<f64>,
    /// Fixed number of factors; skips the adaptive search.
    pub k: Option<usize>,
    pub p: Option<usize>,
    pub p_range: Option<[usize; 2]>,
    pub theta: Option<Vec<Angle>>,
    #[serde(default)]
    pub verify: bool,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesDoc {
    pub zero: Option<f64>,
    pub sym: Option<f64>,
    pub sp: Option<f64>,
    pub jacobi_max_sweeps: Option<usize>,
    pub jacobi_off_target: Option<f64>,
}

impl TolerancesDoc {
    pub fn resolve(&self) -> Result<Tolerances, Error> {
        let def = Tolerances::default();
        let tol = Tolerances {
            zero: self.zero.unwrap_or(def.zero),
            sym: self.sym.unwrap_or(def.sym),
            sp: self.sp.unwrap_or(def.sp),
            jacobi_max_sweeps: self.jacobi_max_sweeps.unwrap_or(def.jacobi_max_sweeps),
            jacobi_off_target: self.jacobi_off_target.unwrap_or(def.jacobi_off_target),
        };
        tol.validate()?;
        Ok(tol)
    }
}

/// Tolerances as echoed in every result.
#[derive(Debug, Clone, Serialize)]
pub struct ToleranceEcho {
    pub zero: f64,
    pub sym: f64,
    pub sp: f64,
    pub jacobi_max_sweeps: usize,
    pub jacobi_off_target: f64,
}

impl From<&Tolerances> for ToleranceEcho {
    fn from(t: &Tolerances) -> Self {
        ToleranceEcho {
            zero: t.zero,
            sym: t.sym,
            sp: t.sp,
            jacobi_max_sweeps: t.jacobi_max_sweeps,
            jacobi_off_target: t.jacobi_off_target,
        }
    }
}

pub fn parse_document(text: &str) -> Result<ProblemDocument, Error> {
    let doc: ProblemDocument =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed document: {e}")))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported schema_version '{}', expected '{SCHEMA_VERSION}'",
            doc.schema_version
        )));
    }
    Ok(doc)
}

fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<RMatrix, Error> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(Error::DimensionMismatch("matrix rows must be nonempty and of equal length".into()));
    }
    Ok(RMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

fn coefficient(doc: &CoefficientDoc) -> Result<CoefficientMap, Error> {
    let map = match doc {
        CoefficientDoc::Scalar(x) => CoefficientMap::scalar(*x),
        CoefficientDoc::Constant(rows) => CoefficientMap::Constant(rows_to_matrix(rows)?),
        CoefficientDoc::Cosine { cosine } => CoefficientMap::Cosine {
            base: rows_to_matrix(&cosine.base)?,
            amplitude: rows_to_matrix(&cosine.amplitude)?,
            harmonic: cosine.harmonic,
        },
        CoefficientDoc::Samples { samples } => {
            CoefficientMap::Sampled(samples.iter().map(|s| rows_to_matrix(s)).collect::<Result<_, _>>()?)
        }
    };
    map.validate()?;
    Ok(map)
}

impl ProblemDocument {
    /// Checks `d` against the dimension the problem itself implies.
    fn check_d(&self, actual: usize) -> Result<usize, Error> {
        match self.d {
            Some(d) if d != actual => {
                Err(Error::DimensionMismatch(format!("document declares d = {d} but the problem has d = {actual}")))
            }
            _ => Ok(actual),
        }
    }

    pub fn lagrangian(&self, doc: &LagrangianDoc, tol: &Tolerances) -> Result<QuadraticLagrangian, Error> {
        let l = match doc {
            LagrangianDoc::FreeParticle { d } => {
                let d = d.or(self.d).unwrap_or(1);
                if d == 0 {
                    return Err(Error::InvalidInput("d must be positive".into()));
                }
                QuadraticLagrangian::free_particle(d)
            }
            LagrangianDoc::Oscillator { omega } => QuadraticLagrangian::harmonic_oscillator(omega.radians),
            LagrangianDoc::General { alpha, beta, delta } => {
                QuadraticLagrangian::new(coefficient(alpha)?, coefficient(beta)?, coefficient(delta)?, tol)?
            }
        };
        self.check_d(l.d())?;
        Ok(l)
    }

    pub fn matrix(&self, doc: &MatrixDoc, tol: &Tolerances) -> Result<SymplecticMatrix, Error> {
        let m = match doc {
            MatrixDoc::Named(name) => {
                let d = self.d.unwrap_or(1);
                if d == 0 {
                    return Err(Error::InvalidInput("d must be positive".into()));
                }
                match name.as_str() {
                    "J" | "j" => make_j(d),
                    "identity" | "I" => SymplecticMatrix::identity(d),
                    other => return Err(Error::InvalidInput(format!("unknown named matrix '{other}'"))),
                }
            }
            MatrixDoc::Rotation { rotation } => make_rotation(rotation.radians),
            MatrixDoc::Shear { shear } => make_shear(*shear),
            MatrixDoc::Rows { rows } => SymplecticMatrix::new(rows_to_matrix(rows)?, tol)?,
            MatrixDoc::DirectSum { direct_sum: parts } => {
                let mut parts = parts.iter();
                let first = parts.next().ok_or_else(|| Error::InvalidInput("empty direct_sum".into()))?;
                let mut acc = self.matrix_unchecked(first, tol)?;
                for p in parts {
                    acc = direct_sum(&acc, &self.matrix_unchecked(p, tol)?);
                }
                acc
            }
        };
        self.check_d(m.d())?;
        Ok(m)
    }

    fn matrix_unchecked(&self, doc: &MatrixDoc, tol: &Tolerances) -> Result<SymplecticMatrix, Error> {
        match doc {
            MatrixDoc::Named(_) => {
                Err(Error::InvalidInput("named matrices cannot appear inside direct_sum; use rows".into()))
            }
            _ => ProblemDocument { d: None, ..self.clone() }.matrix(doc, tol),
        }
    }

    pub fn path(&self, doc: &PathDoc, tol: &Tolerances) -> Result<PathSpec, Error> {
        let check_finite = |x: f64, name: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!("{name} must be finite")))
            }
        };
        let path = match doc {
            PathDoc::Rotation { beta } => {
                check_finite(beta.radians, "beta")?;
                PathSpec::NamedRotation { beta: beta.radians }
            }
            PathDoc::Shear { r } => {
                check_finite(*r, "r")?;
                PathSpec::NamedShear { r: *r }
            }
            PathDoc::Sampled { times, matrices } => {
                let ms = matrices
                    .iter()
                    .map(|rows| SymplecticMatrix::new(rows_to_matrix(rows)?, tol))
                    .collect::<Result<Vec<_>, _>>()?;
                PathSpec::sampled(times.clone(), ms, tol)?
            }
            PathDoc::Hamiltonian { hessian, steps_per_unit } => {
                match PathSpec::linear_hamiltonian(coefficient(hessian)?, tol)? {
                    PathSpec::LinearHamiltonian { hessian, .. } => PathSpec::LinearHamiltonian {
                        hessian,
                        steps_per_unit: steps_per_unit.unwrap_or(DEFAULT_STEPS_PER_UNIT).max(1),
                    },
                    other => other,
                }
            }
            PathDoc::Lagrangian { lagrangian } => PathSpec::Lagrangian(self.lagrangian(lagrangian, tol)?),
        };
        self.check_d(path.d())?;
        Ok(path)
    }

    pub fn discretize_options(&self) -> Result<DiscretizeOptions, Error> {
        let def = DiscretizeOptions::default();
        let opts = DiscretizeOptions {
            eta: self.options.eta.unwrap_or(def.eta),
            k0: self.options.k0.unwrap_or(def.k0),
            k_max: self.options.k_max.unwrap_or(def.k_max),
        };
        opts.validate()?;
        Ok(opts)
    }
}
