//! Time-periodic (period one) matrix-valued coefficient maps.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::RMatrix;

#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientMap {
    Constant(RMatrix),
    /// `base + amplitude * cos(2 pi harmonic t)`.
    Cosine { base: RMatrix, amplitude: RMatrix, harmonic: u32 },
    /// Values at `t = i / n`, `n` a power of two, interpolated by periodic
    /// Catmull-Rom cubics.
    Sampled(Vec<RMatrix>),
}

impl CoefficientMap {
    pub fn zeros(n: usize) -> Self {
        CoefficientMap::Constant(RMatrix::zeros(n, n))
    }

    pub fn scalar(x: f64) -> Self {
        CoefficientMap::Constant(RMatrix::from_element(1, 1, x))
    }

    pub fn validate(&self) -> Result<()> {
        let (r, c) = self.shape();
        let check = |m: &RMatrix| -> Result<()> {
            if m.shape() != (r, c) {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient sample is {}x{}, expected {r}x{c}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if m.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("non-finite coefficient".into()));
            }
            Ok(())
        };
        match self {
            CoefficientMap::Constant(m) => check(m),
            CoefficientMap::Cosine { base, amplitude, .. } => {
                check(base)?;
                check(amplitude)
            }
            CoefficientMap::Sampled(s) => {
                if s.is_empty() || !s.len().is_power_of_two() {
                    return Err(Error::InvalidInput(format!(
                        "sampled coefficients need a power-of-two grid, got {} samples",
                        s.len()
                    )));
                }
                s.iter().try_for_each(check)
            }
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            CoefficientMap::Constant(m) => m.shape(),
            CoefficientMap::Cosine { base, .. } => base.shape(),
            CoefficientMap::Sampled(s) => s.first().map_or((0, 0), |m| m.shape()),
        }
    }

    /// Largest asymmetry `max |m - m^T|` over the defining data.
    pub fn asymmetry(&self) -> f64 {
        let asym = |m: &RMatrix| (m - m.transpose()).amax();
        match self {
            CoefficientMap::Constant(m) => asym(m),
            CoefficientMap::Cosine { base, amplitude, .. } => asym(base).max(asym(amplitude)),
            CoefficientMap::Sampled(s) => s.iter().map(asym).fold(0.0, f64::max),
        }
    }

    /// Replaces every defining matrix by its symmetric part.
    pub fn symmetrized(&self) -> CoefficientMap {
        let sym = |m: &RMatrix| (m + m.transpose()) * 0.5;
        match self {
            CoefficientMap::Constant(m) => CoefficientMap::Constant(sym(m)),
            CoefficientMap::Cosine { base, amplitude, harmonic } => {
                CoefficientMap::Cosine { base: sym(base), amplitude: sym(amplitude), harmonic: *harmonic }
            }
            CoefficientMap::Sampled(s) => CoefficientMap::Sampled(s.iter().map(sym).collect()),
        }
    }

    pub fn eval(&self, t: f64) -> RMatrix {
        match self {
            CoefficientMap::Constant(m) => m.clone(),
            CoefficientMap::Cosine { base, amplitude, harmonic } => {
                base + amplitude * (TAU * *harmonic as f64 * t).cos()
            }
            CoefficientMap::Sampled(s) => {
                let n = s.len();
                if n == 1 {
                    return s[0].clone();
                }
                let u = (t * n as f64).rem_euclid(n as f64);
                let i = (u.floor() as usize).min(n - 1);
                let f = u - i as f64;
                let p0 = &s[(i + n - 1) % n];
                let p1 = &s[i];
                let p2 = &s[(i + 1) % n];
                let p3 = &s[(i + 2) % n];
                let (f2, f3) = (f * f, f * f * f);
                (p1 * 2.0
                    + (p2 - p0) * f
                    + (p0 * 2.0 - p1 * 5.0 + p2 * 4.0 - p3) * f2
                    + (p1 * 3.0 - p0 - p2 * 3.0 + p3) * f3)
                    * 0.5
            }
        }
    }
}
