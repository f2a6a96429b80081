use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{theta_maslov, MaslovIndices};
use crate::error::{Error, Result};
use crate::family::FactorList;
use crate::linalg::Tolerances;
use crate::symplectic::{circle_spectrum, CircleEigenvalue};

/// Open arc of the circle from `start` to `end` (radians, `start < end`,
/// `end` possibly beyond `2 pi`) carrying constant indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileArc {
    pub start: f64,
    pub end: f64,
    pub mas: i64,
    pub comas: i64,
}

impl ProfileArc {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, angle: f64) -> bool {
        let a = (angle - self.start).rem_euclid(TAU);
        a > 0.0 && a < self.length()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValue {
    pub theta: Complex64,
    pub angle: f64,
    pub mas: i64,
    pub comas: i64,
    pub nul: usize,
}

/// The piecewise constant map `theta -> (mas_theta, comas_theta, nul_theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexProfile {
    pub d: usize,
    pub eigenvalues: Vec<CircleEigenvalue>,
    pub arcs: Vec<ProfileArc>,
    pub points: Vec<PointValue>,
}

impl IndexProfile {
    /// `(mas, comas, nul)` at `e^{i angle}`.
    pub fn at_angle(&self, angle: f64, tol: &Tolerances) -> (i64, i64, usize) {
        let gap = tol.angle_gap();
        for p in &self.points {
            let diff = (angle - p.angle).rem_euclid(TAU);
            if diff.min(TAU - diff) <= gap {
                return (p.mas, p.comas, p.nul);
            }
        }
        let arc = self.arcs.iter().find(|a| a.contains(angle)).unwrap_or(&self.arcs[0]);
        (arc.mas, arc.comas, 0)
    }
}

/// Evaluates the theta-Maslov indices at every circle eigenvalue of the
/// monodromy and at one point of every arc between them.
pub fn index_profile(f: &FactorList, tol: &Tolerances) -> Result<IndexProfile> {
    let p = f.monodromy(tol)?;
    let eigenvalues = circle_spectrum(&p, tol)?;
    let angles: Vec<f64> = eigenvalues.iter().map(|e| e.angle).collect();
    let bounds: Vec<(f64, f64)> = match angles.len() {
        0 => vec![(0.0, TAU)],
        n => (0..n).map(|i| (angles[i], if i + 1 < n { angles[i + 1] } else { angles[0] + TAU })).collect(),
    };
    let arc_values: Vec<MaslovIndices> = bounds
        .par_iter()
        .map(|&(s, e)| theta_maslov(f, Complex64::from_polar(1.0, 0.5 * (s + e)), tol))
        .collect::<Result<_>>()?;
    let point_values: Vec<MaslovIndices> =
        eigenvalues.par_iter().map(|e| theta_maslov(f, e.theta, tol)).collect::<Result<_>>()?;

    let mut arcs = Vec::with_capacity(bounds.len());
    for (&(start, end), v) in bounds.iter().zip(&arc_values) {
        if v.nul != 0 {
            return Err(Error::InvariantViolation(format!(
                "nullity {} between circle eigenvalues at angle {}",
                v.nul,
                0.5 * (start + end)
            )));
        }
        arcs.push(ProfileArc { start, end, mas: v.mas, comas: v.comas });
    }
    let points: Vec<PointValue> = eigenvalues
        .iter()
        .zip(&point_values)
        .map(|(e, v)| PointValue { theta: e.theta, angle: e.angle, mas: v.mas, comas: v.comas, nul: v.nul })
        .collect();

    let n = points.len();
    for (i, pt) in points.iter().enumerate() {
        // arcs i - 1 and i end and start at point i
        for arc in [&arcs[(i + n - 1) % n], &arcs[i]] {
            let dm = arc.mas - pt.mas;
            let dc = arc.comas - pt.comas;
            if dm < 0 || dc < 0 || (dm + dc) as usize != pt.nul {
                return Err(Error::InvariantViolation(format!(
                    "indices jump by ({dm}, {dc}) at angle {} where the nullity is {}",
                    pt.angle, pt.nul
                )));
            }
        }
    }
    Ok(IndexProfile { d: f.d(), eigenvalues, arcs, points })
}

/// `(1 / 2 pi) * integral of mas_{e^{it}} dt`, summed exactly over the arcs.
pub fn average_maslov(profile: &IndexProfile) -> f64 {
    profile.arcs.iter().map(|a| a.mas as f64 * a.length()).sum::<f64>() / TAU
}

pub fn average_comaslov(profile: &IndexProfile) -> f64 {
    profile.arcs.iter().map(|a| a.comas as f64 * a.length()).sum::<f64>() / TAU
}
