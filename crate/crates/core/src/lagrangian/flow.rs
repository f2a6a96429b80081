use crate::error::{Error, Result};
use crate::linalg::{RMatrix, Tolerances};
use crate::symplectic::{omega, SymplecticMatrix};

pub const MAX_FLOW_STEPS: usize = 1 << 12;

/// Fundamental solution over `[t0, t1]` of the linear Hamiltonian system
/// with `H_t(z) = 1/2 <S(t) z, z>`.
///
/// With `omega(z, z') = <X, Y'> - <Y, X'>` the Hamiltonian vector field is
/// `X_H(z) = ((S z)_y, -(S z)_x)`, i.e. `z' = Omega S(t) z`; for `S = I` the
/// flow turns clockwise. Classical RK4 with at least `steps` uniform steps,
/// and at least enough that `h * |Omega S|` stays below `0.01` at the two ends
/// and the midpoint; the step count is doubled until the result is symplectic
/// within `tol.sp`.
pub fn linear_hamiltonian_flow<F>(s: F, t0: f64, t1: f64, steps: usize, tol: &Tolerances) -> Result<SymplecticMatrix>
where
    F: Fn(f64) -> RMatrix,
{
    if !(t1 > t0) {
        return Err(Error::DegenerateTimeSpan { t0, t1 });
    }
    let rate = [t0, 0.5 * (t0 + t1), t1].iter().map(|&t| crate::linalg::real_inf_norm(&s(t))).fold(0.0, f64::max);
    let wanted = ((t1 - t0) * rate / 0.01).ceil();
    let mut n = if wanted.is_finite() && wanted > steps as f64 {
        (wanted as usize).next_power_of_two().min(MAX_FLOW_STEPS)
    } else {
        steps.max(1)
    };
    loop {
        let m = rk4_fundamental(&s, t0, t1, n, None);
        let (ok, residual) = crate::symplectic::is_symplectic(&m, tol)?;
        if ok {
            return Ok(SymplecticMatrix::from_exact(m));
        }
        if n >= MAX_FLOW_STEPS {
            return Err(Error::SymplecticityLost { residual, steps: n });
        }
        n = (2 * n).min(MAX_FLOW_STEPS);
    }
}

/// RK4 for `Z' = Omega S(t) Z` from `Z(t0) = z0` (identity when `None`).
/// Returns `Z(t1)`.
pub(crate) fn rk4_fundamental<F>(s: &F, t0: f64, t1: f64, steps: usize, z0: Option<&RMatrix>) -> RMatrix
where
    F: Fn(f64) -> RMatrix,
{
    rk4(s, t0, t1, steps, z0, false).0
}

/// Same integration, also returning the states at all `steps + 1` nodes.
pub(crate) fn rk4_trajectory<F>(s: &F, t0: f64, t1: f64, steps: usize, z0: &RMatrix) -> Vec<RMatrix>
where
    F: Fn(f64) -> RMatrix,
{
    rk4(s, t0, t1, steps, Some(z0), true).1
}

fn rk4<F>(s: &F, t0: f64, t1: f64, steps: usize, z0: Option<&RMatrix>, keep: bool) -> (RMatrix, Vec<RMatrix>)
where
    F: Fn(f64) -> RMatrix,
{
    let first = s(t0);
    let n = first.nrows();
    let o = omega(n / 2);
    let field = |m: RMatrix| &o * m;
    let h = (t1 - t0) / steps as f64;
    let mut z = z0.cloned().unwrap_or_else(|| RMatrix::identity(n, n));
    let mut states = Vec::new();
    if keep {
        states.reserve(steps + 1);
        states.push(z.clone());
    }
    let mut v_start = field(first);
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let v_mid = field(s(t + 0.5 * h));
        let v_end = field(s(if i + 1 == steps { t1 } else { t + h }));
        let k1 = &v_start * &z;
        let k2 = &v_mid * (&z + &k1 * (0.5 * h));
        let k3 = &v_mid * (&z + &k2 * (0.5 * h));
        let k4 = &v_end * (&z + &k3 * h);
        z += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        if keep {
            states.push(z.clone());
        }
        v_start = v_end;
    }
    (z, states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn oscillator_turns_clockwise() {
        for t in [0.3, 1.0, 2.5] {
            let p = linear_hamiltonian_flow(|_| RMatrix::identity(2, 2), 0.0, t, 64, &tol()).unwrap();
            let expected = DMatrix::from_row_slice(2, 2, &[t.cos(), t.sin(), -t.sin(), t.cos()]);
            assert!((p.matrix() - expected).amax() < 1e-8);
        }
    }

    #[test]
    fn free_particle_is_a_shear() {
        let s = |_: f64| DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        let p = linear_hamiltonian_flow(s, 0.0, 0.7, 8, &tol()).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, 0.7, 0.0, 1.0]);
        assert!((p.matrix() - expected).amax() < 1e-14);
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let p = linear_hamiltonian_flow(|_| RMatrix::zeros(4, 4), 0.0, 1.0, 4, &tol()).unwrap();
        assert_eq!(p.matrix(), &RMatrix::identity(4, 4));
    }

    #[test]
    fn refinement_reaches_symplecticity() {
        // a single step is far from symplectic for this stiff oscillator
        let s = |_: f64| RMatrix::identity(2, 2) * 40.0;
        let p = linear_hamiltonian_flow(s, 0.0, 1.0, 1, &tol()).unwrap();
        assert!(p.residual() <= tol().sp);
    }

    #[test]
    fn degenerate_span() {
        let r = linear_hamiltonian_flow(|_| RMatrix::identity(2, 2), 1.0, 1.0, 4, &tol());
        assert_eq!(r, Err(Error::DegenerateTimeSpan { t0: 1.0, t1: 1.0 }));
    }
}
