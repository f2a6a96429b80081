//! Random instances and independent oracles shared by the integration tests
//! and the acceptance runner.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sympindex::coefficients::CoefficientMap;
use sympindex::family::{FactorList, PathSpec};
use sympindex::lagrangian::QuadraticLagrangian;
use sympindex::linalg::{CMatrix, RMatrix};
use sympindex::symplectic::GeneratingTriple;
use sympindex::Tolerances;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, scale: f64) -> RMatrix {
    RMatrix::from_fn(r, c, |_, _| rng.gen_range(-scale..scale))
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> RMatrix {
    let m = random_matrix(rng, d, d, scale);
    (&m + m.transpose()) * 0.5
}

pub fn random_complex(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMatrix {
    CMatrix::from_fn(r, c, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Triples with every block entry below `scale` in size.
pub fn random_factor_list(rng: &mut ChaCha8Rng, d: usize, k: usize, scale: f64) -> FactorList {
    let tol = Tolerances::default();
    let triples = (0..k)
        .map(|_| {
            let a = random_symmetric(rng, d, scale);
            let b = random_matrix(rng, d, d, scale / d as f64);
            let c = random_symmetric(rng, d, scale);
            GeneratingTriple::new(a, b, c, &tol).unwrap()
        })
        .collect();
    FactorList::new(triples).unwrap()
}

/// A small random factor list for the iteration suites: `d <= 2`, `k <= 8`.
pub fn random_small_family(rng: &mut ChaCha8Rng) -> FactorList {
    let d = rng.gen_range(1..=2);
    let k = rng.gen_range(1..=8);
    random_factor_list(rng, d, k, 0.45)
}

/// Linear Hamiltonian path with a periodic Hessian `base + amplitude cos`.
pub fn random_hamiltonian_path(rng: &mut ChaCha8Rng) -> PathSpec {
    let d = rng.gen_range(1..=2);
    let base = random_symmetric(rng, 2 * d, 1.2);
    let amplitude = random_symmetric(rng, 2 * d, 0.5);
    let harmonic = rng.gen_range(1..=2);
    PathSpec::linear_hamiltonian(CoefficientMap::Cosine { base, amplitude, harmonic }, &Tolerances::default()).unwrap()
}

/// `alpha` uniformly positive definite, `beta` and `delta` moderate, some of
/// them time dependent. In one dimension `delta` reaches below `-4 pi^2`, so
/// that indices above one occur.
pub fn random_lagrangian(rng: &mut ChaCha8Rng) -> QuadraticLagrangian {
    let d = rng.gen_range(1..=2);
    let g = random_matrix(rng, d, d, 0.5);
    let alpha_base = RMatrix::identity(d, d) + &g * g.transpose();
    let alpha = if rng.gen_bool(0.5) {
        CoefficientMap::Constant(alpha_base)
    } else {
        CoefficientMap::Cosine { base: alpha_base, amplitude: random_symmetric(rng, d, 0.3 / d as f64), harmonic: 1 }
    };
    let beta = CoefficientMap::Constant(random_matrix(rng, d, d, 1.0));
    let delta_base = if d == 1 {
        RMatrix::from_element(1, 1, rng.gen_range(-45.0..10.0))
    } else {
        random_symmetric(rng, d, 8.0)
    };
    let delta = if rng.gen_bool(0.5) {
        CoefficientMap::Constant(delta_base)
    } else {
        CoefficientMap::Cosine { base: delta_base, amplitude: random_symmetric(rng, d, 3.0), harmonic: rng.gen_range(1..=3) }
    };
    QuadraticLagrangian::new(alpha, beta, delta, &Tolerances::default()).unwrap()
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

/// Inertia of a Hermitian matrix through its real `2n x 2n` embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is that of `h` doubled; computed
/// with nalgebra's symmetric eigensolver.
pub fn oracle_inertia(h: &CMatrix, rel: f64) -> (usize, usize, usize) {
    let n = h.nrows();
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            m[(i, j)] = z.re;
            m[(i + n, j + n)] = z.re;
            m[(i, j + n)] = -z.im;
            m[(i + n, j)] = z.im;
        }
    }
    let values = SymmetricEigen::new(m).eigenvalues;
    let scale = values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let neg = values.iter().filter(|&&v| v < -rel * scale).count();
    let pos = values.iter().filter(|&&v| v > rel * scale).count();
    (neg / 2, pos / 2, n - neg / 2 - pos / 2)
}

/// Dimension of the kernel of a square complex matrix from its singular
/// values (nalgebra SVD), relative threshold `rel`.
pub fn oracle_kernel_dim(m: &CMatrix, rel: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let scale = sv.iter().fold(1.0f64, |a, &v| a.max(v));
    sv.iter().filter(|&&v| v <= rel * scale).count()
}

/// `#{n in Z : 4 pi^2 n^2 < w^2}` and `#{n : 4 pi^2 n^2 = w^2}`, read off the
/// Fourier modes `e^{2 pi i n t}` of the loop operator `-x'' - w^2 x`.
pub fn fourier_oracle(w: f64) -> (usize, usize) {
    let mut neg = 0;
    let mut zero = 0;
    let top = (w.abs() / (2.0 * PI)).ceil() as i64 + 1;
    for n in -top..=top {
        let lambda = 4.0 * PI * PI * (n * n) as f64 - w * w;
        if lambda.abs() < 1e-9 * (1.0 + w * w) {
            zero += 1;
        } else if lambda < 0.0 {
            neg += 1;
        }
    }
    (neg, zero)
}

/// Maslov indices of the rotation path `t -> R(beta t)`, read from the winding.
pub fn rotation_law(beta: f64) -> (i64, i64, usize) {
    let turns = (beta / (2.0 * PI)).floor() as i64;
    let frac = beta / (2.0 * PI) - (beta / (2.0 * PI)).round();
    if frac.abs() < 1e-12 {
        (-2 * turns - 1, (beta / PI).round() as i64 - 1, 2)
    } else {
        (-2 * turns - 1, 2 * turns + 1, 0)
    }
}
