//! Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails or runs over its time budget.

mod common;

use std::f64::consts::{PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use common::*;
use sympindex::family::{discretize, discretize_at, DiscretizeOptions, FactorList, PathSpec};
use sympindex::lagrangian::{morse_equals_maslov_report, QuadraticLagrangian};
use sympindex::linalg::{
    power_eigenspace_check, restricted_inertia_report, CMatrix, HermitianMatrix, Subspace,
};
use sympindex::maslov::{
    bott_formula_report, index_profile, iteration_inequality_report, maslov, maslov_of_path, splitting_numbers,
    theta_maslov,
};
use sympindex::symplectic::{circle_spectrum, make_j, make_rotation, make_shear, triple_to_matrix, SymplecticMatrix};
use sympindex::Tolerances;

type Outcome = Result<String, String>;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn shear_splitting() -> Outcome {
    for r in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        let s = splitting_numbers(&make_shear(r), Complex64::new(1.0, 0.0), &tol()).map_err(|e| e.to_string())?;
        let plus = usize::from(r <= 0.0);
        let co = usize::from(r >= 0.0);
        check(s.as_tuple() == (plus, plus, co, co), || format!("r = {r}: got {:?}", s.as_tuple()))?;
    }
    Ok("5 shears match the table".into())
}

fn j_splitting() -> Outcome {
    for d in 1..=3 {
        let j = make_j(d);
        let at_i = splitting_numbers(&j, Complex64::new(0.0, 1.0), &tol()).map_err(|e| e.to_string())?;
        let at_mi = splitting_numbers(&j, Complex64::new(0.0, -1.0), &tol()).map_err(|e| e.to_string())?;
        // (S+, S-, coS+, coS-)
        check(at_i.as_tuple() == (d, 0, 0, d), || format!("d = {d}, theta = i: {:?}", at_i.as_tuple()))?;
        check(at_mi.as_tuple() == (0, d, d, 0), || format!("d = {d}, theta = -i: {:?}", at_mi.as_tuple()))?;
    }
    Ok("d = 1, 2, 3".into())
}

fn rotation_law_criterion() -> Outcome {
    let mut ks = Vec::new();
    for beta in [0.5, 1.0, PI / 2.0, PI, 2.0 * PI, 5.0 * PI, 4.0 * PI] {
        let r = maslov_of_path(&PathSpec::NamedRotation { beta }, &DiscretizeOptions::default(), false, &tol())
            .map_err(|e| format!("beta = {beta}: {e}"))?;
        let expected = rotation_law(beta);
        check(r.indices.triple() == expected, || {
            format!("beta = {beta}: got {:?}, expected {expected:?}", r.indices.triple())
        })?;
        ks.push(r.factors.k());
    }
    Ok(format!("7 angles, k used {ks:?}"))
}

fn rotation_profile() -> Outcome {
    let mut evaluated = 0;
    for alpha in [0.3, 1.0] {
        let f = FactorList::from_factors(&[make_rotation(alpha)], &tol()).map_err(|e| e.to_string())?;
        let mut angles: Vec<f64> = (0..720).map(|i| -PI + TAU * i as f64 / 720.0).collect();
        angles.extend([alpha, -alpha, 0.0, PI]);
        for a in angles {
            let m = theta_maslov(&f, Complex64::from_polar(1.0, a), &tol()).map_err(|e| e.to_string())?;
            let on_closed = a.abs() <= alpha;
            let on_open = a.abs() < alpha;
            let expected_mas = if on_closed { -1 } else { 0 };
            let expected_comas = if on_open { 1 } else { 0 };
            check(m.mas == expected_mas && m.comas == expected_comas, || {
                format!("alpha = {alpha}, arg = {a}: (mas, comas) = ({}, {})", m.mas, m.comas)
            })?;
            evaluated += 1;
        }
        let prof = index_profile(&f, &tol()).map_err(|e| e.to_string())?;
        for a in [0.0, alpha, -alpha, 0.5 * (alpha + PI), PI] {
            let (mas, comas, _) = prof.at_angle(a, &tol());
            let direct = theta_maslov(&f, Complex64::from_polar(1.0, a), &tol()).map_err(|e| e.to_string())?;
            check((mas, comas) == (direct.mas, direct.comas), || format!("profile disagrees at {a}"))?;
        }
    }
    Ok(format!("{evaluated} points on the circle"))
}

/// The random suite shared by the Bott and iteration criteria.
fn iteration_suite() -> Vec<FactorList> {
    let mut r = rng(5);
    (0..50).map(|_| random_small_family(&mut r)).collect()
}

fn bott_formulae() -> Outcome {
    let mut r = rng(55);
    let mut rows = 0;
    let mut nontrivial = 0;
    for (i, f) in iteration_suite().iter().enumerate() {
        let p_mono = f.monodromy(&tol()).map_err(|e| e.to_string())?;
        let circle = circle_spectrum(&p_mono, &tol()).map_err(|e| e.to_string())?;
        for p in 1..=6 {
            let mut thetas = vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), random_unit(&mut r)];
            thetas.extend(circle.iter().map(|e| e.theta.powu(p as u32)));
            let rep = bott_formula_report(f, p, &thetas, &tol()).map_err(|e| format!("family {i}, p = {p}: {e}"))?;
            for row in &rep.rows {
                check(row.pass(), || format!("family {i}, p = {p}, theta = {}: {} vs {}", row.theta, row.lhs, row.rhs))?;
                rows += 1;
                nontrivial += usize::from(row.lhs.nullity > 0);
            }
        }
    }
    Ok(format!("{rows} (family, p, theta) rows, {nontrivial} with positive nullity"))
}

fn iteration_inequalities() -> Outcome {
    let mut cases: Vec<(String, FactorList, Vec<usize>)> = iteration_suite()
        .into_iter()
        .enumerate()
        .map(|(i, f)| (format!("family {i}"), f, (1..=6).collect()))
        .collect();
    let constant = PathSpec::sampled(vec![0.0, 1.0], vec![SymplecticMatrix::identity(1); 2], &tol()).map_err(|e| e.to_string())?;
    let constant = discretize(&constant, &DiscretizeOptions::default(), &tol()).map_err(|e| e.to_string())?;
    let quarter = discretize(&PathSpec::NamedRotation { beta: PI / 2.0 }, &DiscretizeOptions::default(), &tol())
        .map_err(|e| e.to_string())?;
    cases.push(("constant path".into(), constant, vec![3]));
    cases.push(("quarter turn".into(), quarter, vec![4]));
    let mut equalities = 0;
    let mut count = 0;
    for (name, f, ps) in &cases {
        for &p in ps {
            let rep = iteration_inequality_report(f, p, &tol()).map_err(|e| format!("{name}, p = {p}: {e}"))?;
            check(rep.pass(), || format!("{name}, p = {p}: {rep:?}"))?;
            count += 1;
            equalities += usize::from(rep.lower_equal() || rep.upper_equal());
        }
    }
    let last = &cases[cases.len() - 2..];
    for (name, f, ps) in last {
        let rep = iteration_inequality_report(f, ps[0], &tol()).map_err(|e| e.to_string())?;
        check(rep.lower_equal() && rep.upper_equal() && rep.identity, || format!("{name}: expected both equalities"))?;
    }
    Ok(format!("{count} reports, {equalities} with an equality"))
}

fn sampled_path_from(f: &FactorList) -> Result<PathSpec, String> {
    let k = f.k();
    let mut samples = vec![SymplecticMatrix::identity(f.d())];
    for t in f.triples() {
        let step = triple_to_matrix(t, &tol()).map_err(|e| e.to_string())?;
        let last = samples.last().unwrap().clone();
        samples.push(step.compose(&last));
    }
    let times = (0..=k).map(|j| j as f64 / k as f64).collect();
    PathSpec::sampled(times, samples, &tol()).map_err(|e| e.to_string())
}

fn k_independence() -> Outcome {
    let mut r = rng(7);
    let mut paths = Vec::new();
    for _ in 0..50 {
        let (d, k) = (r.gen_range(1..=2), r.gen_range(1..=8));
        let f = random_factor_list(&mut r, d, k, 0.25);
        paths.push(sampled_path_from(&f)?);
    }
    for _ in 0..50 {
        paths.push(random_hamiltonian_path(&mut r));
    }
    let mut shifts = 0;
    for (i, path) in paths.iter().enumerate() {
        let coarse = discretize(path, &DiscretizeOptions::default(), &tol()).map_err(|e| format!("path {i}: {e}"))?;
        let fine = discretize_at(path, 2 * coarse.k(), &tol()).map_err(|e| format!("path {i}: {e}"))?;
        let a = maslov(&coarse, &tol()).map_err(|e| e.to_string())?;
        let b = maslov(&fine, &tol()).map_err(|e| e.to_string())?;
        check(a.triple() == b.triple(), || {
            format!("path {i}: {:?} at k = {} but {:?} at k = {}", a.triple(), coarse.k(), b.triple(), fine.k())
        })?;
        let theta = random_unit(&mut r);
        let ta = theta_maslov(&coarse, theta, &tol()).map_err(|e| e.to_string())?;
        let tb = theta_maslov(&fine, theta, &tol()).map_err(|e| e.to_string())?;
        check(ta.triple() == tb.triple(), || format!("path {i}: theta-indices differ at {theta}"))?;

        let m = r.gen_range(1..=3);
        let d = coarse.d();
        let s = maslov(&coarse.stabilize(m), &tol()).map_err(|e| e.to_string())?;
        let (base, stab) = (a.inertia, s.inertia);
        check(
            stab.index == base.index + d * m && stab.coindex == base.coindex + d * m && stab.nullity == base.nullity,
            || format!("path {i}: stabilizing by {m} gave {stab} from {base}"),
        )?;
        shifts += 1;
    }
    Ok(format!("100 paths agree at k and 2k, {shifts} stabilizations shift by d m"))
}

fn morse_maslov_suite() -> Vec<(String, QuadraticLagrangian, Option<(usize, usize)>)> {
    let mut suite = vec![
        ("free particle d=1".to_string(), QuadraticLagrangian::free_particle(1), None),
        ("free particle d=2".to_string(), QuadraticLagrangian::free_particle(2), None),
    ];
    for w in [1.0, 2.0 * PI, 7.0] {
        suite.push((format!("oscillator w={w:.4}"), QuadraticLagrangian::harmonic_oscillator(w), Some(fourier_oracle(w))));
    }
    let mut r = rng(8);
    for i in 0..25 {
        suite.push((format!("random Lagrangian {i}"), random_lagrangian(&mut r), None));
    }
    suite
}

/// Criteria 8 and 9 share one pass over the Lagrangian suite.
fn morse_equals_maslov(concavity: &mut Outcome) -> Outcome {
    let mut triples = 0;
    let mut worst_c = f64::NEG_INFINITY;
    let mut concave = true;
    let mut first_bad = String::new();
    let mut summary = Vec::new();
    let suite = morse_maslov_suite();
    let mut failure: Option<String> = None;
    for (name, l, oracle) in &suite {
        let rep = match morse_equals_maslov_report(l, None, &DiscretizeOptions::default(), &tol()) {
            Ok(rep) => rep,
            Err(e) => {
                failure.get_or_insert(format!("{name}: {e}"));
                continue;
            }
        };
        triples += 2 * rep.k;
        worst_c = worst_c.max(rep.max_c_eigenvalue).max(rep.max_action_c_eigenvalue);
        if !rep.concave() && concave {
            concave = false;
            first_bad = name.clone();
        }
        let ind = rep.morse.outcome.inertia.index;
        let verdict = check(rep.index_matches(), || format!("{name}: ind(h_L) = {ind}, mas = {}", rep.maslov.mas))
            .and_then(|_| {
                check(rep.nullities_match(), || {
                    format!(
                        "{name}: nullities {} / {} against dim ker = {}",
                        rep.morse.outcome.inertia.nullity, rep.maslov.nul, rep.kernel_dim
                    )
                })
            })
            .and_then(|_| {
                check(rep.action_deviation <= 1e-6, || format!("{name}: action triples off by {}", rep.action_deviation))
            })
            .and_then(|_| match oracle {
                Some((neg, zero)) => check(ind == *neg && rep.kernel_dim == *zero, || {
                    format!("{name}: (ind, nul) = ({ind}, {}) but the Fourier count is ({neg}, {zero})", rep.kernel_dim)
                }),
                None => Ok(()),
            });
        if let Err(msg) = verdict {
            failure.get_or_insert(msg);
        } else if oracle.is_some() {
            summary.push(format!("{name}: ind {ind} nul {}", rep.kernel_dim));
        }
    }
    *concavity = if concave {
        Ok(format!("{triples} triples, largest eigenvalue of any C_j {worst_c:.3e}"))
    } else {
        Err(format!("{first_bad}: some C_j is not negative definite"))
    };
    match failure {
        Some(msg) => Err(msg),
        None => Ok(format!("{} Lagrangians; {}", suite.len(), summary.join(", "))),
    }
}

/// Hermitian form with prescribed zero eigenvalues, and a subspace mixing
/// random vectors, kernel vectors and isotropic vectors.
fn restricted_instance(r: &mut rand_chacha::ChaCha8Rng) -> (HermitianMatrix, Subspace) {
    let n = r.gen_range(2..=8);
    let q = random_complex(r, n, n).qr().q();
    let values: Vec<f64> = (0..n)
        .map(|_| match r.gen_range(0..4) {
            0 => 0.0,
            1 => r.gen_range(-2.0..-0.1),
            _ => r.gen_range(0.1..2.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 },
        })
        .collect();
    let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, values.iter().map(|&v| Complex64::new(v, 0.0))));
    let h = HermitianMatrix::new(&q * diag * q.adjoint(), &tol()).unwrap();
    let mut cols: Vec<nalgebra::DVector<Complex64>> = Vec::new();
    let dim = r.gen_range(0..=n);
    for _ in 0..dim {
        let kind = r.gen_range(0..4);
        let v = match kind {
            0 => values.iter().position(|&x| x == 0.0).map(|i| q.column(i).into_owned()),
            1 => {
                let pos = values.iter().position(|&x| x > 0.0);
                let neg = values.iter().position(|&x| x < 0.0);
                match (pos, neg) {
                    (Some(i), Some(j)) => {
                        Some(q.column(i) * Complex64::new(values[i].abs().sqrt().recip(), 0.0)
                            + q.column(j) * Complex64::new(values[j].abs().sqrt().recip(), 0.0))
                    }
                    _ => None,
                }
            }
            _ => None,
        };
        cols.push(v.unwrap_or_else(|| random_complex(r, n, 1).column(0).into_owned()));
    }
    let v = if cols.is_empty() {
        Subspace::zero(n)
    } else {
        Subspace::span(&CMatrix::from_columns(&cols), &tol()).unwrap()
    };
    (h, v)
}

/// `S D S^{-1}` with some diagonal entries among the `n`-th roots of `theta`
/// and an occasional Jordan block.
fn power_instance(r: &mut rand_chacha::ChaCha8Rng) -> (CMatrix, Complex64, usize) {
    let size = 6;
    let n = r.gen_range(1..=4);
    let theta = random_unit(r);
    let roots: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, (theta.arg() + TAU * j as f64) / n as f64))
        .collect();
    let mut core = CMatrix::zeros(size, size);
    for i in 0..size {
        core[(i, i)] = if r.gen_bool(0.6) {
            roots[r.gen_range(0..n)]
        } else {
            Complex64::from_polar(r.gen_range(0.5..1.5), r.gen_range(0.0..TAU))
        };
    }
    if r.gen_bool(0.3) {
        core[(1, 1)] = core[(0, 0)];
        core[(0, 1)] = Complex64::new(1.0, 0.0);
    }
    let s = random_complex(r, size, size) + CMatrix::identity(size, size) * Complex64::new(2.0, 0.0);
    let s_inv = s.clone().try_inverse().unwrap();
    (&s * core * s_inv, theta, n)
}

fn appendix_laws() -> Outcome {
    let mut r = rng(10);
    let mut shifted = 0;
    for i in 0..200 {
        let (h, v) = restricted_instance(&mut r);
        let rep = restricted_inertia_report(&h, &v, &tol()).map_err(|e| format!("instance {i}: {e}"))?;
        check(rep.pass(), || format!("restricted instance {i}: {rep:?}"))?;
        shifted += usize::from(rep.dim_v_cap_vh > 0 || rep.dim_v_cap_ker > 0);
    }
    let mut positive = 0;
    for i in 0..200 {
        let (m, theta, n) = power_instance(&mut r);
        let rep = power_eigenspace_check(&m, theta, n, &tol()).map_err(|e| format!("instance {i}: {e}"))?;
        check(rep.pass(), || format!("power instance {i}: {} vs {}", rep.lhs, rep.rhs))?;
        positive += usize::from(rep.lhs > 0);
    }
    Ok(format!(
        "200 restricted-inertia instances ({shifted} with degenerate intersections), 200 power instances ({positive} with nonzero kernels)"
    ))
}

fn run(outcome: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(outcome)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    (result, start.elapsed())
}

fn report(id: usize, name: &str, limit: Option<Duration>, outcome: Outcome, elapsed: Duration) -> bool {
    let over = limit.is_some_and(|l| elapsed > l);
    let ok = outcome.is_ok() && !over;
    let budget = limit.map(|l| format!(" / {:.0} s", l.as_secs_f64())).unwrap_or_default();
    let detail = match (&outcome, over) {
        (Ok(msg), false) => msg.clone(),
        (Ok(msg), true) => format!("over time budget; {msg}"),
        (Err(msg), _) => msg.clone(),
    };
    println!(
        "criterion {id:>2} {:<4} {name} ({:.2} s{budget}): {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    ok
}

fn main() {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let mut all = true;
    let (o, t) = run(shear_splitting);
    all &= report(1, "shear splitting numbers", secs(1), o, t);
    let (o, t) = run(j_splitting);
    all &= report(2, "complex structure splitting numbers", secs(1), o, t);
    let (o, t) = run(rotation_law_criterion);
    all &= report(3, "rotation Maslov law", secs(5), o, t);
    let (o, t) = run(rotation_profile);
    all &= report(4, "single rotation theta-profile", secs(2), o, t);
    let (o, t) = run(bott_formulae);
    all &= report(5, "Bott formulae", secs(60), o, t);
    let (o, t) = run(iteration_inequalities);
    all &= report(6, "iteration inequalities", secs(60), o, t);
    let (o, t) = run(k_independence);
    all &= report(7, "k-independence and stabilization", secs(120), o, t);
    let mut concavity: Outcome = Err("not run".into());
    let (o, t) = run(|| morse_equals_maslov(&mut concavity));
    all &= report(8, "Morse index equals Maslov index", secs(120), o, t);
    all &= report(9, "Tonelli concavity of C_j", None, concavity, t);
    let (o, t) = run(appendix_laws);
    all &= report(10, "restricted inertia and power eigenspaces", secs(30), o, t);
    if !all {
        std::process::exit(1);
    }
}
