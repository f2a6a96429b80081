//! `sympindex selftest`: the worked examples with known integer answers,
//! then seeded randomized checks of the structural laws.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use sympindex::family::{discretize, DiscretizeOptions, FactorList, PathSpec};
use sympindex::lagrangian::{morse_equals_maslov_report, QuadraticLagrangian};
use sympindex::linalg::RMatrix;
use sympindex::maslov::{
    average_maslov, bott_formula_report, index_profile, iteration_inequality_report, maslov, maslov_of_path,
    splitting_numbers, theta_maslov,
};
use sympindex::symplectic::{make_j, make_rotation, make_shear, GeneratingTriple, SymplecticMatrix};
use sympindex::{Error, Tolerances};

use crate::document::{ToleranceEcho, SCHEMA_VERSION};
use crate::output::to_value;

type Check = Result<String, String>;

fn err(e: Error) -> String {
    e.to_string()
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn shear_table(tol: &Tolerances) -> Check {
    for r in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        let s = splitting_numbers(&make_shear(r), Complex64::new(1.0, 0.0), tol).map_err(err)?;
        let plus = usize::from(r <= 0.0);
        let co = usize::from(r >= 0.0);
        expect(&format!("shear({r})"), s.as_tuple(), (plus, plus, co, co))?;
    }
    Ok("r = -2..2".into())
}

fn j_splitting(tol: &Tolerances) -> Check {
    for d in 1..=3 {
        let i = Complex64::new(0.0, 1.0);
        expect(&format!("J, d = {d}, at i"), splitting_numbers(&make_j(d), i, tol).map_err(err)?.as_tuple(), (d, 0, 0, d))?;
        expect(&format!("J, d = {d}, at -i"), splitting_numbers(&make_j(d), -i, tol).map_err(err)?.as_tuple(), (0, d, d, 0))?;
    }
    Ok("d = 1, 2, 3".into())
}

fn rotation_law(tol: &Tolerances) -> Check {
    for beta in [0.5, 1.0, PI / 2.0, PI, 2.0 * PI, 5.0 * PI, 4.0 * PI] {
        let turns = (beta / (2.0 * PI)).floor() as i64;
        let lattice = (beta / (2.0 * PI)).fract() == 0.0;
        let want = if lattice {
            (-2 * turns - 1, (beta / PI).round() as i64 - 1, 2)
        } else {
            (-2 * turns - 1, 2 * turns + 1, 0)
        };
        let r = maslov_of_path(&PathSpec::NamedRotation { beta }, &DiscretizeOptions::default(), true, tol).map_err(err)?;
        expect(&format!("rotation by {beta}"), r.indices.triple(), want)?;
    }
    Ok("7 angles, k and 2k".into())
}

fn rotation_factor_profile(tol: &Tolerances) -> Check {
    for alpha in [0.3, 1.0] {
        let f = FactorList::from_factors(&[make_rotation(alpha)], tol).map_err(err)?;
        for i in 0..64 {
            let a = 2.0 * PI * i as f64 / 64.0;
            let m = theta_maslov(&f, Complex64::from_polar(1.0, a), tol).map_err(err)?;
            let dist = a.min(2.0 * PI - a);
            let want = if dist < alpha { (-1, 1, 0) } else { (0, 0, 0) };
            expect(&format!("alpha = {alpha}, angle {a:.4}"), m.triple(), want)?;
        }
        for a in [alpha, -alpha] {
            let m = theta_maslov(&f, Complex64::from_polar(1.0, a), tol).map_err(err)?;
            expect(&format!("alpha = {alpha} at its eigenvalue"), (m.mas, m.comas), (-1, 0))?;
        }
    }
    Ok("alpha = 0.3, 1.0".into())
}

fn fourier_count(w: f64) -> (usize, usize) {
    let top = (w.abs() / (2.0 * PI)).ceil() as i64 + 1;
    let mut out = (0, 0);
    for n in -top..=top {
        let lambda = 4.0 * PI * PI * (n * n) as f64 - w * w;
        if lambda.abs() < 1e-9 * (1.0 + w * w) {
            out.1 += 1;
        } else if lambda < 0.0 {
            out.0 += 1;
        }
    }
    out
}

fn morse_maslov(tol: &Tolerances) -> Check {
    let opts = DiscretizeOptions::default();
    let free = morse_equals_maslov_report(&QuadraticLagrangian::free_particle(1), None, &opts, tol).map_err(err)?;
    if !free.pass() {
        return Err(format!("free particle: {free:?}"));
    }
    for w in [1.0, 2.0 * PI, 7.0] {
        let r = morse_equals_maslov_report(&QuadraticLagrangian::harmonic_oscillator(w), Some(32), &opts, tol)
            .map_err(err)?;
        if !r.pass() {
            return Err(format!("oscillator {w}: {r:?}"));
        }
        expect(&format!("oscillator {w}"), (r.morse.outcome.inertia.index, r.kernel_dim), fourier_count(w))?;
    }
    Ok("free particle, oscillators 1, 2 pi, 7".into())
}

fn iteration_equalities(tol: &Tolerances) -> Check {
    let constant = FactorList::identity(1, 4);
    let quarter = discretize(&PathSpec::NamedRotation { beta: PI / 2.0 }, &DiscretizeOptions::default(), tol).map_err(err)?;
    for (name, f, p) in [("constant path", constant, 3), ("quarter turn", quarter, 4)] {
        let r = iteration_inequality_report(&f, p, tol).map_err(err)?;
        if !(r.pass() && r.lower_equal() && r.upper_equal() && r.identity) {
            return Err(format!("{name}, p = {p}: {r:?}"));
        }
    }
    Ok("constant p = 3, quarter turn p = 4".into())
}

fn random_family(rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<FactorList, String> {
    let d = rng.gen_range(1..=2);
    let k = rng.gen_range(1..=6);
    let mut m = |scale: f64| RMatrix::from_fn(d, d, |_, _| rng.gen_range(-scale..scale));
    let triples = (0..k)
        .map(|_| {
            let (a, b, c) = (m(0.4), m(0.4 / d as f64), m(0.4));
            GeneratingTriple::new((&a + a.transpose()) * 0.5, b, (&c + c.transpose()) * 0.5, tol).map_err(err)
        })
        .collect::<Result<Vec<_>, _>>()?;
    FactorList::new(triples).map_err(err)
}

fn random_laws(tol: &Tolerances) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..12 {
        let f = random_family(&mut rng, tol)?;
        let p = rng.gen_range(1..=4);
        let theta = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
        let thetas = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), theta];
        let bott = bott_formula_report(&f, p, &thetas, tol).map_err(err)?;
        if !bott.pass() {
            return Err(format!("family {i}: Bott formula fails at p = {p}: {:?}", bott.rows));
        }
        let ineq = iteration_inequality_report(&f, p, tol).map_err(err)?;
        if !ineq.pass() {
            return Err(format!("family {i}: iteration inequalities fail: {ineq:?}"));
        }
        let avg = average_maslov(&index_profile(&f, tol).map_err(err)?);
        let avg_p = average_maslov(&index_profile(&f.iterate(p).map_err(err)?, tol).map_err(err)?);
        if (avg_p - p as f64 * avg).abs() > 1e-9 {
            return Err(format!("family {i}: average {avg_p} at p = {p}, base {avg}"));
        }
        let m = rng.gen_range(1..=3);
        let (base, stab) = (maslov(&f, tol).map_err(err)?, maslov(&f.stabilize(m), tol).map_err(err)?);
        let shift = (f.d() * m) as i64;
        let want = (base.inertia.index as i64 + shift, base.inertia.coindex as i64 + shift);
        expect(&format!("family {i}: stabilization by {m}"), (stab.inertia.index as i64, stab.inertia.coindex as i64), want)?;
    }
    Ok("12 seeded families".into())
}

fn random_paths(tol: &Tolerances) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..6 {
        let d = rng.gen_range(1..=2);
        let n = 2 * d;
        let g = RMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let hessian = sympindex::coefficients::CoefficientMap::Constant((&g + g.transpose()) * 0.6);
        let path = PathSpec::linear_hamiltonian(hessian, tol).map_err(err)?;
        maslov_of_path(&path, &DiscretizeOptions::default(), true, tol).map_err(|e| format!("path {i}: {e}"))?;
    }
    let samples = vec![SymplecticMatrix::identity(1), make_rotation(0.4), make_rotation(0.9)];
    let sampled = PathSpec::sampled(vec![0.0, 0.5, 1.0], samples, tol).map_err(err)?;
    let r = maslov_of_path(&sampled, &DiscretizeOptions::default(), true, tol).map_err(err)?;
    expect("sampled rotation to 0.9", r.indices.triple(), (-1, 1, 0))?;
    Ok("7 paths agree at k and 2k".into())
}

/// Runs every check; the report and whether all passed.
pub fn cmd_selftest() -> (Value, bool) {
    let tol = Tolerances::default();
    let checks: [(&str, fn(&Tolerances) -> Check); 8] = [
        ("shear splitting numbers", shear_table),
        ("complex structure splitting numbers", j_splitting),
        ("rotation Maslov law", rotation_law),
        ("single rotation theta-profile", rotation_factor_profile),
        ("Morse index equals Maslov index", morse_maslov),
        ("iteration equalities", iteration_equalities),
        ("random Bott, iteration and stabilization laws", random_laws),
        ("random paths at k and 2k", random_paths),
    ];
    let mut all = true;
    let mut rows = Vec::new();
    for (name, check) in checks {
        let outcome = std::panic::catch_unwind(|| check(&tol)).unwrap_or_else(|_| Err("panicked".into()));
        all &= outcome.is_ok();
        let (pass, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        rows.push(json!({"name": name, "pass": pass, "detail": detail}));
    }
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "selftest",
        "pass": all,
        "checks": rows,
        "tolerances": to_value(&ToleranceEcho::from(&tol)),
    });
    (report, all)
}
