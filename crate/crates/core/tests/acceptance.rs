//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints one PASS/FAIL line even when it succeeds.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cv_uncertainty::covariance::two_mode_squeezed_covariance;
use cv_uncertainty::functional::{
    brute_force_minimize, minimize, solve_consistency_product, BruteForceOptions, ExtremumResult,
    MinimizeOptions, SolverOptions,
};
use cv_uncertainty::inequalities::{
    build, catalog, corineq, det_rs, detect_entanglement, duan, mixed_product, triple_sep,
    CatalogParams, InequalityKind, InequalitySpec, SolveRoute, Verdict, VERDICT_TOL,
};
use cv_uncertainty::region::{convex_decompose, convexity_check, hole_witness, HyperboloidSheet};
use cv_uncertainty::sampling::{
    random_admissible_covariance, random_product_pure_covariance, random_pure_covariance,
    random_spd,
};
use cv_uncertainty::symplectic::{standard_form, symplectic_residual, williamson};
use cv_uncertainty::{CovarianceMatrix, MomentTriple, PhaseSpace, QuantumNumbers};

const HBAR: f64 = 1.0;

type Check = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Symplectic eigenvalues as moduli of the spectrum of `ΩM`, each kept once.
fn oracle_sympl_eigs(m: &DMatrix<f64>) -> Vec<f64> {
    let omega = standard_form(m.nrows() / 2);
    let mut mods: Vec<f64> = (omega * m)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .collect();
    mods.sort_by(|a, b| b.total_cmp(a));
    mods.into_iter().step_by(2).collect()
}

fn c1_corineq(extrema: &mut Vec<ExtremumResult>) -> Check {
    let vals = [0.5f64, 1.0, 2.0, 3.0, 5.0];
    let mut worst_value = 0.0f64;
    let mut worst_entry = 0.0f64;
    let mut cases = 0;
    for &a in &vals {
        for &b in &vals {
            let lim = 2.0 * (a * b).sqrt();
            for c in [0.0, 0.9 * lim, -0.9 * lim] {
                let spec = corineq(a, b, c, HBAR).map_err(|e| e.to_string())?;
                let r = minimize(&spec.functional, &MinimizeOptions::default())
                    .map_err(|e| format!("(a,b,c)=({a},{b},{c}): {e}"))?;
                let root = ((a + b) * (a + b) - c * c).sqrt();
                worst_value = worst_value.max(rel(r.value, HBAR * root));
                let var = (a + b) * HBAR / (2.0 * root);
                let cov = c * HBAR / (2.0 * root);
                #[rustfmt::skip]
                let expected = DMatrix::from_row_slice(4, 4, &[
                    var, 0.0, -cov, 0.0,
                    0.0, var, 0.0, cov,
                    -cov, 0.0, var, 0.0,
                    0.0, cov, 0.0, var,
                ]);
                worst_entry = worst_entry.max((r.covariance.matrix() - expected).amax());
                extrema.push(r);
                cases += 1;
            }
        }
    }
    ensure(worst_value <= 1e-8 && worst_entry <= 1e-8, || {
        format!("value rel err {worst_value:.2e}, entry err {worst_entry:.2e}")
    })?;
    Ok(format!(
        "{cases} cases, value rel err {worst_value:.1e}, entry err {worst_entry:.1e}"
    ))
}

fn c2_determinant(extrema: &mut Vec<ExtremumResult>) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for n in 1..=3 {
        let space = PhaseSpace::new(n, HBAR).map_err(|e| e.to_string())?;
        let spec = det_rs(space);
        let expected = (HBAR / 2.0).powi(2 * n as i32);
        let inits = [
            None,
            Some(random_admissible_covariance(&mut rng, space, 0.8, 3.0)),
        ];
        for init in inits {
            let opts = MinimizeOptions {
                solver: SolverOptions {
                    init,
                    ..SolverOptions::default()
                },
                ..MinimizeOptions::default()
            };
            let r = minimize(&spec.functional, &opts).map_err(|e| format!("N={n}: {e}"))?;
            worst = worst.max(rel(r.value, expected));
            extrema.push(r);
        }
    }
    ensure(worst <= 1e-10, || format!("rel err {worst:.2e}"))?;
    Ok(format!("N = 1..3, rel err {worst:.1e}"))
}

fn c3_triple_sep(extrema: &mut Vec<ExtremumResult>) -> Check {
    let spec = triple_sep(HBAR).map_err(|e| e.to_string())?;
    let r = solve_consistency_product(
        &spec.functional,
        &QuantumNumbers::ground(3),
        &SolverOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let expected = 3.0 * 2f64.sqrt() * HBAR;
    let err = (r.value - expected).abs();
    let value = r.value;
    extrema.push(r);
    ensure(err <= 1e-8, || {
        format!("value {value:.16} vs {expected:.16}")
    })?;
    Ok(format!("value {value:.15}, err {err:.1e}"))
}

fn c4_mixed(extrema: &mut Vec<ExtremumResult>) -> Check {
    let mut worst = 0.0f64;
    for n in [1.0, 2.0, 3.0] {
        for (a, b) in [(1.0, 1.0), (2.0, 1.0), (1.0, 4.0)] {
            let spec = mixed_product(a, b, n, HBAR).map_err(|e| e.to_string())?;
            let r = minimize(&spec.functional, &MinimizeOptions::default())
                .map_err(|e| format!("(a,b,n)=({a},{b},{n}): {e}"))?;
            let expected = 2.0 * (a * b).sqrt() * (HBAR / 2.0).powf(2.0 * n);
            worst = worst.max((r.value - expected).abs());
            extrema.push(r);
        }
    }
    ensure(worst <= 1e-8, || format!("abs err {worst:.2e}"))?;
    Ok(format!("9 cases, abs err {worst:.1e}"))
}

fn c5_oracle() -> Check {
    let mut lines = Vec::new();
    let mut specs: Vec<InequalitySpec> = (1..=3)
        .flat_map(|n| catalog(PhaseSpace::new(n, HBAR).unwrap()))
        .collect();
    specs.sort_by_key(|s| (s.arity(), s.kind.name()));
    let mut failures = Vec::new();
    for spec in &specs {
        let opts = BruteForceOptions::new(50, 7);
        let (oracle, _) = brute_force_minimize(&spec.functional, &opts);
        let scale = HBAR.powi(spec.arity() as i32 * 2).max(HBAR);
        let gap = oracle - spec.bound;
        let ok = gap <= 1e-4 * scale && gap >= -1e-9;
        lines.push(format!(
            "{}(N={}) gap {gap:+.1e}",
            spec.kind.name(),
            spec.arity()
        ));
        if !ok {
            failures.push(format!(
                "{} (N={}): oracle {oracle:.12} vs bound {:.12}",
                spec.kind.name(),
                spec.arity(),
                spec.bound
            ));
        }
        if spec.route == SolveRoute::Product {
            let sep = spec
                .separable_bound
                .expect("product-route entries carry a separable bound");
            let mut popts = opts.clone();
            popts.product_only = true;
            let (oracle, _) = brute_force_minimize(&spec.functional, &popts);
            let gap = oracle - sep;
            lines.push(format!("{}(separable) gap {gap:+.1e}", spec.kind.name()));
            if !(-1e-9..=1e-4 * HBAR).contains(&gap) {
                failures.push(format!(
                    "{} separable: oracle {oracle:.12} vs {sep:.12}",
                    spec.kind.name()
                ));
            }
        }
    }
    if failures.is_empty() {
        Ok(lines.join(", "))
    } else {
        Err(failures.join("; "))
    }
}

fn c6_williamson() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut recon, mut sympl, mut eig) = (0.0f64, 0.0f64, 0.0f64);
    for n in 1..=4 {
        for _ in 0..200 {
            let m = random_spd(&mut rng, 2 * n);
            let w = williamson(&m).map_err(|e| e.to_string())?;
            recon = recon.max((w.reconstruct() - &m).norm() / m.norm());
            sympl = sympl.max(symplectic_residual(w.sigma.matrix()).map_err(|e| e.to_string())?);
            let oracle = oracle_sympl_eigs(&m);
            for (x, y) in w.sympl_eigs.iter().zip(&oracle) {
                eig = eig.max(rel(*x, *y));
            }
        }
    }
    ensure(recon <= 1e-10 && sympl <= 1e-10 && eig <= 1e-10, || {
        format!("reconstruction {recon:.2e}, symplecticity {sympl:.2e}, eigenvalues {eig:.2e}")
    })?;
    Ok(format!("800 matrices, reconstruction {recon:.1e}, symplecticity {sympl:.1e}, eigenvalues {eig:.1e}"))
}

fn c7_convexity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut min_excess = f64::INFINITY;
    for n in 1..=3 {
        let space = PhaseSpace::new(n, HBAR).unwrap();
        for i in 0..1000 {
            let c1 = random_pure_covariance(&mut rng, space, 1.0);
            let c2 = random_pure_covariance(&mut rng, space, 1.0);
            let t: f64 = rng.random_range(0.0..=1.0);
            let r = convexity_check(&c1, &c2, t).map_err(|e| format!("N={n} #{i}: {e}"))?;
            ensure(r.det_ok, || {
                format!("N={n} #{i}: det {:.16e} < bound {:.16e}", r.det, r.bound)
            })?;
            ensure(r.admissible, || {
                format!("N={n} #{i}: mixture not admissible")
            })?;
            if t > 0.01 && t < 0.99 && c1.matrix() != c2.matrix() {
                ensure(r.det > r.bound, || {
                    format!("N={n} #{i}: det equals bound at t={t}")
                })?;
                min_excess = min_excess.min(r.det / r.bound - 1.0);
            }
        }
    }
    Ok(format!(
        "3000 pairs, smallest strict excess {min_excess:.1e}"
    ))
}

fn c8_entanglement() -> Check {
    let duan = duan(1.0, 1.0, HBAR).map_err(|e| e.to_string())?;
    for r in [0.2, 0.5, 1.0] {
        let c = two_mode_squeezed_covariance(r, HBAR).map_err(|e| e.to_string())?;
        let lhs = duan.functional.evaluate(&c);
        let expected = 2.0 * HBAR * (-2.0 * r).exp();
        ensure(rel(lhs, expected) <= 1e-12, || {
            format!("r={r}: lhs {lhs} vs {expected}")
        })?;
        let v = detect_entanglement(&c, &duan, VERDICT_TOL).map_err(|e| e.to_string())?;
        ensure(v == Verdict::Entangled, || format!("r={r}: verdict {v:?}"))?;
    }

    let mut criteria: Vec<InequalitySpec> = Vec::new();
    for (a, b, c) in [
        (1.0, 1.0, 1.0),
        (2.0, 1.0, 1.0),
        (0.5, 3.0, -2.0),
        (1.0, 4.0, 3.9),
    ] {
        criteria.push(corineq(a, b, c, HBAR).unwrap());
        let p = CatalogParams {
            a: Some(a),
            b: Some(b),
            c: Some(c),
            ..CatalogParams::default()
        };
        criteria.push(build(InequalityKind::FourEpr, HBAR, p).unwrap());
        criteria.push(build(InequalityKind::Duan, HBAR, p).unwrap());
    }
    criteria.push(triple_sep(HBAR).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut evaluations = 0;
    for i in 0..1000 {
        for n in [2, 3] {
            let space = PhaseSpace::new(n, HBAR).unwrap();
            let c = random_product_pure_covariance(&mut rng, space, 1.5);
            for spec in criteria.iter().filter(|s| s.arity() == n) {
                let v = detect_entanglement(&c, spec, VERDICT_TOL).map_err(|e| e.to_string())?;
                ensure(v == Verdict::Inconclusive, || {
                    format!("product state #{i} flagged by {}", spec.label)
                })?;
                evaluations += 1;
            }
        }
    }
    Ok(format!(
        "squeezed fixtures entangled, {evaluations} product-state verdicts inconclusive"
    ))
}

fn c9_region() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let e0 = HBAR / 2.0;
    let sheet = HyperboloidSheet::new(0, HBAR);
    let (mut recon, mut on_sheet) = (0.0f64, 0.0f64);
    for i in 0..500 {
        let level = e0 * rng.random_range(1.001..8.0);
        let rho: f64 = rng.random_range(0.0..2.0);
        let theta: f64 = rng.random_range(0.0..TAU);
        let target = MomentTriple::new(
            level * rho.cosh(),
            level * rho.sinh() * theta.cos(),
            level * rho.sinh() * theta.sin(),
        );
        let seed: f64 = rng.random_range(-PI..PI);
        let d = convex_decompose(&target, seed, HBAR).map_err(|e| format!("#{i}: {e}"))?;
        ensure((0.0..=1.0).contains(&d.t0), || {
            format!("#{i}: t0 = {}", d.t0)
        })?;
        let mix = d.mixture();
        for (x, y) in mix.as_array().iter().zip(target.as_array()) {
            recon = recon.max((x - y).abs());
        }
        on_sheet = on_sheet
            .max(sheet.residual(&d.phi))
            .max(sheet.residual(&d.psi));
    }
    ensure(recon <= 1e-10, || {
        format!("decomposition error {recon:.2e}")
    })?;

    let mut witness = 0.0f64;
    for i in 0..500 {
        let n = 1 + i % 3;
        let space = PhaseSpace::new(n, HBAR).unwrap();
        let target: CovarianceMatrix = random_admissible_covariance(&mut rng, space, 1.0, 4.0);
        let w = hole_witness(&target).map_err(|e| format!("#{i}: {e}"))?;
        ensure(
            w.m >= 2 && w.t.iter().all(|t| (0.0..=1.0).contains(t)),
            || format!("#{i}: M={} t={:?}", w.m, w.t),
        )?;
        witness = witness.max((w.reconstruct() - target.matrix()).norm() / target.matrix().norm());
    }
    ensure(witness <= 1e-10, || {
        format!("witness reconstruction {witness:.2e}")
    })?;
    Ok(format!(
        "decomposition err {recon:.1e} (sheet residual {on_sheet:.1e}), witness err {witness:.1e}"
    ))
}

fn c10_trace_identity(extrema: &[ExtremumResult]) -> Check {
    let worst = extrema
        .iter()
        .map(|r| r.trace_identity_gap())
        .fold(0.0, f64::max);
    ensure(!extrema.is_empty(), || {
        "no extremum results collected".into()
    })?;
    ensure(worst <= 1e-8, || format!("trace identity gap {worst:.2e}"))?;
    Ok(format!("{} results, worst gap {worst:.1e}", extrema.len()))
}

fn report(id: usize, name: &str, limit: Duration, check: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; over time limit")),
        Err(d) => (false, d),
    };
    println!(
        "criterion {id:>2} {name:<22} {} [{:.2}s / {}s] {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn main() {
    let secs = Duration::from_secs;
    let mut extrema = Vec::new();
    let mut ok = true;
    ok &= report(1, "corineq-bound", secs(5), || c1_corineq(&mut extrema));
    ok &= report(2, "determinant-bound", secs(2), || {
        c2_determinant(&mut extrema)
    });
    ok &= report(3, "triple-separable", secs(1), || {
        c3_triple_sep(&mut extrema)
    });
    ok &= report(4, "mixed-family", secs(2), || c4_mixed(&mut extrema));
    ok &= report(5, "oracle-consistency", secs(60), c5_oracle);
    ok &= report(6, "williamson", secs(10), c6_williamson);
    ok &= report(7, "convexity", secs(10), c7_convexity);
    ok &= report(8, "entanglement", secs(10), c8_entanglement);
    ok &= report(9, "region-geometry", secs(10), c9_region);
    ok &= report(10, "trace-identity", secs(1), || {
        c10_trace_identity(&extrema)
    });
    if !ok {
        std::process::exit(1);
    }
}
