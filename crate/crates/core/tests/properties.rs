use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cv_uncertainty::covariance::{squeezed_number_triple, triple_from_covariance};
use cv_uncertainty::functional::{gradient_check, MinimizeOptions};
use cv_uncertainty::inequalities::{catalog, SolveRoute};
use cv_uncertainty::region::{
    boundary_coordinates, classify, convex_decompose, region_contains, HyperboloidSheet, Location,
};
use cv_uncertainty::sampling::{
    random_admissible_covariance, random_pure_covariance, random_spd, random_symplectic,
};
use cv_uncertainty::symplectic::{
    apply_congruence, standard_form, symplectic_eigenvalues, williamson,
};
use cv_uncertainty::{CovarianceMatrix, Error, MomentTriple, PhaseSpace};

fn oracle(m: &DMatrix<f64>) -> Vec<f64> {
    let omega = standard_form(m.nrows() / 2);
    let mut mods: Vec<f64> = (omega * m)
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .collect();
    mods.sort_by(|a, b| b.total_cmp(a));
    mods.into_iter().step_by(2).collect()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn williamson_round_trip(seed in any::<u64>(), n in 1usize..=4) {
        let m = random_spd(&mut rng(seed), 2 * n);
        let w = williamson(&m).unwrap();
        prop_assert!((w.reconstruct() - &m).norm() <= 1e-10 * m.norm());
        let eigs = &w.sympl_eigs;
        prop_assert!(eigs.windows(2).all(|p| p[0] >= p[1]));
        for (x, y) in eigs.iter().zip(oracle(&m)) {
            prop_assert!((x - y).abs() <= 1e-10 * y);
        }
        let prod: f64 = eigs.iter().map(|l| l * l).product();
        prop_assert!((prod - m.determinant()).abs() <= 1e-9 * m.determinant());
        let inv = w.sigma.inverse();
        prop_assert!((inv.matrix() * w.sigma.matrix() - DMatrix::<f64>::identity(2 * n, 2 * n)).amax() <= 1e-9);
    }

    #[test]
    fn congruence_preserves_spectrum(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let m = random_spd(&mut r, 2 * n);
        let s = random_symplectic(&mut r, n, 0.8);
        let moved = apply_congruence(&s, &m).unwrap();
        prop_assert!((&moved - moved.transpose()).amax() <= 1e-12 * moved.amax());
        let before = symplectic_eigenvalues(&m).unwrap();
        let after = symplectic_eigenvalues(&moved).unwrap();
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() <= 1e-8 * x);
        }
    }

    #[test]
    fn catalog_bounds_hold_on_admissible_states(seed in any::<u64>(), n in 1usize..=3, hbar in 0.2f64..3.0) {
        let space = PhaseSpace::new(n, hbar).unwrap();
        let c = random_admissible_covariance(&mut rng(seed), space, 1.0, 3.0);
        for spec in catalog(space) {
            let e = spec.evaluate(&c, 1e-9 * spec.bound.abs().max(hbar)).unwrap();
            prop_assert!(e.satisfied, "{} violated: lhs {} bound {}", spec.label, e.lhs, e.bound);
        }
    }

    #[test]
    fn catalog_gradients_match_finite_differences(seed in any::<u64>(), n in 1usize..=3) {
        let space = PhaseSpace::new(n, 1.0).unwrap();
        let c = random_admissible_covariance(&mut rng(seed), space, 0.6, 2.0);
        for spec in catalog(space) {
            let err = gradient_check(&spec.functional, &c);
            prop_assert!(err <= 1e-5, "{}: gradient error {err:.2e}", spec.label);
        }
    }

    #[test]
    fn boundary_triples_are_pure_states(rho in 0.0f64..3.0, theta in -3.1f64..3.1, hbar in 0.1f64..5.0) {
        let t = squeezed_number_triple(0, rho, theta, hbar);
        prop_assert!(region_contains(&t, 1e-12 * hbar * hbar, hbar));
        prop_assert_eq!(classify(&t, hbar), Location::Boundary);
        let (r2, th2) = boundary_coordinates(&t, hbar);
        let back = squeezed_number_triple(0, r2, th2, hbar);
        for (a, b) in t.as_array().iter().zip(back.as_array()) {
            prop_assert!((a - b).abs() <= 1e-10 * hbar.max(1.0) * rho.cosh());
        }
    }

    #[test]
    fn sheets_are_nested(rho in 0.0f64..4.0, theta in -3.1f64..3.1, n in 1u32..6) {
        let outer = HyperboloidSheet::new(n, 1.0).triple(rho, theta);
        let inner = HyperboloidSheet::new(n - 1, 1.0).triple(rho, theta);
        prop_assert!(outer.u > inner.u);
    }

    #[test]
    fn pure_gaussian_triples_lie_on_sheet_zero(seed in any::<u64>()) {
        let space = PhaseSpace::new(1, 1.0).unwrap();
        let c = random_pure_covariance(&mut rng(seed), space, 1.5);
        let t = triple_from_covariance(&c).unwrap();
        prop_assert!(HyperboloidSheet::new(0, 1.0).residual(&t) <= 1e-10 * t.u * t.u);
    }

    #[test]
    fn decompositions_are_valid(level in 0.5005f64..5.0, rho in 0.0f64..2.5, theta in -3.1f64..3.1, seed in -5.0f64..5.0) {
        let target = MomentTriple::new(level * rho.cosh(), level * rho.sinh() * theta.cos(), level * rho.sinh() * theta.sin());
        let d = convex_decompose(&target, seed, 1.0).unwrap();
        prop_assert!((0.0..=1.0).contains(&d.t0));
        let sheet = HyperboloidSheet::new(0, 1.0);
        prop_assert!(sheet.residual(&d.phi) <= 1e-10 * d.phi.u.max(1.0).powi(2));
        prop_assert!(sheet.residual(&d.psi) <= 1e-10 * d.psi.u.max(1.0).powi(2));
        for (a, b) in d.mixture().as_array().iter().zip(target.as_array()) {
            prop_assert!((a - b).abs() <= 1e-10 * target.u);
        }
    }

    #[test]
    fn outside_points_are_rejected(u in 0.01f64..0.4999, v in -0.2f64..0.2) {
        let t = MomentTriple::new(u, v, 0.0);
        prop_assert!(matches!(convex_decompose(&t, 0.0, 1.0), Err(Error::Domain(_))));
    }
}

#[test]
fn every_catalog_entry_saturates_at_its_solution() {
    for n in 1..=3 {
        for spec in catalog(PhaseSpace::new(n, 1.0).unwrap()) {
            let r = match spec.solve(&MinimizeOptions::default()) {
                Ok(r) => r,
                // Unattained infima: no finite extremal state exists.
                Err(Error::NotPositiveDefinite { .. })
                    if spec.bound == 0.0 && spec.route == SolveRoute::General =>
                {
                    continue
                }
                Err(e) => panic!("{}: {e}", spec.label),
            };
            let gap = spec.functional.evaluate(&r.covariance) - spec.solved_bound();
            assert!(
                gap.abs() <= 1e-8 * spec.solved_bound().max(1.0),
                "{}: gap {gap:.2e}",
                spec.label
            );
            assert!(r.trace_identity_gap() <= 1e-8, "{}", spec.label);
        }
    }
}

#[test]
fn excited_levels_raise_the_value() {
    let space = PhaseSpace::new(2, 1.0).unwrap();
    let opts = MinimizeOptions {
        check_excited: true,
        ..MinimizeOptions::default()
    };
    for spec in catalog(space).into_iter().filter(|s| s.bound > 0.0) {
        let r = spec.solve(&opts).unwrap();
        for ex in &r.excited {
            if let Some(larger) = ex.larger {
                assert!(larger, "{}: level {:?} not above ground", spec.label, ex.qn);
            }
        }
    }
}

#[test]
fn admissibility_is_invariant_under_symplectic_maps() {
    let mut r = rng(17);
    for n in 1..=3 {
        let space = PhaseSpace::new(n, 0.5).unwrap();
        for _ in 0..50 {
            let c = random_admissible_covariance(&mut r, space, 1.0, 2.0);
            let s = random_symplectic(&mut r, n, 0.7);
            let moved =
                CovarianceMatrix::new(space, apply_congruence(&s, c.matrix()).unwrap()).unwrap();
            assert!(moved.is_admissible(1e-9).unwrap());
            assert!((moved.determinant() - c.determinant()).abs() <= 1e-8 * c.determinant());
        }
    }
}
