use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use twoscale::expansion::*;
use twoscale::fields::{gaussian_values, nls_p0_field, random_bandlimited_values, seeded_rng};
use twoscale::potentials_dispersion::PotentialSpec;

fn ladder_samples(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    EpsLadder::default().values.iter().map(|&e| (e, f(e))).collect()
}

#[test]
fn fit_examples() {
    let opts = FitOptions::default();
    let p = fit_power_series(&ladder_samples(|e| e.powi(3)), 2, &opts).unwrap();
    assert!((p.exponent.unwrap() - 3.0).abs() < 1e-10);
    let p = fit_power_series(&ladder_samples(|e| 2.0 * e.powi(3) + e.powi(5)), 2, &opts).unwrap();
    assert!((p.refined_exponent.unwrap() - 3.0).abs() < 0.05);
    assert!((p.coefficient - 2.0).abs() < 0.05);
    assert!((p.remainder_exponent.unwrap() - 5.0).abs() < 0.05);
    let z = fit_power_series(&ladder_samples(|_| 0.0), 2, &opts).unwrap();
    assert_eq!(z.verdict, FitVerdict::IdenticallyZero);
}

#[test]
fn kdv_and_nls_coefficient_values() {
    let k = kdv_coefficients(&PotentialSpec::fpu(1.0, 1.0, 0.0), 1.0).unwrap();
    assert!((k.dispersive - 1.0 / 12.0).abs() < 1e-15);
    let n = nls_coefficients(&PotentialSpec::kg(1.0, 1.0, 1.0, 1.0), FRAC_PI_2).unwrap();
    assert!((n.omega - 3f64.sqrt()).abs() < 1e-14);
    assert!((n.c + 1.0 / 3f64.sqrt()).abs() < 1e-14);
    assert!((n.divisor - 7.0).abs() < 1e-13);
    assert!((n.rho1 + 1.0 / 3.0).abs() < 1e-14);
    assert!((n.rho2 + 3.0 / 14.0).abs() < 1e-14);
    let q = nls_coefficients(&PotentialSpec::kg(1.0, 1.0, 0.0, 0.8), FRAC_PI_2).unwrap();
    assert!((q.rho2 - 0.2).abs() < 1e-15);
    assert_eq!((q.c1, q.c2_factor, q.c_quartic), (0.0, 0.0, 0.0));
}

#[test]
fn frame_speed_must_match_sound_speed() {
    assert!(kdv_coefficients(&PotentialSpec::fpu(1.0, 1.0, 0.0), 2.0).is_err());
}

#[test]
fn correction_closed_form_matches_spectral_solve() {
    let spec = PotentialSpec::kg(1.0, 1.0, 1.0, 1.0);
    let co = nls_coefficients(&spec, FRAC_PI_2).unwrap();
    let b1 = gaussian_values(64, 20.0, 10.0, 2.0, 1.0);
    let b2 = gaussian_values(64, 20.0, 11.0, 3.0, -0.6);
    let x0 = nls_p0_field(&b1, &b2, 20.0, 16).unwrap();
    let closed = nls_correction_closed(&co, &x0, &b1, &b2).unwrap();
    let spectral = nls_correction_spectral(&co, &spec, &x0).unwrap();
    let d = closed.sub(&spectral).max_abs();
    assert!(d < 1e-8, "mismatch {d}");
}

#[test]
fn hamiltonian_checks_pass() {
    let opts = HamiltonianOptions::default();
    for (spec, req) in [
        (PotentialSpec::fpu(1.0, 1.0, 0.0), CoefficientRequest::Kdv { c: 1.0 }),
        (PotentialSpec::kg(1.0, 1.0, 1.0, 1.0), CoefficientRequest::Nls { theta: FRAC_PI_2 }),
    ] {
        let co = extract_reduced_coefficients(&spec, &req).unwrap();
        for c in verify_reduced_hamiltonian_equation(&co, &opts).unwrap() {
            assert!(c.passed, "{} {}", c.form, c.max_rel_error);
            assert!(c.max_rel_error < 1e-6);
        }
    }
}

#[test]
fn kdv_hamiltonian_of_zero_vanishes() {
    let co = kdv_coefficients(&PotentialSpec::fpu(1.0, 1.0, 0.0), 1.0).unwrap();
    assert_eq!(kdv_reduced_hamiltonian(&vec![0.0; 32], 10.0, &co), 0.0);
    let mut rng = seeded_rng(2);
    let x = random_bandlimited_values(32, 5, &mut rng);
    let v = kdv_reduced_hamiltonian(&x, 10.0, &co);
    let w = kdv_reduced_hamiltonian(&x.iter().map(|a| -a).collect::<Vec<_>>(), 10.0, &co);
    // Quadratic part is even, cubic part odd.
    let xyy = twoscale::spectral::derivative(&x, 10.0, 2);
    let quad = -0.5 * co.dispersive * xyy.iter().map(|a| a * a).sum::<f64>() * 10.0 / 32.0;
    assert!(((v + w) / 2.0 - quad).abs() < 1e-12 * quad.abs());
}

proptest! {
    #[test]
    fn fit_recovers_power_laws(a in 0.1f64..10.0, p in 1i32..8, sign in prop::bool::ANY) {
        let a = if sign { a } else { -a };
        let fit = fit_power_series(&ladder_samples(|e| a * e.powi(p)), 2, &FitOptions::default()).unwrap();
        prop_assert!((fit.exponent.unwrap() - p as f64).abs() < 1e-9);
        prop_assert!((fit.coefficient - a).abs() < 1e-8 * a.abs());
    }

    #[test]
    fn expansion_coefficients_recover_polynomials(c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, c3 in -2.0f64..2.0) {
        let s = ladder_samples(|e| c1 * e + c2 * e * e + c3 * e.powi(3));
        let c = fit_expansion_coefficients(&s, &[1, 2, 3]).unwrap();
        prop_assert!((c[0] - c1).abs() < 1e-9 && (c[1] - c2).abs() < 1e-8 && (c[2] - c3).abs() < 1e-7);
    }
}
