use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use twoscale::expansion::{nls_coefficients, rho1_finite_difference};
use twoscale::potentials_dispersion::*;
use twoscale::Error;

#[test]
fn omega_closed_form_points() {
    let kg = PotentialSpec::kg(1.0, 1.0, 0.0, 0.0);
    assert!((omega(0.0, &kg).unwrap() - 1.0).abs() < 1e-15);
    assert!((omega(PI, &kg).unwrap() - 5f64.sqrt()).abs() < 1e-14);
    assert!((group_velocity(FRAC_PI_2, &kg).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-14);
    assert!((nls_frame_speed(FRAC_PI_2, &kg).unwrap() + 1.0 / 3f64.sqrt()).abs() < 1e-14);
    assert!(group_velocity(0.0, &kg).unwrap().abs() < 1e-15);
    assert!(group_velocity(PI, &kg).unwrap().abs() < 1e-14);
}

#[test]
fn second_harmonic_divisor_at_worked_point() {
    let kg = PotentialSpec::kg(1.0, 1.0, 1.0, 1.0);
    let nr = nls_nonresonance(FRAC_PI_2, &kg, 8, 1e-10).unwrap();
    assert!(nr.holds);
    let g2 = nr.gaps.iter().find(|g| g.0 == 2).unwrap().1;
    assert!((g2 - 7.0).abs() < 1e-12);
}

#[test]
fn tuned_second_harmonic_resonance_is_detected() {
    // 4Ω²(θ) = Ω²(2θ) ⇔ 3v₂ = −4α(1 − cos θ)².
    let (alpha, th) = (-0.2, 3.0);
    let v2 = -4.0 * alpha * (1.0 - f64::cos(th)).powi(2) / 3.0;
    let spec = PotentialSpec::kg(alpha, v2, 1.0, 0.0);
    spec.check_stability().unwrap();
    let nr = nls_nonresonance(th, &spec, 8, 1e-10).unwrap();
    assert!(!nr.holds);
    assert_eq!(nr.argmin_m, 2);
    assert!(matches!(nls_coefficients(&spec, th), Err(Error::SmallDivisor(_))));
}

#[test]
fn triad_search_regimes() {
    assert!(find_resonant_triads(&PotentialSpec::kg(0.5, 1.0, 0.0, 0.0), 50, 1e-10).unwrap().triads.is_empty());
    assert!(matches!(find_resonant_triads(&PotentialSpec::kg(-0.3, 1.0, 0.0, 0.0), 50, 1e-10), Err(Error::Instability(_))));
    let spec = PotentialSpec::kg(-0.22, 1.0, 1.0, 0.0);
    let s = find_resonant_triads(&spec, 100, 1e-12).unwrap();
    for t in &s.triads {
        let th: f64 = t.thetas().iter().sum();
        assert!(angle_distance_to_zero(th) < 1e-10);
        assert!(t.omegas().iter().sum::<f64>().abs() < 1e-10);
    }
}

#[test]
fn separated_triad_keeps_harmonics_off_the_carriers() {
    let spec = PotentialSpec::kg(-0.22, 1.0, 1.0, 0.0);
    let s = find_resonant_triads(&spec, 200, 1e-12).unwrap();
    let (plain, _) = select_triad(&s, &spec, 5, 1e-8).unwrap();
    let (sep, z) = select_triad_separated(&s, &spec, 5, 1e-8).unwrap();
    assert!(z.assumption_holds);
    let score = |t: &Triad| t.carrier_separation().min(t.harmonic_separation());
    assert!(score(&sep) >= score(&plain));
    assert!(sep.harmonic_separation() > 0.1);
}

proptest! {
    #[test]
    fn omega_is_even_and_periodic(th in -10.0f64..10.0, alpha in 0.0f64..2.0, v2 in 0.1f64..2.0) {
        let spec = PotentialSpec::kg(alpha, v2, 0.0, 0.0);
        let w = omega(th, &spec).unwrap();
        prop_assert!((omega(-th, &spec).unwrap() - w).abs() < 1e-13);
        prop_assert!((omega(TAU - th, &spec).unwrap() - w).abs() < 1e-12);
    }

    #[test]
    fn group_velocity_matches_difference_quotient(th in 0.0f64..TAU, alpha in 0.1f64..2.0) {
        let spec = PotentialSpec::kg(alpha, 1.0, 0.0, 0.0);
        let h = 1e-5;
        let fd = (omega(th + h, &spec).unwrap() - omega(th - h, &spec).unwrap()) / (2.0 * h);
        prop_assert!((group_velocity(th, &spec).unwrap() - fd).abs() < 1e-8);
    }

    #[test]
    fn frame_speed_identity(th in 0.0f64..TAU) {
        let spec = PotentialSpec::kg(1.0, 1.0, 0.0, 0.0);
        let c = nls_frame_speed(th, &spec).unwrap();
        prop_assert!((c * omega(th, &spec).unwrap() + th.sin()).abs() < 1e-13);
    }

    #[test]
    fn rho1_two_ways(th in 0.0f64..TAU) {
        let spec = PotentialSpec::kg(1.0, 1.0, 1.0, 1.0);
        let c = nls_frame_speed(th, &spec).unwrap();
        let fd = rho1_finite_difference(th, &spec, 1e-3).unwrap();
        prop_assert!((th.cos() - c * c - fd).abs() < 1e-8);
    }

    #[test]
    fn potential_derivative_matches_difference(r in -1.0f64..1.0, v3 in -2.0f64..2.0, v4 in -2.0f64..2.0) {
        let spec = PotentialSpec::fpu(1.0, v3, v4);
        let h = 1e-6;
        let (_, d) = eval_potential(&spec, Which::Pair, r).unwrap();
        let fd = (eval_potential(&spec, Which::Pair, r + h).unwrap().0 - eval_potential(&spec, Which::Pair, r - h).unwrap().0) / (2.0 * h);
        prop_assert!((d - fd).abs() <= 1e-8 * d.abs().max(1.0));
    }

    #[test]
    fn zset_contains_unit_pairs(t1 in 0.1f64..3.0, t2 in 0.1f64..3.0) {
        let spec = PotentialSpec::kg(1.0, 1.0, 0.0, 0.0);
        let p1 = PlaneWave::new(t1, 1, &spec).unwrap();
        let p2 = PlaneWave::new(t2, -1, &spec).unwrap();
        let z = build_zset(&p1, &p2, &spec, 3, 1e-9).unwrap();
        for k in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            prop_assert!(z.contains(k));
        }
    }
}
