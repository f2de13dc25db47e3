use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;
use twoscale::chain::*;
use twoscale::fields::seeded_rng;
use twoscale::potentials_dispersion::{omega, PotentialSpec};

fn smooth_state(n: usize, spec: PotentialSpec) -> ChainState {
    let x = (0..n).map(|j| 0.3 * (TAU * j as f64 / n as f64).sin()).collect();
    let v = (0..n).map(|j| 0.1 * (2.0 * TAU * j as f64 / n as f64).cos()).collect();
    ChainState::new(x, v, spec).unwrap()
}

#[test]
fn linear_kg_force_matches_dense_circulant() {
    let (alpha, v2) = (0.7, 1.3);
    let spec = PotentialSpec::kg(alpha, v2, 0.0, 0.0);
    let n = 16;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        m[(j, j)] = -v2 - 2.0 * alpha;
        m[(j, (j + 1) % n)] += alpha;
        m[(j, (j + n - 1) % n)] += alpha;
    }
    let mut rng = seeded_rng(11);
    for kick in [Some(5), None] {
        let x: Vec<f64> = match kick {
            Some(k) => (0..n).map(|j| if j == k { 1.0 } else { 0.0 }).collect(),
            None => (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        };
        let expect = &m * DVector::from_vec(x.clone());
        let f = force(&ChainState::new(x, vec![0.0; n], spec.clone()).unwrap());
        for j in 0..n {
            assert!((f[j] - expect[j]).abs() < 1e-14);
        }
    }
}

#[test]
fn energy_matches_naive_loop() {
    let spec = PotentialSpec::fpu(1.0, 0.8, -0.4);
    let n = 32;
    let mut rng = seeded_rng(3);
    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let mut naive = 0.0;
    for j in 0..n {
        let r = x[(j + 1) % n] - x[j];
        naive += 0.5 * v[j] * v[j] + r * r / 2.0 + 0.8 * r.powi(3) / 6.0 - 0.4 * r.powi(4) / 24.0;
    }
    let e = total_energy(&ChainState::new(x, v, spec).unwrap());
    assert!((e - naive).abs() < 1e-14 * naive.abs());
}

#[test]
fn reversibility_round_trip() {
    let spec = PotentialSpec::fpu(1.0, 1.0, 1.0);
    let s0 = smooth_state(64, spec);
    let fwd = step_verlet(&s0, 0.05, 2000).unwrap();
    let back = step_verlet(&fwd, -0.05, 2000).unwrap();
    for j in 0..64 {
        assert!((back.x[j] - s0.x[j]).abs() < 1e-10);
        assert!((back.v[j] - s0.v[j]).abs() < 1e-10);
    }
}

#[test]
fn plane_wave_period_error_is_second_order() {
    let spec = PotentialSpec::kg(1.0, 1.0, 0.0, 0.0);
    let (s0, th) = plane_wave_state(&spec, 64, TAU * 5.0 / 64.0, 0.1).unwrap();
    let period = TAU / omega(th, &spec).unwrap();
    let err = |steps: usize| {
        let s = step_verlet(&s0, period / steps as f64, steps).unwrap();
        s.x.iter().zip(&s0.x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    };
    let ratio = err(200) / err(400);
    assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
}

#[test]
fn harmonic_energy_stays_bounded() {
    let spec = PotentialSpec::fpu(1.0, 0.0, 0.0);
    let s0 = smooth_state(128, spec);
    let e0 = total_energy(&s0);
    let mut integ = Verlet::new(s0, 0.01).unwrap();
    for _ in 0..100 {
        integ.advance(1000).unwrap();
        assert!((total_energy(&integ.state) - e0).abs() < 1e-6 * e0);
    }
}

#[test]
fn case_c1_examples() {
    let spec = PotentialSpec::fpu(1.0, 0.0, 0.0);
    let rest = case_c1_demo(&spec, 8, 1, |_| (1.0, 0.0), 10.0, 0.01).unwrap();
    assert_eq!(rest.max_deviation, 0.0);
    let drift = case_c1_demo(&spec, 8, 1, |_| (0.0, 2.0), 10.0, 0.01).unwrap();
    assert!(drift.max_deviation < 1e-12);
    let cells = case_c1_demo(&spec, 4, 5, |i| (i as f64 * 0.3 - 0.2, (i as f64).cos()), 10.0, 0.01).unwrap();
    assert!(cells.max_deviation < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fpu_conserves_momentum(seed in 0u64..1000) {
        let mut rng = seeded_rng(seed);
        let n = 24;
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.3..0.3)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.3..0.3)).collect();
        let s0 = ChainState::new(x, v, PotentialSpec::fpu(1.0, 1.0, 1.0)).unwrap();
        let s1 = step_verlet(&s0, 0.02, 500).unwrap();
        prop_assert!((s1.momentum() - s0.momentum()).abs() < 1e-11);
    }

    #[test]
    fn small_steps_keep_energy(seed in 0u64..1000) {
        let mut rng = seeded_rng(seed);
        let n = 24;
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.2..0.2)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.2..0.2)).collect();
        let s0 = ChainState::new(x, v, PotentialSpec::kg(1.0, 1.0, 1.0, 1.0)).unwrap();
        let e0 = total_energy(&s0);
        let s1 = step_verlet(&s0, 1e-3, 2000).unwrap();
        prop_assert!((total_energy(&s1) - e0).abs() < 1e-5 * e0);
    }
}
