use std::f64::consts::{FRAC_PI_2, TAU};

use twoscale::bridge::*;
use twoscale::chain::Verlet;
use twoscale::fields::{random_bandlimited_complex, random_bandlimited_values, seeded_rng};
use twoscale::potentials_dispersion::{find_resonant_triads, select_triad_separated, PotentialSpec};
use twoscale::spectral::resample_complex;
use twoscale::Complex64;

fn sup(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn round_trip(sc: &ScalingSpec, spec: &PotentialSpec, init: &MacroInitial) -> f64 {
    let run = run_macro(sc, spec, init, &MacroConfig::default(), 0.0).unwrap();
    let state = seed_chain(&run.snapshots[0], sc, spec).unwrap();
    let d = demodulate(&state, sc, 0.0).unwrap();
    sup(&d.fields, &run.compare[0])
}

#[test]
fn seed_then_demodulate_is_identity() {
    let mut rng = seeded_rng(4);
    let kg = PotentialSpec::kg(1.0, 1.0, 1.0, 1.0);
    let a: Vec<Complex64> = random_bandlimited_complex(256, 12, &mut rng).into_iter().map(|z| z * 0.3).collect();
    let sc = ScalingSpec::nls(0.1, 40.0, FRAC_PI_2, &kg).unwrap();
    assert!(round_trip(&sc, &kg, &MacroInitial::Nls { a }) < 1e-10);

    let fpu = PotentialSpec::fpu(1.0, 1.0, 0.0);
    let mut u = random_bandlimited_values(256, 12, &mut rng);
    let m = u.iter().sum::<f64>() / 256.0;
    u.iter_mut().for_each(|v| *v -= m);
    let sc = ScalingSpec::kdv(0.1, 40.0, &fpu).unwrap();
    assert!(round_trip(&sc, &fpu, &MacroInitial::Kdv { u }) < 1e-10);

    let mut r = random_bandlimited_values(256, 8, &mut rng);
    let m = r.iter().sum::<f64>() / 256.0;
    r.iter_mut().for_each(|v| *v = 0.1 * (*v - m));
    let w = random_bandlimited_values(256, 8, &mut rng).into_iter().map(|v| 0.1 * v).collect();
    let sc = ScalingSpec::we(0.05, TAU).unwrap();
    assert!(round_trip(&sc, &fpu, &MacroInitial::We { r, w }) < 1e-10);

    let spec = PotentialSpec::kg(-0.22, 1.0, 1.0, 0.0);
    let s = find_resonant_triads(&spec, 200, 1e-12).unwrap();
    let (t, _) = select_triad_separated(&s, &spec, 5, 1e-8).unwrap();
    let a = [0, 1, 2].map(|_| random_bandlimited_complex(128, 6, &mut rng).into_iter().map(|z| z * 0.3).collect::<Vec<_>>());
    let sc = ScalingSpec::twi(0.1, 40.0, &t, &spec).unwrap();
    assert!(round_trip(&sc, &spec, &MacroInitial::Twi { a }) < 1e-10);
}

#[test]
fn wave_seeding_takes_velocity_unscaled() {
    let fpu = PotentialSpec::fpu(1.0, 1.0, 0.0);
    let n = 64;
    let r = (0..n).map(|j| 0.1 * (TAU * j as f64 / n as f64).sin()).collect();
    let w = (0..n).map(|j| 0.2 * (TAU * j as f64 / n as f64).cos()).collect();
    let sc = ScalingSpec::we(0.1, TAU).unwrap();
    let run = run_macro(&sc, &fpu, &MacroInitial::We { r, w }, &MacroConfig::default(), 0.0).unwrap();
    let st = seed_chain(&run.snapshots[0], &sc, &fpu).unwrap();
    for (j, v) in st.v.iter().enumerate() {
        assert!((v - 0.2 * (sc.eps * j as f64).cos()).abs() < 1e-12);
    }
}

#[test]
fn constant_envelope_seeds_plane_wave() {
    let kg = PotentialSpec::kg(1.0, 1.0, 0.0, 0.0);
    let a0 = Complex64::new(0.3, 0.4);
    let sc = ScalingSpec::nls(0.1, 40.0, FRAC_PI_2, &kg).unwrap();
    let run = run_macro(&sc, &kg, &MacroInitial::Nls { a: vec![a0; 64] }, &MacroConfig::default(), 0.0).unwrap();
    let st = seed_chain(&run.snapshots[0], &sc, &kg).unwrap();
    let th = sc.carriers[0].theta;
    for (j, x) in st.x.iter().enumerate() {
        let expect = 2.0 * sc.eps * a0.norm() * (th * j as f64 + a0.arg()).cos();
        assert!((x - expect).abs() < 1e-13);
    }
}

#[test]
fn linear_plane_wave_has_roundoff_residual_and_constant_envelope() {
    let kg = PotentialSpec::kg(1.0, 1.0, 0.0, 0.0);
    let a0 = Complex64::new(0.5, 0.0);
    let sc = ScalingSpec::nls(0.1, 40.0, FRAC_PI_2, &kg).unwrap();
    let init = MacroInitial::Nls { a: vec![a0; 64] };
    let run = run_macro(&sc, &kg, &init, &MacroConfig::default(), 0.5).unwrap();
    let res = ansatz_residual(&run.snapshots, &sc, &kg).unwrap();
    assert!(res.max_norm() < 1e-12, "residual {}", res.max_norm());

    // Verlet keeps the plane wave up to an O(dt²) amplitude wobble.
    let drift = |dt: f64| {
        let mut integ = Verlet::new(seed_chain(&run.snapshots[0], &sc, &kg).unwrap(), dt).unwrap();
        let steps = (5.0 / dt).round() as usize;
        let mut dev: f64 = 0.0;
        for _ in 0..10 {
            integ.advance(steps / 10).unwrap();
            let t = integ.state.t;
            let d = demodulate(&integ.state, &sc, t).unwrap();
            dev = dev.max(d.fields[0].iter().map(|z| (z.norm() - a0.norm()).abs()).fold(0.0, f64::max));
        }
        dev
    };
    let (d1, d2) = (drift(0.01), drift(0.005));
    let w = sc.carriers[0].omega;
    assert!(d1 < (w * 0.01).powi(2) * a0.norm());
    assert!((d1 / d2 - 4.0).abs() < 0.4, "ratio {}", d1 / d2);
}

#[test]
fn wrong_carrier_is_flagged_as_fast() {
    let kg = PotentialSpec::kg(1.0, 1.0, 0.0, 0.0);
    let sc = ScalingSpec::nls(0.1, 40.0, FRAC_PI_2, &kg).unwrap();
    // Same θ, carrier frequency from a stiffer chain: the envelope rotates at
    // the beat |Ω̃ − Ω|. A small θ offset alone is absorbed by the group-velocity frame.
    let wrong = ScalingSpec::nls(0.1, 40.0, FRAC_PI_2, &PotentialSpec::kg(1.2, 1.0, 0.0, 0.0)).unwrap();
    let run = run_macro(&sc, &kg, &MacroInitial::Nls { a: vec![Complex64::new(0.5, 0.0); 64] }, &MacroConfig::default(), 0.0).unwrap();
    let mut integ = Verlet::new(seed_chain(&run.snapshots[0], &sc, &kg).unwrap(), 0.01).unwrap();
    let (mut good, mut bad) = (Vec::new(), Vec::new());
    for _ in 0..4 {
        let t = integ.state.t;
        good.push(demodulate(&integ.state, &sc, t).unwrap());
        bad.push(demodulate(&integ.state, &wrong, t).unwrap());
        integ.advance(20).unwrap();
    }
    assert!(modulation_check(&good, &sc).unwrap().slow);
    let m = modulation_check(&bad, &wrong).unwrap();
    assert!(!m.slow);
    let beat = (wrong.carriers[0].omega - sc.carriers[0].omega).abs();
    assert!((m.rate - beat).abs() < 1e-3 * beat, "rate {} beat {beat}", m.rate);
}

#[test]
fn zero_envelope_gives_zero_everything() {
    let kg = PotentialSpec::kg(1.0, 1.0, 1.0, 1.0);
    let sc = ScalingSpec::nls(0.2, 40.0, FRAC_PI_2, &kg).unwrap();
    let init = MacroInitial::Nls { a: vec![Complex64::new(0.0, 0.0); 64] };
    let run = run_macro(&sc, &kg, &init, &MacroConfig::default(), 0.1).unwrap();
    let st = seed_chain(&run.snapshots[0], &sc, &kg).unwrap();
    assert!(st.x.iter().chain(&st.v).all(|v| *v == 0.0));
    assert_eq!(ansatz_residual(&run.snapshots, &sc, &kg).unwrap().max_norm(), 0.0);
    let rep = micro_macro_error(&sc, &kg, &init, &MacroConfig::default(), 0.1).unwrap();
    assert!(rep.error.iter().all(|e| *e == 0.0));
}

#[test]
fn nls_correction_raises_residual_order() {
    let kg = PotentialSpec::kg(1.0, 1.0, 1.0, 1.0);
    let a = twoscale::fields::gaussian_complex(256, 40.0, 20.0, 4.0, Complex64::new(1.0, 0.0), 0.0);
    let init = MacroInitial::Nls { a };
    let make = |e| ScalingSpec::nls(e, 40.0, FRAC_PI_2, &kg);
    let on = MacroConfig { correction: true, ..Default::default() };
    let plain = residual_ladder(make, &kg, &init, &MacroConfig::default(), 0.2, &[0.2, 0.1, 0.05]).unwrap();
    let corr = residual_ladder(make, &kg, &init, &on, 0.2, &[0.2, 0.1, 0.05]).unwrap();
    assert!(corr.slope > 2.0, "corrected slope {}", corr.slope);
    assert!(corr.slope > plain.slope + 0.5);
}

#[test]
fn invalid_scalings_are_refused() {
    let kg = PotentialSpec::kg(1.0, 1.0, 1.0, 1.0);
    let fpu = PotentialSpec::fpu(1.0, 1.0, 0.0);
    assert!(ScalingSpec::kdv(0.1, 40.0, &kg).is_err());
    assert!(ScalingSpec::nls(0.1, 40.0, 0.0, &kg).is_err());
    assert!(ScalingSpec::we(2.0, 10.0).is_err());
    let fine = resample_complex(&vec![Complex64::new(1.0, 0.0); 8], 16);
    assert_eq!(fine.len(), 16);
    let sc = ScalingSpec::nls(0.1, 40.0, FRAC_PI_2, &kg).unwrap();
    assert!(run_macro(&sc, &fpu, &MacroInitial::Kdv { u: vec![0.0; 64] }, &MacroConfig::default(), 0.1).is_err());
}
