use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use twoscale::expansion::{fit_expansion_coefficients, verify_cancellation, EpsLadder};
use twoscale::fields::{gaussian, random_field, seeded_rng, twi_p0_field, gaussian_complex};
use twoscale::functionals::*;
use twoscale::potentials_dispersion::{find_resonant_triads, omega, select_triad_separated, PotentialSpec};
use twoscale::Complex64;

fn frames() -> Vec<Frame> {
    vec![
        Frame::We,
        Frame::Kdv { c: 1.0 },
        Frame::Nls { c: -0.5, omega: 3f64.sqrt(), theta: FRAC_PI_2 },
        Frame::Twi { omega: [0.44, 0.55], theta: [2.55, 4.08] },
    ]
}

fn spec_for(f: &Frame) -> PotentialSpec {
    match f {
        Frame::We | Frame::Kdv { .. } => PotentialSpec::fpu(1.0, 1.0, 0.5),
        Frame::Nls { .. } => PotentialSpec::kg(1.0, 1.0, 1.0, 1.0),
        Frame::Twi { .. } => PotentialSpec::kg(-0.22, 1.0, 1.0, 0.0),
    }
}

#[test]
fn zero_fields_give_zero_functionals() {
    for f in frames() {
        let z = MacroField::zeros(32, 20.0, f.reduction().phase_dims(), 8).unwrap();
        let r = evaluate(&f, 0.1, &z, &z, &spec_for(&f)).unwrap();
        for name in ["K", "V", "I", "L", "E", "H"] {
            assert_eq!(r.get(name).unwrap(), 0.0, "{f:?} {name}");
        }
    }
}

#[test]
fn identity_shift_is_zero_operator() {
    let mut rng = seeded_rng(1);
    let u = random_field(32, 10.0, 1, 8, 5, 2, &mut rng).unwrap();
    let s = ShiftSpec::new(0.0, vec![0.0]);
    for k in [ShiftKind::Fwd, ShiftKind::Bwd, ShiftKind::Laplace] {
        assert!(shift_op(&u, &s, k).unwrap().max_abs() < 1e-14);
    }
}

#[test]
fn wave_reduction_has_no_frame_term() {
    let spec = PotentialSpec::fpu(1.0, 1.0, 0.0);
    let x = gaussian(128, 40.0, 20.0, 3.0, 1.0).unwrap();
    let xt = gaussian(128, 40.0, 19.0, 2.0, 0.3).unwrap();
    let r = we_functionals(0.1, &x, &xt, &spec).unwrap();
    assert_eq!(r.h, r.e);
}

#[test]
fn kdv_kinetic_term_at_rest() {
    let spec = PotentialSpec::fpu(1.0, 1.0, 0.0);
    let x = gaussian(256, 40.0, 20.0, 2.0, 1.0).unwrap();
    let z = x.scale(0.0);
    let eps = 0.1;
    let r = kdv_functionals(eps, &x, &z, &spec, 1.0).unwrap();
    let expect = eps.powi(3) * 0.5 * x.dy().inner(&x.dy());
    assert!((r.k - expect).abs() < 1e-12 * expect);
}

#[test]
fn kdv_leading_coefficients_equipartition() {
    let spec = PotentialSpec::fpu(1.0, 1.0, 0.0);
    let x = gaussian(512, 40.0, 20.0, 2.0, 1.0).unwrap();
    let xt = gaussian(512, 40.0, 18.0, 3.0, 0.5).unwrap();
    let r = verify_cancellation(&Frame::Kdv { c: 1.0 }, &x, &xt, &spec, &EpsLadder::default()).unwrap();
    let lead = |name: &str| fit_expansion_coefficients(&r.series(name).unwrap().samples, &[3, 4, 5, 6, 7]).unwrap()[0];
    let (k, v, i) = (lead("K"), lead("V"), lead("I"));
    assert!((k - v).abs() < 1e-3 * k.abs());
    assert!((k + 0.5 * i).abs() < 1e-3 * k.abs());
    let ired = r.series("Ired_minus_2K").unwrap();
    assert!(ired.fit.exponent.unwrap() >= 4.9);
}

#[test]
fn threewave_leading_exponents_are_one() {
    let spec = PotentialSpec::kg(-0.22, 1.0, 1.0, 0.0);
    let s = find_resonant_triads(&spec, 200, 1e-12).unwrap();
    let (t, _) = select_triad_separated(&s, &spec, 5, 1e-8).unwrap();
    let a: Vec<Vec<Complex64>> = (0..3)
        .map(|n| gaussian_complex(128, 40.0, 18.0 + n as f64, 4.0, Complex64::new(0.5, 0.1 * n as f64), 0.0))
        .collect();
    let x = twi_p0_field([&a[0], &a[1], &a[2]], 40.0, 16).unwrap();
    let xt = x.scale(0.3);
    let w = t.omegas();
    let th = t.thetas();
    assert!((w[0].abs() - omega(th[0], &spec).unwrap()).abs() < 1e-12);
    let frame = Frame::Twi { omega: [w[0], w[1]], theta: [th[0], th[1]] };
    let r = verify_cancellation(&frame, &x, &xt, &spec, &EpsLadder::default()).unwrap();
    for name in ["K", "V", "I"] {
        let e = r.slope(name).unwrap();
        assert!((e - 1.0).abs() < 0.05, "{name}: {e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn differences_are_adjoint(seed in 0u64..10_000, dims in 0usize..3, delta in 0.01f64..0.5) {
        let mut rng = seeded_rng(seed);
        let u = random_field(32, 10.0, dims, 8, 6, 2, &mut rng).unwrap();
        let v = random_field(32, 10.0, dims, 8, 6, 2, &mut rng).unwrap();
        let s = ShiftSpec::new(delta, (0..dims).map(|d| 0.7 + d as f64).collect());
        let fu = shift_op(&u, &s, ShiftKind::Fwd).unwrap();
        let bv = shift_op(&v, &s, ShiftKind::Bwd).unwrap();
        let lhs = fu.inner(&v);
        let rhs = -u.inner(&bv);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(u.inner(&u)));
        let lu = shift_op(&u, &s, ShiftKind::Laplace).unwrap();
        let lv = shift_op(&v, &s, ShiftKind::Laplace).unwrap();
        let a = lu.inner(&v);
        let b = u.inner(&lv);
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(u.inner(&u)));
    }

    #[test]
    fn sigma_is_skew(seed in 0u64..10_000, which in 0usize..4, eps in 0.02f64..0.3) {
        let f = &frames()[which];
        let dims = f.reduction().phase_dims();
        let mut rng = seeded_rng(seed);
        let mut g = || random_field(32, 10.0, dims, 8, 6, 2, &mut rng).unwrap();
        let (a, b, c, d) = (g(), g(), g(), g());
        let x = apply_sigma(f, eps, (&a, &b), (&c, &d)).unwrap();
        let y = apply_sigma(f, eps, (&c, &d), (&a, &b)).unwrap();
        prop_assert!((x + y).abs() <= 1e-10 * x.abs().max(1e-12));
    }

    #[test]
    fn legendre_identity_holds(seed in 0u64..10_000, which in 0usize..4, eps in 0.02f64..0.3) {
        let f = &frames()[which];
        let dims = f.reduction().phase_dims();
        let mut rng = seeded_rng(seed);
        let x = random_field(32, 10.0, dims, 8, 4, 1, &mut rng).unwrap().scale(0.3);
        let xt = random_field(32, 10.0, dims, 8, 4, 1, &mut rng).unwrap().scale(0.3);
        let d = legendre_defect(f, eps, &x, &xt, &spec_for(f)).unwrap();
        prop_assert!(d < 1e-6, "defect {d}");
    }
}

#[test]
fn kdv_leading_sigma_block() {
    let mut rng = seeded_rng(9);
    let a = random_field(64, 10.0, 0, 1, 6, 0, &mut rng).unwrap();
    let c = random_field(64, 10.0, 0, 1, 6, 0, &mut rng).unwrap();
    let z = a.scale(0.0);
    let frame = Frame::Kdv { c: 1.5 };
    let v = apply_sigma_order(&frame, 5, (&a, &z), (&c, &z));
    assert!((v - (-3.0 * a.dy().inner(&c))).abs() < 1e-12 * v.abs().max(1.0));
    let blocks = sigma_blocks(&Frame::Nls { c: 0.1, omega: 1.0, theta: 1.0 });
    assert!(blocks.contains(&(5, SigmaBlock::Metric)));
}
