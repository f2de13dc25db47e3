//! Fixtures shared by the criterion benches.

use std::f64::consts::FRAC_PI_2;

use twoscale::bridge::ScalingSpec;
use twoscale::fields::{gaussian, gaussian_values, random_bandlimited_values, seeded_rng};
use twoscale::functionals::MacroField;
use twoscale::{ChainState, PotentialSpec};

/// KG ring with random band-limited data of amplitude ~0.1.
pub fn kg_chain(n: usize) -> ChainState {
    let mut rng = seeded_rng(3);
    let x = random_bandlimited_values(n, 16, &mut rng);
    let v = random_bandlimited_values(n, 16, &mut rng);
    let s = |u: Vec<f64>| {
        let m = u.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        u.into_iter().map(|w| 0.1 * w / m).collect()
    };
    ChainState::new(s(x), s(v), PotentialSpec::kg(1.0, 1.0, 1.0, 1.0)).expect("valid state")
}

/// Zero-mean Gaussian strain on [0, 40).
pub fn kdv_strain(n: usize) -> Vec<f64> {
    let mut u = gaussian_values(n, 40.0, 20.0, 2.0, 1.0);
    let m = u.iter().sum::<f64>() / n as f64;
    u.iter_mut().for_each(|v| *v -= m);
    u
}

/// Position and velocity fields for the KdV functionals.
pub fn kdv_fields(n: usize) -> (MacroField, MacroField) {
    (gaussian(n, 40.0, 20.0, 2.0, 1.0).expect("field"), gaussian(n, 40.0, 18.0, 3.0, 0.5).expect("field"))
}

pub fn nls_scaling(eps: f64) -> (ScalingSpec, PotentialSpec) {
    let kg = PotentialSpec::kg(1.0, 1.0, 1.0, 1.0);
    (ScalingSpec::nls(eps, 40.0, FRAC_PI_2, &kg).expect("scaling"), kg)
}
