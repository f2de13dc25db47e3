use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{output_times, substeps};
use crate::error::{Error, Result};
use crate::expansion::NlsCoefficients;
use crate::spectral::{derivative_complex, fft_inplace, ifft_inplace, wavenumbers};

/// One envelope (nlS) or three (3WI) on a periodic grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeState {
    pub a: Vec<Vec<Complex64>>,
    pub tau: f64,
    pub length: f64,
}

impl AmplitudeState {
    pub fn new(a: Vec<Vec<Complex64>>, length: f64) -> Result<Self> {
        let n = a.first().map(|v| v.len()).unwrap_or(0);
        if n < 4 || a.iter().any(|v| v.len() != n) {
            return Err(Error::ShapeMismatch("amplitude components must share a grid of ≥ 4 points".into()));
        }
        if a.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("amplitude has non-finite entries".into()));
        }
        Ok(AmplitudeState { a, tau: 0.0, length })
    }

    pub fn n(&self) -> usize {
        self.a[0].len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitOptions {
    pub dt: f64,
    pub output_interval: f64,
    /// Largest admissible nonlinear phase rotation per step, in radians.
    pub max_phase: f64,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions { dt: 1e-3, output_interval: 0.1, max_phase: 0.1 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmplitudeTrajectory {
    pub states: Vec<AmplitudeState>,
    /// Conserved quantities per output: (mass, Hamiltonian) for nlS,
    /// (Σω²∫|A|², Hamiltonian) for 3WI.
    pub invariants: Vec<(f64, f64)>,
    pub steps: usize,
}

impl AmplitudeTrajectory {
    pub fn final_state(&self) -> &AmplitudeState {
        self.states.last().expect("initial state recorded")
    }

    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.tau).collect()
    }
}

pub(crate) fn norm2(a: &[Complex64], length: f64) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>() * length / a.len() as f64
}

pub fn nls_mass(a: &[Complex64], length: f64) -> f64 {
    norm2(a, length)
}

/// 𝕍^red = 2πρ₁∫|A_y|² + 2πρ₂∫|A|⁴.
pub fn nls_hamiltonian(a: &[Complex64], length: f64, co: &NlsCoefficients) -> f64 {
    let ay = derivative_complex(a, length, 1);
    let dy = length / a.len() as f64;
    let grad: f64 = ay.iter().map(|z| z.norm_sqr()).sum::<f64>() * dy;
    let quart: f64 = a.iter().map(|z| z.norm_sqr().powi(2)).sum::<f64>() * dy;
    2.0 * PI * (co.rho1 * grad + co.rho2 * quart)
}

/// A_τ from 2iωA_τ = ρ₁A_yy − 2ρ₂|A|²A.
pub fn nls_rhs(a: &[Complex64], length: f64, co: &NlsCoefficients) -> Vec<Complex64> {
    let ayy = derivative_complex(a, length, 2);
    let i = Complex64::i();
    a.iter().zip(&ayy).map(|(z, zyy)| -i * (co.rho1 / (2.0 * co.omega)) * zyy + i * (co.rho2 / co.omega) * z.norm_sqr() * z).collect()
}

/// Strang split-step Fourier solution of the nlS equation.
pub fn solve_nls(init: &AmplitudeState, co: &NlsCoefficients, tau_end: f64, opts: &SplitOptions) -> Result<AmplitudeTrajectory> {
    if !(co.omega > 0.0) {
        return Err(Error::Precondition(format!("nlS needs omega > 0, got {}", co.omega)));
    }
    if init.a.len() != 1 {
        return Err(Error::ShapeMismatch(format!("nlS takes one amplitude, got {}", init.a.len())));
    }
    let n = init.n();
    let length = init.length;
    let k = wavenumbers(n, length);
    let g = co.rho2 / co.omega;
    let times = output_times(tau_end, opts.output_interval);
    let mut a = init.a[0].clone();
    let inv = |a: &[Complex64]| (nls_mass(a, length), nls_hamiltonian(a, length, co));
    let mut out = AmplitudeTrajectory { states: vec![init.clone()], invariants: vec![inv(&a)], steps: 0 };
    out.states[0].tau = 0.0;
    for w in times.windows(2) {
        let (m, h) = substeps(w[1] - w[0], opts.dt);
        let half: Vec<Complex64> = k.iter().map(|&kk| Complex64::from_polar(1.0, co.rho1 * kk * kk * 0.5 * h / (2.0 * co.omega))).collect();
        for _ in 0..m {
            let peak = a.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max);
            let phase = (g * peak * h).abs();
            if phase > opts.max_phase {
                return Err(Error::StepRejected { phase, limit: opts.max_phase });
            }
            fft_inplace(&mut a);
            a.iter_mut().zip(&half).for_each(|(z, e)| *z *= e);
            ifft_inplace(&mut a);
            a.iter_mut().for_each(|z| *z *= Complex64::from_polar(1.0, g * z.norm_sqr() * h));
            fft_inplace(&mut a);
            a.iter_mut().zip(&half).for_each(|(z, e)| *z *= e);
            ifft_inplace(&mut a);
            out.steps += 1;
        }
        if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Divergence { step: out.steps });
        }
        out.invariants.push(inv(&a));
        out.states.push(AmplitudeState { a: vec![a.clone()], tau: w[1], length });
    }
    Ok(out)
}
