use num_complex::Complex64;

use super::nls::norm2;
use super::{output_times, substeps, AmplitudeState, AmplitudeTrajectory, SplitOptions};
use crate::error::{Error, Result};
use crate::expansion::TwiCoefficients;
use crate::spectral::{derivative_complex, fft_inplace, ifft_inplace, wavenumbers};

/// Σₙ ωₙ² ∫|Aₙ|².
pub fn threewave_invariant(a: &[Vec<Complex64>], length: f64, co: &TwiCoefficients) -> f64 {
    (0..3).map(|n| co.omega[n].powi(2) * norm2(&a[n], length)).sum()
}

/// 𝕍^red = v₃∫A₁A₂A₃ + iΣωₙωₙ′∫AₙĀₙ_y + c.c.
pub fn threewave_hamiltonian(a: &[Vec<Complex64>], length: f64, co: &TwiCoefficients) -> f64 {
    let n = a[0].len();
    let dy = length / n as f64;
    let mut s = Complex64::new(0.0, 0.0);
    for j in 0..n {
        s += co.v3 * a[0][j] * a[1][j] * a[2][j];
    }
    for m in 0..3 {
        let ay = derivative_complex(&a[m], length, 1);
        for j in 0..n {
            s += Complex64::i() * co.omega_omega_prime[m] * a[m][j] * ay[j].conj();
        }
    }
    2.0 * s.re * dy
}

fn coupling(a: &[Vec<Complex64>], co: &TwiCoefficients) -> Vec<Vec<Complex64>> {
    let i = Complex64::i();
    (0..3)
        .map(|n| {
            let (p, q) = ((n + 1) % 3, (n + 2) % 3);
            let f = i * co.v3 / (2.0 * co.omega[n]);
            a[p].iter().zip(&a[q]).map(|(x, y)| f * x.conj() * y.conj()).collect()
        })
        .collect()
}

/// Aₙ_τ = ωₙ′Aₙ_y + (iv₃/2ωₙ)ĀₘĀ_k.
pub fn threewave_rhs(a: &[Vec<Complex64>], length: f64, co: &TwiCoefficients) -> Vec<Vec<Complex64>> {
    let mut r = coupling(a, co);
    for n in 0..3 {
        let ay = derivative_complex(&a[n], length, 1);
        r[n].iter_mut().zip(&ay).for_each(|(z, d)| *z += co.omega_prime[n] * d);
    }
    r
}

fn rk4_coupling(a: &mut [Vec<Complex64>], co: &TwiCoefficients, h: f64) {
    let comb = |a: &[Vec<Complex64>], k: &[Vec<Complex64>], s: f64| -> Vec<Vec<Complex64>> {
        a.iter().zip(k).map(|(x, d)| x.iter().zip(d).map(|(u, v)| u + v * s).collect()).collect()
    };
    let k1 = coupling(a, co);
    let k2 = coupling(&comb(a, &k1, 0.5 * h), co);
    let k3 = coupling(&comb(a, &k2, 0.5 * h), co);
    let k4 = coupling(&comb(a, &k3, h), co);
    for n in 0..3 {
        for j in 0..a[n].len() {
            a[n][j] += (k1[n][j] + 2.0 * k2[n][j] + 2.0 * k3[n][j] + k4[n][j]) * (h / 6.0);
        }
    }
}

/// Strang splitting: exact spectral transport half steps around an RK4
/// coupling step.
pub fn solve_threewave(init: &AmplitudeState, co: &TwiCoefficients, tau_end: f64, opts: &SplitOptions) -> Result<AmplitudeTrajectory> {
    if init.a.len() != 3 {
        return Err(Error::ShapeMismatch(format!("three-wave system takes three amplitudes, got {}", init.a.len())));
    }
    if co.omega.iter().any(|w| *w == 0.0 || !w.is_finite()) {
        return Err(Error::Precondition("triad frequencies must be nonzero".into()));
    }
    let n = init.n();
    let length = init.length;
    let k = wavenumbers(n, length);
    let times = output_times(tau_end, opts.output_interval);
    let mut a = init.a.clone();
    let inv = |a: &[Vec<Complex64>]| (threewave_invariant(a, length, co), threewave_hamiltonian(a, length, co));
    let mut out = AmplitudeTrajectory { states: vec![AmplitudeState { a: a.clone(), tau: 0.0, length }], invariants: vec![inv(&a)], steps: 0 };
    let peak = |a: &[Vec<Complex64>]| -> Vec<f64> { a.iter().map(|v| v.iter().map(|z| z.norm()).fold(0.0, f64::max)).collect() };
    for w in times.windows(2) {
        let (m, h) = substeps(w[1] - w[0], opts.dt);
        let half: Vec<Vec<Complex64>> =
            (0..3).map(|c| k.iter().map(|&kk| Complex64::from_polar(1.0, co.omega_prime[c] * kk * 0.5 * h)).collect()).collect();
        let transport = |a: &mut [Vec<Complex64>]| {
            for c in 0..3 {
                fft_inplace(&mut a[c]);
                a[c].iter_mut().zip(&half[c]).for_each(|(z, e)| *z *= e);
                ifft_inplace(&mut a[c]);
            }
        };
        for _ in 0..m {
            let p = peak(&a);
            let rate = (0..3).map(|c| (co.v3 / (2.0 * co.omega[c])).abs() * p[(c + 1) % 3] * p[(c + 2) % 3]).fold(0.0, f64::max);
            if rate * h > opts.max_phase {
                return Err(Error::StepRejected { phase: rate * h, limit: opts.max_phase });
            }
            transport(&mut a);
            rk4_coupling(&mut a, co, h);
            transport(&mut a);
            out.steps += 1;
        }
        if a.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Divergence { step: out.steps });
        }
        out.invariants.push(inv(&a));
        out.states.push(AmplitudeState { a: a.clone(), tau: w[1], length });
    }
    Ok(out)
}
