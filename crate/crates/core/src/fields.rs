//! Synthetic macroscopic fields: Gaussians, seeded random band-limited
//! fields, and leading-order fields built from amplitudes.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::functionals::MacroField;
use crate::spectral::{ifft_inplace, mode};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Grid points y_j = jL/n.
pub fn grid(n: usize, length: f64) -> Vec<f64> {
    (0..n).map(|j| length * j as f64 / n as f64).collect()
}

/// Periodised Gaussian amp·exp(−(y − y₀)²/w²) on [0, L).
pub fn gaussian_values(n: usize, length: f64, center: f64, width: f64, amp: f64) -> Vec<f64> {
    grid(n, length)
        .into_iter()
        .map(|y| {
            (-3..=3)
                .map(|p| {
                    let d = y - center + p as f64 * length;
                    amp * (-(d * d) / (width * width)).exp()
                })
                .sum()
        })
        .collect()
}

pub fn gaussian(n: usize, length: f64, center: f64, width: f64, amp: f64) -> Result<MacroField> {
    MacroField::new(n, length, 0, 1, gaussian_values(n, length, center, width, amp))
}

/// Complex Gaussian envelope amp·exp(−(y−y₀)²/w² + iky).
pub fn gaussian_complex(n: usize, length: f64, center: f64, width: f64, amp: Complex64, k: f64) -> Vec<Complex64> {
    gaussian_values(n, length, center, width, 1.0)
        .into_iter()
        .zip(grid(n, length))
        .map(|(g, y)| amp * g * Complex64::from_polar(1.0, k * y))
        .collect()
}

/// Random real signal with modes |m| ≤ m_max and coefficients decaying like
/// exp(−(m/m_max)²).
pub fn random_bandlimited_values(n: usize, m_max: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    random_bandlimited_complex(n, m_max, rng).into_iter().map(|z| z.re).collect()
}

pub fn random_bandlimited_complex(n: usize, m_max: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    for (i, z) in c.iter_mut().enumerate() {
        let m = mode(i, n).unsigned_abs() as usize;
        if m <= m_max && 2 * m < n {
            let decay = (-((m as f64) / (m_max.max(1) as f64)).powi(2)).exp();
            *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * decay * n as f64;
        }
    }
    ifft_inplace(&mut c);
    c
}

/// Random band-limited field on [0, L) × [0, 2π)^k.
pub fn random_field(
    ny: usize,
    length: f64,
    phase_dims: usize,
    nphi: usize,
    m_max_y: usize,
    m_max_phi: i64,
    rng: &mut ChaCha8Rng,
) -> Result<MacroField> {
    let np = nphi.pow(phase_dims as u32);
    let mut values = vec![0.0; ny * np];
    let ranges: Vec<Vec<i64>> = (0..phase_dims).map(|_| (-m_max_phi..=m_max_phi).collect()).collect();
    let combos: Vec<Vec<i64>> = match phase_dims {
        0 => vec![vec![]],
        1 => ranges[0].iter().map(|&a| vec![a]).collect(),
        _ => ranges[0].iter().flat_map(|&a| ranges[1].iter().map(move |&b| vec![a, b])).collect(),
    };
    for m in combos {
        let prof = random_bandlimited_complex(ny, m_max_y, rng);
        for iy in 0..ny {
            for ip in 0..np {
                let mut r = ip;
                let mut ph = 0.0;
                for d in (0..phase_dims).rev() {
                    ph += m[d] as f64 * TAU * (r % nphi) as f64 / nphi as f64;
                    r /= nphi;
                }
                values[iy * np + ip] += (prof[iy] * Complex64::from_polar(1.0, ph)).re;
            }
        }
    }
    MacroField::new(ny, length, phase_dims, nphi, values)
}

/// X₀(y, φ) = π^{−1/2}(B₁ cos φ + B₂ sin φ).
pub fn nls_p0_field(b1: &[f64], b2: &[f64], length: f64, nphi: usize) -> Result<MacroField> {
    let ny = b1.len();
    let s = 1.0 / PI.sqrt();
    let mut values = vec![0.0; ny * nphi];
    for iy in 0..ny {
        for ip in 0..nphi {
            let phi = TAU * ip as f64 / nphi as f64;
            values[iy * nphi + ip] = s * (b1[iy] * phi.cos() + b2[iy] * phi.sin());
        }
    }
    MacroField::new(ny, length, 1, nphi, values)
}

/// (B₁, B₂) of X₀ = 2 Re(A e^{iφ}).
pub fn amplitude_to_b(a: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    let s = 2.0 * PI.sqrt();
    (a.iter().map(|z| s * z.re).collect(), a.iter().map(|z| -s * z.im).collect())
}

/// X₀ = Σₙ Aₙ e^{iφₙ} + c.c. with φ₃ = −φ₁ − φ₂.
pub fn twi_p0_field(a: [&[Complex64]; 3], length: f64, nphi: usize) -> Result<MacroField> {
    let ny = a[0].len();
    let np = nphi * nphi;
    let mut values = vec![0.0; ny * np];
    for iy in 0..ny {
        for i1 in 0..nphi {
            for i2 in 0..nphi {
                let p1 = TAU * i1 as f64 / nphi as f64;
                let p2 = TAU * i2 as f64 / nphi as f64;
                let phases = [p1, p2, -p1 - p2];
                let v: f64 = (0..3).map(|n| 2.0 * (a[n][iy] * Complex64::from_polar(1.0, phases[n])).re).sum();
                values[iy * np + i1 * nphi + i2] = v;
            }
        }
    }
    MacroField::new(ny, length, 2, nphi, values)
}
