use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{KdvCoefficients, NlsCoefficients, ReducedCoefficients, TwiCoefficients};
use crate::error::Result;
use crate::fields::{random_bandlimited_complex, random_bandlimited_values, seeded_rng};
use crate::macro_pde::{kdv_rhs, nls_hamiltonian, nls_rhs, threewave_hamiltonian, threewave_rhs};
use crate::spectral::{antiderivative, derivative};

/// Outcome of comparing Σ^red(Z_τ) with the gradient of 𝕳^red.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianCheck {
    pub form: String,
    pub per_field: Vec<f64>,
    pub max_rel_error: f64,
    pub passed: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianOptions {
    pub n_fields: usize,
    pub ny: usize,
    pub length: f64,
    pub seed: u64,
    pub tolerance: f64,
    pub amplitude: f64,
}

impl Default for HamiltonianOptions {
    fn default() -> Self {
        HamiltonianOptions { n_fields: 10, ny: 64, length: 20.0, seed: 7, tolerance: 1e-5, amplitude: 0.5 }
    }
}

fn rel(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt().max(a.iter().map(|x| x * x).sum::<f64>().sqrt());
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// L²-gradient of a functional of a real grid function by central differences.
fn fd_gradient(x: &[f64], dy: f64, h: f64, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
    let mut w = x.to_vec();
    (0..x.len())
        .map(|i| {
            w[i] = x[i] + h;
            let p = f(&w);
            w[i] = x[i] - h;
            let m = f(&w);
            w[i] = x[i];
            (p - m) / (2.0 * h * dy)
        })
        .collect()
}

/// ∂_Ā = ½(∂_a + i∂_b) of a real functional of a complex grid function.
fn fd_wirtinger(a: &[Complex64], dy: f64, h: f64, f: impl Fn(&[Complex64]) -> f64) -> Vec<Complex64> {
    let mut w = a.to_vec();
    (0..a.len())
        .map(|i| {
            let mut d = [0.0; 2];
            for (k, dir) in [Complex64::new(h, 0.0), Complex64::new(0.0, h)].into_iter().enumerate() {
                w[i] = a[i] + dir;
                let p = f(&w);
                w[i] = a[i] - dir;
                let m = f(&w);
                w[i] = a[i];
                d[k] = (p - m) / (2.0 * h * dy);
            }
            Complex64::new(0.5 * d[0], 0.5 * d[1])
        })
        .collect()
}

fn flatten(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

fn finish(form: &str, per_field: Vec<f64>, tol: f64) -> HamiltonianCheck {
    let max_rel_error = per_field.iter().cloned().fold(0.0, f64::max);
    let passed = max_rel_error <= tol;
    let failure = (!passed).then(|| format!("{form}: structural mismatch {max_rel_error:.3e} exceeds {tol:.1e}"));
    HamiltonianCheck { form: form.to_string(), per_field, max_rel_error, passed, failure }
}

/// 𝕍₁ = −(v₂/24)∫X_yy² + (v₃/6)∫X_y³.
pub fn kdv_reduced_hamiltonian(x: &[f64], length: f64, co: &KdvCoefficients) -> f64 {
    let dy = length / x.len() as f64;
    let xy = derivative(x, length, 1);
    let xyy = derivative(x, length, 2);
    dy * xy.iter().zip(&xyy).map(|(a, b)| -0.5 * co.dispersive * b * b + co.nonlinear / 6.0 * a.powi(3)).sum::<f64>()
}

fn kdv_check(co: &KdvCoefficients, o: &HamiltonianOptions) -> Result<Vec<HamiltonianCheck>> {
    let mut rng = seeded_rng(o.seed);
    let dy = o.length / o.ny as f64;
    let mut errs = Vec::new();
    for _ in 0..o.n_fields {
        let x: Vec<f64> = random_bandlimited_values(o.ny, o.ny / 8, &mut rng).iter().map(|v| o.amplitude * v).collect();
        // X_τ = ∫U_τ with U = X_y.
        let xt = antiderivative(&kdv_rhs(&derivative(&x, o.length, 1), o.length, co), o.length);
        let lhs: Vec<f64> = derivative(&xt, o.length, 1).iter().map(|v| -2.0 * co.c * v).collect();
        let grad = fd_gradient(&x, dy, 1e-5 * o.amplitude, |w| kdv_reduced_hamiltonian(w, o.length, co));
        errs.push(rel(&lhs, &grad));
    }
    Ok(vec![finish("kdv: -2c d_y X_tau = grad V1", errs, o.tolerance)])
}

fn nls_check(co: &NlsCoefficients, o: &HamiltonianOptions) -> Result<Vec<HamiltonianCheck>> {
    let mut rng = seeded_rng(o.seed);
    let dy = o.length / o.ny as f64;
    let h = 1e-5 * o.amplitude;
    let (mut complex_errs, mut real_errs) = (Vec::new(), Vec::new());
    let s = 2.0 * PI.sqrt();
    for _ in 0..o.n_fields {
        let a: Vec<Complex64> = random_bandlimited_complex(o.ny, o.ny / 8, &mut rng).iter().map(|z| z * o.amplitude).collect();
        let at = nls_rhs(&a, o.length, co);
        let lhs: Vec<Complex64> = at.iter().map(|z| Complex64::new(0.0, -4.0 * PI * co.omega) * z).collect();
        let grad = fd_wirtinger(&a, dy, h, |w| nls_hamiltonian(w, o.length, co));
        complex_errs.push(rel(&flatten(&lhs), &flatten(&grad)));

        // Same equation in B = 2√π(Re A, −Im A): (−2ωB₂_τ, 2ωB₁_τ) = ∇_B 𝕍.
        let b: Vec<f64> = a.iter().flat_map(|z| [s * z.re, -s * z.im]).collect();
        let bt: Vec<f64> = at.iter().flat_map(|z| [s * z.re, -s * z.im]).collect();
        let lhs_b: Vec<f64> = bt.chunks(2).flat_map(|c| [-2.0 * co.omega * c[1], 2.0 * co.omega * c[0]]).collect();
        let v_of_b = |w: &[f64]| {
            let a: Vec<Complex64> = w.chunks(2).map(|c| Complex64::new(c[0] / s, -c[1] / s)).collect();
            nls_hamiltonian(&a, o.length, co)
        };
        let grad_b = fd_gradient(&b, dy, h * s, v_of_b);
        real_errs.push(rel(&lhs_b, &grad_b));
    }
    Ok(vec![
        finish("nls: -4 pi i omega A_tau = dV/dconj(A)", complex_errs, o.tolerance),
        finish("nls: (-2 omega B2_tau, 2 omega B1_tau) = grad_B V", real_errs, o.tolerance),
    ])
}

fn twi_check(co: &TwiCoefficients, o: &HamiltonianOptions) -> Result<Vec<HamiltonianCheck>> {
    let mut rng = seeded_rng(o.seed);
    let dy = o.length / o.ny as f64;
    let h = 1e-5 * o.amplitude;
    let mut errs = Vec::new();
    for _ in 0..o.n_fields {
        let a: Vec<Vec<Complex64>> = (0..3)
            .map(|_| random_bandlimited_complex(o.ny, o.ny / 8, &mut rng).iter().map(|z| z * o.amplitude).collect())
            .collect();
        let at = threewave_rhs(&a, o.length, co);
        let mut lhs = Vec::new();
        let mut grad = Vec::new();
        for n in 0..3 {
            lhs.extend(flatten(&at[n].iter().map(|z| Complex64::new(0.0, -2.0 * co.omega[n]) * z).collect::<Vec<_>>()));
            let g = fd_wirtinger(&a[n], dy, h, |w| {
                let mut b = a.clone();
                b[n] = w.to_vec();
                threewave_hamiltonian(&b, o.length, co)
            });
            grad.extend(flatten(&g));
        }
        errs.push(rel(&lhs, &grad));
    }
    Ok(vec![finish("twi: -2i omega_n A_n_tau = dV/dconj(A_n)", errs, o.tolerance)])
}

/// Checks Σ^red(Z_τ, ·) = d𝕳^red on seeded random band-limited fields.
pub fn verify_reduced_hamiltonian_equation(coeffs: &ReducedCoefficients, opts: &HamiltonianOptions) -> Result<Vec<HamiltonianCheck>> {
    match coeffs {
        ReducedCoefficients::Kdv(c) => kdv_check(c, opts),
        ReducedCoefficients::Nls(c) => nls_check(c, opts),
        ReducedCoefficients::Twi(c) => twi_check(c, opts),
    }
}
