use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{output_times, substeps};
use crate::error::{Error, Result};
use crate::expansion::KdvCoefficients;
use crate::spectral::{antiderivative, derivative, fft_real, ifft_real, integrate, mode, tail_ratio, to_complex, wavenumbers};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KdvOptions {
    pub dt: f64,
    pub output_interval: f64,
    /// Blow-up flag: largest mode with |m| > Ny/4 relative to the peak mode.
    pub blowup_ratio: f64,
}

impl Default for KdvOptions {
    fn default() -> Self {
        KdvOptions { dt: 1e-3, output_interval: 0.1, blowup_ratio: 1e-3 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KdvTrajectory {
    pub length: f64,
    pub times: Vec<f64>,
    /// Strain U = X_y at each output time.
    pub u: Vec<Vec<f64>>,
    /// Displacement X with zero mean.
    pub x: Vec<Vec<f64>>,
    pub mass: Vec<f64>,
    pub l2: Vec<f64>,
    pub steps: usize,
}

/// U_τ for 2cU_τ = aU_yyy + bUU_y, evaluated spectrally.
pub fn kdv_rhs(u: &[f64], length: f64, co: &KdvCoefficients) -> Vec<f64> {
    let u3 = derivative(u, length, 3);
    let uy = derivative(u, length, 1);
    (0..u.len()).map(|i| (co.dispersive * u3[i] + co.nonlinear * u[i] * uy[i]) / (2.0 * co.c)).collect()
}

fn check(co: &KdvCoefficients) -> Result<()> {
    if !(co.c.is_finite() && co.c != 0.0) {
        return Err(Error::InvalidParameter("KdV frame speed must be nonzero".into()));
    }
    Ok(())
}

/// Dealiased transform of the nonlinear term (b/2c)(U²/2)_y, given Û.
fn nonlinear(uh: &[Complex64], k: &[f64], beta: f64) -> Vec<Complex64> {
    let n = uh.len();
    let u = ifft_real(uh.to_vec());
    let sq: Vec<f64> = u.iter().map(|v| 0.5 * v * v).collect();
    let mut s = fft_real(&sq);
    for i in 0..n {
        s[i] = if 3 * mode(i, n).unsigned_abs() as usize > n { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, beta * k[i]) * s[i] };
    }
    s
}

/// Integrating-factor RK4 for the strain equation, starting from U₀.
pub fn solve_kdv_strain(u0: &[f64], length: f64, co: &KdvCoefficients, tau_end: f64, opts: &KdvOptions) -> Result<KdvTrajectory> {
    check(co)?;
    let n = u0.len();
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("KdV grid size {n} must be a power of two ≥ 8")));
    }
    let k = wavenumbers(n, length);
    let alpha = co.dispersive / (2.0 * co.c);
    let beta = co.nonlinear / (2.0 * co.c);
    let times = output_times(tau_end, opts.output_interval);

    let mut uh = fft_real(u0);
    for (i, z) in uh.iter_mut().enumerate() {
        if 3 * mode(i, n).unsigned_abs() as usize > n {
            *z = Complex64::new(0.0, 0.0);
        }
    }
    let mut out = KdvTrajectory { length, times: times.clone(), u: vec![], x: vec![], mass: vec![], l2: vec![], steps: 0 };
    let record = |uh: &[Complex64], out: &mut KdvTrajectory| {
        let u = ifft_real(uh.to_vec());
        out.mass.push(integrate(&u, length));
        out.l2.push(integrate(&u.iter().map(|v| v * v).collect::<Vec<_>>(), length));
        out.x.push(antiderivative(&u, length));
        out.u.push(u);
    };
    record(&uh, &mut out);
    for w in times.windows(2) {
        let (m, h) = substeps(w[1] - w[0], opts.dt);
        // L(k) = α(ik)³; the Nyquist mode is already zero.
        let e: Vec<Complex64> = k.iter().map(|&kk| (Complex64::new(0.0, -alpha * kk.powi(3)) * (0.5 * h)).exp()).collect();
        let e2: Vec<Complex64> = e.iter().map(|z| z * z).collect();
        for _ in 0..m {
            let a: Vec<Complex64> = nonlinear(&uh, &k, beta).into_iter().map(|z| z * h).collect();
            let tmp: Vec<Complex64> = (0..n).map(|i| e[i] * (uh[i] + 0.5 * a[i])).collect();
            let b: Vec<Complex64> = nonlinear(&tmp, &k, beta).into_iter().map(|z| z * h).collect();
            let tmp: Vec<Complex64> = (0..n).map(|i| e[i] * uh[i] + 0.5 * b[i]).collect();
            let c: Vec<Complex64> = nonlinear(&tmp, &k, beta).into_iter().map(|z| z * h).collect();
            let tmp: Vec<Complex64> = (0..n).map(|i| e2[i] * uh[i] + e[i] * c[i]).collect();
            let d: Vec<Complex64> = nonlinear(&tmp, &k, beta).into_iter().map(|z| z * h).collect();
            for i in 0..n {
                uh[i] = e2[i] * uh[i] + (e2[i] * a[i] + 2.0 * e[i] * (b[i] + c[i]) + d[i]) / 6.0;
            }
            out.steps += 1;
            if uh.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Divergence { step: out.steps });
            }
        }
        let u = ifft_real(uh.clone());
        let ratio = tail_ratio(&to_complex(&u), (n / 4) as i64);
        if ratio > opts.blowup_ratio {
            return Err(Error::BlowUp { tau: w[1], ratio });
        }
        record(&uh, &mut out);
    }
    Ok(out)
}

/// Solves the KdV equation for U = X_y with U₀ = ∂_y X₀.
pub fn solve_kdv(x0: &[f64], length: f64, co: &KdvCoefficients, tau_end: f64, opts: &KdvOptions) -> Result<KdvTrajectory> {
    solve_kdv_strain(&derivative(x0, length, 1), length, co, tau_end, opts)
}
