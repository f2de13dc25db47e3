use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ScalingSpec;
use crate::error::{Error, Result};
use crate::expansion::{KdvCoefficients, NlsCoefficients, TwiCoefficients};
use crate::macro_pde::{kdv_rhs, nls_rhs, threewave_rhs};
use crate::potentials_dispersion::PotentialSpec;
use crate::spectral::{antiderivative, derivative, derivative_complex, interpolate_shifted_complex, to_complex};

/// One phase harmonic f(τ, y)e^{ik·φ} of X with its first two τ-derivatives,
/// sampled on the macroscopic solver grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub k: Vec<i64>,
    pub f: Vec<Complex64>,
    pub f_tau: Vec<Complex64>,
    pub f_tautau: Vec<Complex64>,
}

/// X(τ, y, φ) = Σ f_k(y) e^{ik·φ} at a fixed τ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacroSnapshot {
    pub length: f64,
    pub tau: f64,
    pub terms: Vec<HarmonicTerm>,
}

fn conj(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().map(|z| z.conj()).collect()
}

fn with_conjugate(out: &mut Vec<HarmonicTerm>, k: Vec<i64>, f: Vec<Complex64>, ft: Vec<Complex64>, ftt: Vec<Complex64>) {
    let kc = k.iter().map(|v| -v).collect();
    out.push(HarmonicTerm { k: kc, f: conj(&f), f_tau: conj(&ft), f_tautau: conj(&ftt) });
    out.push(HarmonicTerm { k, f, f_tau: ft, f_tautau: ftt });
}

impl MacroSnapshot {
    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.f.iter().chain(&t.f_tau).all(|z| z.norm() == 0.0))
    }

    /// p-system state: X = ∫R (mean zero), X_τ = W, X_ττ = ∂_yΦ₁′(R).
    pub fn we(r: &[f64], w: &[f64], length: f64, spec: &PotentialSpec, tau: f64) -> Result<Self> {
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        if mean.abs() > 1e-12 * (1.0 + r.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            return Err(Error::Precondition(format!("strain has mean {mean:.3e}; the ring needs periodic X")));
        }
        let x = antiderivative(r, length);
        let flux: Vec<f64> = r.iter().map(|&v| spec.pair_d(v)).collect();
        let xtt = derivative(&flux, length, 1);
        Ok(MacroSnapshot {
            length,
            tau,
            terms: vec![HarmonicTerm { k: vec![], f: to_complex(&x), f_tau: to_complex(w), f_tautau: to_complex(&xtt) }],
        })
    }

    /// KdV state from the strain U: 2cX_τ = aX_yyy + (b/2)X_y².
    pub fn kdv(u: &[f64], length: f64, co: &KdvCoefficients, tau: f64) -> Result<Self> {
        let mean = u.iter().sum::<f64>() / u.len() as f64;
        if mean.abs() > 1e-12 * (1.0 + u.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            return Err(Error::Precondition(format!("strain has mean {mean:.3e}; the ring needs periodic X")));
        }
        let x = antiderivative(u, length);
        let n = u.len() as f64;
        // U_τ integrates to X_τ up to its mean, which is (b/2)⟨U²⟩/(2c).
        let xt_mean = co.nonlinear * 0.5 * u.iter().map(|v| v * v).sum::<f64>() / n / (2.0 * co.c);
        let ut = kdv_rhs(u, length, co);
        let xt: Vec<f64> = antiderivative(&ut, length).iter().map(|v| v + xt_mean).collect();
        let xty = derivative(&xt, length, 1);
        let xty3 = derivative(&xty, length, 2);
        let xtt: Vec<f64> =
            (0..u.len()).map(|i| (co.dispersive * xty3[i] + co.nonlinear * u[i] * xty[i]) / (2.0 * co.c)).collect();
        Ok(MacroSnapshot {
            length,
            tau,
            terms: vec![HarmonicTerm { k: vec![], f: to_complex(&x), f_tau: to_complex(&xt), f_tautau: to_complex(&xtt) }],
        })
    }

    /// X = A e^{iφ} + c.c., plus ε(C₁A²e^{2iφ} + c.c. − (v₃/v₂)|A|²) if `correction_eps` is set.
    pub fn nls(a: &[Complex64], length: f64, co: &NlsCoefficients, correction_eps: Option<f64>, tau: f64) -> Self {
        let i = Complex64::i();
        let at = nls_rhs(a, length, co);
        // A_ττ = F′(A)[A_τ] for F(A) = −i(ρ₁/2ω)A_yy + i(ρ₂/ω)|A|²A.
        let atyy = derivative_complex(&at, length, 2);
        let att: Vec<Complex64> = (0..a.len())
            .map(|j| {
                -i * (co.rho1 / (2.0 * co.omega)) * atyy[j]
                    + i * (co.rho2 / co.omega) * (2.0 * a[j].norm_sqr() * at[j] + a[j] * a[j] * at[j].conj())
            })
            .collect();
        let mut terms = Vec::new();
        if let Some(eps) = correction_eps {
            let c1 = eps * co.c1;
            let f2: Vec<Complex64> = a.iter().map(|z| c1 * z * z).collect();
            let f2t: Vec<Complex64> = a.iter().zip(&at).map(|(z, zt)| 2.0 * c1 * z * zt).collect();
            let f2tt: Vec<Complex64> = (0..a.len()).map(|j| 2.0 * c1 * (at[j] * at[j] + a[j] * att[j])).collect();
            with_conjugate(&mut terms, vec![2], f2, f2t, f2tt);
            let m = -eps * co.v3 / co.v2;
            let f0 = a.iter().map(|z| Complex64::new(m * z.norm_sqr(), 0.0)).collect();
            let f0t = a.iter().zip(&at).map(|(z, zt)| Complex64::new(2.0 * m * (z.conj() * zt).re, 0.0)).collect();
            let f0tt = (0..a.len())
                .map(|j| Complex64::new(2.0 * m * (at[j].norm_sqr() + (a[j].conj() * att[j]).re), 0.0))
                .collect();
            terms.push(HarmonicTerm { k: vec![0], f: f0, f_tau: f0t, f_tautau: f0tt });
        }
        with_conjugate(&mut terms, vec![1], a.to_vec(), at, att);
        MacroSnapshot { length, tau, terms }
    }

    /// X = Σₙ Aₙe^{iφₙ} + c.c.
    pub fn twi(a: &[Vec<Complex64>], length: f64, co: &TwiCoefficients, tau: f64) -> Self {
        let i = Complex64::i();
        let at = threewave_rhs(a, length, co);
        let mut terms = Vec::new();
        for n in 0..3 {
            let (p, q) = ((n + 1) % 3, (n + 2) % 3);
            let f = i * co.v3 / (2.0 * co.omega[n]);
            let aty = derivative_complex(&at[n], length, 1);
            // A_ττ = ω′A_τy + f(Ā_pτĀ_q + Ā_pĀ_qτ).
            let att: Vec<Complex64> = (0..a[n].len())
                .map(|j| co.omega_prime[n] * aty[j] + f * (at[p][j].conj() * a[q][j].conj() + a[p][j].conj() * at[q][j].conj()))
                .collect();
            let mut k = vec![0; 3];
            k[n] = 1;
            with_conjugate(&mut terms, k, a[n].clone(), at[n].clone(), att);
        }
        MacroSnapshot { length, tau, terms }
    }
}

/// Which time derivative of x_j to reconstruct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    Position,
    Velocity,
    Acceleration,
}

/// x_j, ẋ_j or ẍ_j of the ansatz at microscopic time t, with
/// d/dt = ε^β∂_τ − εs∂_y + ω·∂_φ applied term by term.
pub fn reconstruct(snap: &MacroSnapshot, scaling: &ScalingSpec, t: f64, which: Derivative) -> Result<Vec<f64>> {
    if (snap.length - scaling.length).abs() > 1e-12 * scaling.length {
        return Err(Error::Incommensurate(format!("macro box {} differs from the lattice box {}", snap.length, scaling.length)));
    }
    let n = scaling.n;
    let eps = scaling.eps;
    let eb = scaling.time_scale();
    let s = scaling.drift;
    let y0 = scaling.frame_offset(t);
    let pre = eps.powi(scaling.alpha);
    let i = Complex64::i();
    let mut out = vec![0.0; n];
    for term in &snap.terms {
        if term.k.len() != scaling.carriers.len() {
            return Err(Error::ShapeMismatch(format!(
                "harmonic has {} phase indices, scaling has {} carriers",
                term.k.len(),
                scaling.carriers.len()
            )));
        }
        let kw: f64 = term.k.iter().zip(&scaling.carriers).map(|(k, c)| *k as f64 * c.omega).sum();
        let kt: f64 = term.k.iter().zip(&scaling.carriers).map(|(k, c)| *k as f64 * c.theta).sum();
        let l = snap.length;
        let profile: Vec<Complex64> = match which {
            Derivative::Position => term.f.clone(),
            Derivative::Velocity => {
                let fy = derivative_complex(&term.f, l, 1);
                (0..term.f.len()).map(|j| eb * term.f_tau[j] - eps * s * fy[j] + i * kw * term.f[j]).collect()
            }
            Derivative::Acceleration => {
                let fy = derivative_complex(&term.f, l, 1);
                let fyy = derivative_complex(&term.f, l, 2);
                let fty = derivative_complex(&term.f_tau, l, 1);
                (0..term.f.len())
                    .map(|j| {
                        eb * eb * term.f_tautau[j] + eps * eps * s * s * fyy[j] - kw * kw * term.f[j]
                            - 2.0 * eb * eps * s * fty[j]
                            + 2.0 * i * eb * kw * term.f_tau[j]
                            - 2.0 * i * eps * s * kw * fy[j]
                    })
                    .collect()
            }
        };
        let on_sites = interpolate_shifted_complex(&profile, l, y0, n);
        let phase0: f64 = kw * t;
        for j in 0..n {
            out[j] += (on_sites[j] * Complex64::from_polar(1.0, phase0 + kt * j as f64)).re;
        }
    }
    out.iter_mut().for_each(|v| *v *= pre);
    Ok(out)
}
