use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::MacroField;
use crate::potentials_dispersion::{group_velocity, omega, omega_squared, ChainKind, PotentialSpec, Triad};

/// Coefficients of 2cU_τ = (v₂/12)U_yyy + v₃UU_y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KdvCoefficients {
    pub c: f64,
    pub dispersive: f64,
    pub nonlinear: f64,
}

/// Coefficients of 2iωA_τ = ρ₁A_yy − 2ρ₂|A|²A and of the second-order correction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NlsCoefficients {
    pub theta: f64,
    pub omega: f64,
    pub c: f64,
    pub rho1: f64,
    /// ρ₁ recomputed as ΩΩ″ with a five-point finite difference.
    pub rho1_fd: f64,
    pub rho2: f64,
    /// 4ω² − Ω²(2θ).
    pub divisor: f64,
    pub c1: f64,
    /// C₂ = c2_factor·(B₁² + B₂²).
    pub c2_factor: f64,
    pub c_quartic: f64,
    pub v2: f64,
    pub v3: f64,
    pub v4: f64,
}

/// Coefficients of 2iωₙAₙ_τ = 2iωₙωₙ′Aₙ_y − v₃ Āₘ Ā_k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwiCoefficients {
    pub theta: [f64; 3],
    pub omega: [f64; 3],
    pub omega_prime: [f64; 3],
    pub omega_omega_prime: [f64; 3],
    pub v3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reduction", rename_all = "lowercase")]
pub enum ReducedCoefficients {
    Kdv(KdvCoefficients),
    Nls(NlsCoefficients),
    Twi(TwiCoefficients),
}

/// What to extract: the KdV frame speed, the nlS carrier, or the triad.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientRequest {
    Kdv { c: f64 },
    Nls { theta: f64 },
    Twi { triad: Triad },
}

/// ΩΩ″ by a five-point central difference of Ω with step h.
pub fn rho1_finite_difference(theta: f64, spec: &PotentialSpec, h: f64) -> Result<f64> {
    let w = |t: f64| omega(t, spec);
    let d2 = (-w(theta + 2.0 * h)? + 16.0 * w(theta + h)? - 30.0 * w(theta)? + 16.0 * w(theta - h)? - w(theta - 2.0 * h)?)
        / (12.0 * h * h);
    Ok(w(theta)? * d2)
}

pub fn kdv_coefficients(spec: &PotentialSpec, c: f64) -> Result<KdvCoefficients> {
    spec.validate()?;
    let v2 = spec.v2();
    if (c * c - v2).abs() > 1e-12 * (1.0 + v2.abs()) {
        return Err(Error::FrameSpeed { c2: c * c, v2 });
    }
    Ok(KdvCoefficients { c, dispersive: v2 / 12.0, nonlinear: spec.v3() })
}

pub fn nls_coefficients(spec: &PotentialSpec, theta: f64) -> Result<NlsCoefficients> {
    spec.validate()?;
    if spec.kind != ChainKind::Kg || spec.v2() <= 0.0 {
        return Err(Error::Precondition("nlS coefficients need a KG chain with v2 > 0".into()));
    }
    let w = omega(theta, spec)?;
    let c = -group_velocity(theta, spec)?;
    let (v2, v3, v4) = (spec.v2(), spec.v3(), spec.v4());
    let divisor = 4.0 * w * w - omega_squared(2.0 * theta, spec);
    if divisor.abs() <= 1e-10 * (1.0 + w * w) {
        return Err(Error::SmallDivisor(format!(
            "second-harmonic resonance: 4 omega^2 - Omega^2(2 theta) = {divisor:.3e} at theta = {theta}"
        )));
    }
    let rho1 = spec.alpha * theta.cos() - c * c;
    let rho1_fd = rho1_finite_difference(theta, spec, 1e-3)?;
    let rho2 = v4 / 4.0 - v3 * v3 / (2.0 * v2) + v3 * v3 / (4.0 * divisor);
    let c1 = v3 / (2.0 * divisor);
    let c2_factor = -(c1 + v3 / (2.0 * v2)) / (2.0 * std::f64::consts::PI);
    let c_quartic = v3 * v3 / (8.0 * std::f64::consts::PI) * (1.0 / (4.0 * divisor) - 1.0 / (2.0 * v2));
    Ok(NlsCoefficients { theta, omega: w, c, rho1, rho1_fd, rho2, divisor, c1, c2_factor, c_quartic, v2, v3, v4 })
}

pub fn twi_coefficients(spec: &PotentialSpec, triad: &Triad) -> Result<TwiCoefficients> {
    spec.validate()?;
    if triad.residual > 1e-8 {
        return Err(Error::Precondition(format!("triad residual {:.3e} too large", triad.residual)));
    }
    let mut out = TwiCoefficients { theta: [0.0; 3], omega: [0.0; 3], omega_prime: [0.0; 3], omega_omega_prime: [0.0; 3], v3: spec.v3() };
    for (n, p) in triad.p.iter().enumerate() {
        if p.omega == 0.0 {
            return Err(Error::DegenerateDispersion(format!("omega_{} = 0", n + 1)));
        }
        out.theta[n] = p.theta;
        out.omega[n] = p.omega;
        out.omega_omega_prime[n] = spec.alpha * p.theta.sin();
        out.omega_prime[n] = out.omega_omega_prime[n] / p.omega;
    }
    Ok(out)
}

/// Populates the reduced-model coefficients for one reduction.
pub fn extract_reduced_coefficients(spec: &PotentialSpec, req: &CoefficientRequest) -> Result<ReducedCoefficients> {
    match req {
        CoefficientRequest::Kdv { c } => kdv_coefficients(spec, *c).map(ReducedCoefficients::Kdv),
        CoefficientRequest::Nls { theta } => {
            let co = nls_coefficients(spec, *theta)?;
            if (co.rho1 - co.rho1_fd).abs() > 1e-8 {
                return Err(Error::Precondition(format!(
                    "rho1 double entry disagrees: {} vs {}",
                    co.rho1, co.rho1_fd
                )));
            }
            Ok(ReducedCoefficients::Nls(co))
        }
        CoefficientRequest::Twi { triad } => twi_coefficients(spec, triad).map(ReducedCoefficients::Twi),
    }
}

/// Closed-form correction X̂₁ = C₁X₀² + C₂ in terms of A: returns the
/// coefficient C₁A² of e^{2iφ} and the mean part −(v₃/v₂)|A|².
pub fn nls_correction_amplitudes(co: &NlsCoefficients, a: &[Complex64]) -> (Vec<Complex64>, Vec<f64>) {
    let second = a.iter().map(|z| co.c1 * z * z).collect();
    let mean = a.iter().map(|z| -(co.v3 / co.v2) * z.norm_sqr()).collect();
    (second, mean)
}

/// X̂₁ = C₁X₀² + C₂ for a leading-order field X₀ = π^{−1/2}(B₁cos φ + B₂sin φ).
pub fn nls_correction_closed(co: &NlsCoefficients, x0: &MacroField, b1: &[f64], b2: &[f64]) -> Result<MacroField> {
    if x0.phase_dims != 1 || b1.len() != x0.ny || b2.len() != x0.ny {
        return Err(Error::ShapeMismatch("correction needs a one-phase field matching (B1, B2)".into()));
    }
    let np = x0.nphi;
    let mut out = x0.clone();
    for iy in 0..x0.ny {
        let c2 = co.c2_factor * (b1[iy] * b1[iy] + b2[iy] * b2[iy]);
        for ip in 0..np {
            let v = x0.values[iy * np + ip];
            out.values[iy * np + ip] = co.c1 * v * v + c2;
        }
    }
    Ok(out)
}

/// Solves (Ω²(mθ) − m²ω²)X̂_m = [−(v₃/2)X₀²]_m mode by mode in φ, leaving the
/// kernel modes m = ±1 at zero.
pub fn nls_correction_spectral(co: &NlsCoefficients, spec: &PotentialSpec, x0: &MacroField) -> Result<MacroField> {
    if x0.phase_dims != 1 {
        return Err(Error::ShapeMismatch("correction needs a one-phase field".into()));
    }
    let rhs = x0.with_values(x0.values.iter().map(|v| -0.5 * co.v3 * v * v).collect());
    let (w, th) = (co.omega, co.theta);
    let half = x0.nphi as i64 / 2;
    for m in (0..=half).filter(|m| *m != 1) {
        let d = omega_squared(m as f64 * th, spec) - (m * m) as f64 * w * w;
        if d.abs() < 1e-10 {
            return Err(Error::SmallDivisor(format!("phase mode {m} is resonant: divisor {d:.3e}")));
        }
    }
    Ok(rhs.apply_symbol(|_, m, _| {
        if m[0].abs() == 1 {
            return Complex64::new(0.0, 0.0);
        }
        let mf = m[0] as f64;
        Complex64::new(1.0 / (omega_squared(mf * th, spec) - mf * mf * w * w), 0.0)
    }))
}
