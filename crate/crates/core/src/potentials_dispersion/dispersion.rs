use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::potential::PotentialSpec;
use crate::error::{Error, Result};

/// Representative of an angle in [0, 2π).
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance of `theta` to the nearest multiple of 2π.
pub fn angle_distance_to_zero(theta: f64) -> f64 {
    let r = wrap_angle(theta);
    r.min(TAU - r)
}

/// Ω²(θ) = v₂ + 2α(1 − cos θ), with v₂ the on-site curvature.
pub fn omega_squared(theta: f64, spec: &PotentialSpec) -> f64 {
    spec.onsite_v2() + 2.0 * spec.alpha * (1.0 - theta.cos())
}

/// Nonnegative root Ω(θ) of the dispersion relation.
pub fn omega(theta: f64, spec: &PotentialSpec) -> Result<f64> {
    let w2 = omega_squared(theta, spec);
    if w2 < 0.0 {
        return Err(Error::Instability(format!("Omega^2({theta}) = {w2} < 0")));
    }
    Ok(w2.sqrt())
}

/// Ω′(θ) = α sin θ / Ω(θ).
pub fn group_velocity(theta: f64, spec: &PotentialSpec) -> Result<f64> {
    let w = omega(theta, spec)?;
    if w == 0.0 {
        return Err(Error::DegenerateDispersion(format!("Omega({theta}) = 0")));
    }
    Ok(spec.alpha * theta.sin() / w)
}

/// Ω″(θ), from differentiating ΩΩ′ = α sin θ once more.
pub fn omega_second_derivative(theta: f64, spec: &PotentialSpec) -> Result<f64> {
    let w = omega(theta, spec)?;
    let wp = group_velocity(theta, spec)?;
    Ok((spec.alpha * theta.cos() - wp * wp) / w)
}

/// Speed c of the nlS frame on the ω = +Ω branch, so that cω = −Ω′Ω.
pub fn nls_frame_speed(theta: f64, spec: &PotentialSpec) -> Result<f64> {
    Ok(-group_velocity(theta, spec)?)
}

/// A point (θ, ω) of the dispersion set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWave {
    pub theta: f64,
    pub omega: f64,
    pub sign: i8,
}

impl PlaneWave {
    /// Plane wave on the branch ω = sign·Ω(θ); θ is wrapped to [0, 2π).
    pub fn new(theta: f64, sign: i8, spec: &PotentialSpec) -> Result<Self> {
        let s = if sign >= 0 { 1 } else { -1 };
        let w = omega(theta, spec)?;
        Ok(PlaneWave { theta: wrap_angle(theta), omega: f64::from(s) * w, sign: s })
    }

    /// |ω² − Ω²(θ)| relative to 1 + ω².
    pub fn dispersion_defect(&self, spec: &PotentialSpec) -> f64 {
        (self.omega * self.omega - omega_squared(self.theta, spec)).abs() / (1.0 + self.omega * self.omega)
    }

    pub fn is_on_dispersion_set(&self, spec: &PotentialSpec) -> bool {
        self.dispersion_defect(spec) <= 1e-12
    }

    pub fn neg(&self) -> Self {
        PlaneWave { theta: wrap_angle(-self.theta), omega: -self.omega, sign: -self.sign }
    }
}

/// Gaps |m²ω² − Ω²(mθ)| of the nlS non-resonance condition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonResonance {
    pub holds: bool,
    pub argmin_m: i32,
    pub min_gap: f64,
    /// (m, gap) for m = 0, 2, 3, …, M; negative m give identical gaps.
    pub gaps: Vec<(i32, f64)>,
}

/// Checks m²ω² ≠ Ω²(mθ) for m = 0 and 2 ≤ |m| ≤ M with ω = Ω(θ).
pub fn nls_nonresonance(theta: f64, spec: &PotentialSpec, m_max: i32, tol: f64) -> Result<NonResonance> {
    let w = omega(theta, spec)?;
    if w <= 0.0 {
        return Err(Error::Precondition(format!("Omega({theta}) = 0")));
    }
    let gaps: Vec<(i32, f64)> = std::iter::once(0)
        .chain(2..=m_max.max(1))
        .map(|m| {
            let mf = f64::from(m);
            (m, (mf * mf * w * w - omega_squared(mf * theta, spec)).abs())
        })
        .collect();
    let (argmin_m, min_gap) = gaps
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, f64::INFINITY));
    Ok(NonResonance { holds: min_gap > tol, argmin_m, min_gap, gaps })
}
