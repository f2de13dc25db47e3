use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ScalingSpec;
use crate::chain::ChainState;
use crate::error::{Error, Result};
use crate::functionals::Reduction;
use crate::spectral::{derivative, fft, interpolate_shifted_complex, tail_ratio, to_complex};

/// Tail level (relative to the peak mode) that triggers the aliasing warning.
pub const ALIASING_TAIL: f64 = 0.01;

/// Macroscopic fields recovered from a chain state on the n_macro grid:
/// WE → (R, W), KdV → U, nlS → A, TWI → (A₁, A₂, A₃).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Demodulated {
    pub t: f64,
    pub tau: f64,
    pub fields: Vec<Vec<Complex64>>,
    pub tail_ratio: f64,
    pub aliasing_warning: bool,
}

/// Numerical inverse of the two-scale map at microscopic time t.
pub fn demodulate(state: &ChainState, scaling: &ScalingSpec, t: f64) -> Result<Demodulated> {
    let n = scaling.n;
    if state.n() != n {
        return Err(Error::ShapeMismatch(format!("chain has {} sites, scaling expects {n}", state.n())));
    }
    let eps = scaling.eps;
    let l = scaling.length;
    // Chain samples live at p = εj; slow coordinate Y = p + y₀.
    let back = -scaling.frame_offset(t);
    let nm = scaling.n_macro;
    let to_macro = |z: Vec<Complex64>| interpolate_shifted_complex(&z, l, back, nm);
    let fields: Vec<Vec<Complex64>> = match scaling.reduction {
        Reduction::We => {
            let x: Vec<f64> = state.x.iter().map(|v| eps * v).collect();
            vec![to_macro(to_complex(&derivative(&x, l, 1))), to_macro(to_complex(&state.v))]
        }
        Reduction::Kdv => {
            let x: Vec<f64> = state.x.iter().map(|v| v / eps).collect();
            vec![to_macro(to_complex(&derivative(&x, l, 1)))]
        }
        Reduction::Nls | Reduction::Twi => {
            let pre = eps.powi(-scaling.alpha);
            scaling
                .carriers
                .iter()
                .map(|c| {
                    let z = (0..n)
                        .map(|j| pre * state.x[j] * Complex64::from_polar(1.0, -(c.omega * t + c.theta * j as f64)))
                        .collect();
                    to_macro(z)
                })
                .collect()
        }
    };
    // Measured against the largest peak over all fields, so a field that is
    // still empty does not report its round-off spectrum as a tail.
    let peaks: Vec<f64> = fields.iter().map(|f| fft(f).iter().map(|z| z.norm()).fold(0.0, f64::max)).collect();
    let top = peaks.iter().copied().fold(0.0, f64::max);
    let tail = if top > 0.0 {
        fields.iter().zip(&peaks).map(|(f, p)| tail_ratio(f, (nm / 4) as i64) * p / top).fold(0.0, f64::max)
    } else {
        0.0
    };
    Ok(Demodulated { t, tau: t * scaling.time_scale(), fields, tail_ratio: tail, aliasing_warning: tail > ALIASING_TAIL })
}

/// Temporal slowness of a sequence of demodulated snapshots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulationCheck {
    /// Largest phase rotation rate of ⟨z_k, z_{k+1}⟩ per unit microscopic time.
    pub rate: f64,
    pub threshold: f64,
    pub slow: bool,
}

/// Flags modulation that is fast on the microscopic time scale, as produced
/// by a carrier mismatch: a slow envelope rotates at a rate O(ε^β), a wrong
/// carrier at the beat frequency.
pub fn modulation_check(series: &[Demodulated], scaling: &ScalingSpec) -> Result<ModulationCheck> {
    if series.len() < 2 {
        return Err(Error::InvalidParameter("need at least two snapshots".into()));
    }
    let mut rate: f64 = 0.0;
    for w in series.windows(2) {
        let dt = w[1].t - w[0].t;
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter("snapshots must be ordered in time".into()));
        }
        for (a, b) in w[0].fields.iter().zip(&w[1].fields) {
            let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
            if ip.norm() > 0.0 {
                rate = rate.max(ip.arg().abs() / dt);
            }
        }
    }
    let threshold = scaling.time_scale();
    Ok(ModulationCheck { rate, threshold, slow: rate <= threshold })
}
