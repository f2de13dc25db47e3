use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials_dispersion::PotentialSpec;
use crate::spectral::integrate;

/// Strain R = X_y and velocity W = X_τ on a periodic grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PSystemState {
    pub r: Vec<f64>,
    pub w: Vec<f64>,
    pub tau: f64,
    pub length: f64,
}

impl PSystemState {
    pub fn new(r: Vec<f64>, w: Vec<f64>, length: f64) -> Result<Self> {
        if r.len() != w.len() || r.len() < 4 {
            return Err(Error::ShapeMismatch(format!("|R| = {}, |W| = {}", r.len(), w.len())));
        }
        Ok(PSystemState { r, w, tau: 0.0, length })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PSystemOptions {
    pub cfl: f64,
    /// Spacing of recorded snapshots and energy samples.
    pub output_interval: f64,
    /// Shock flag: max|Δ_yR|/Δy reaches this multiple of its initial value.
    pub gradient_amplification: f64,
    /// Energy-loss rate (relative to E(0), per unit τ) that marks dissipation.
    pub dissipation_rate: f64,
}

impl Default for PSystemOptions {
    fn default() -> Self {
        PSystemOptions { cfl: 0.45, output_interval: 0.5, gradient_amplification: 5.0, dissipation_rate: 1e-3 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PSystemResult {
    pub snapshots: Vec<PSystemState>,
    /// (τ, E(τ)) at every output time.
    pub energy: Vec<(f64, f64)>,
    pub shock_time: Option<f64>,
    pub dissipation_onset: Option<f64>,
    /// max|Δ_yR|/Δy at every output time.
    pub max_gradient: Vec<f64>,
    pub steps: usize,
}

impl PSystemResult {
    pub fn final_state(&self) -> &PSystemState {
        self.snapshots.last().expect("at least the initial snapshot")
    }
}

/// Macroscopic energy ∫ ½W² + Φ₁(R).
pub fn psystem_energy(state: &PSystemState, spec: &PotentialSpec) -> f64 {
    let e: Vec<f64> = state.r.iter().zip(&state.w).map(|(&r, &w)| 0.5 * w * w + spec.pair(r)).collect();
    integrate(&e, state.length)
}

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

fn max_speed(r: &[f64], spec: &PotentialSpec) -> Result<f64> {
    let mut m: f64 = 0.0;
    for &ri in r {
        let c2 = spec.pair_dd(ri);
        if !(c2 > 0.0) {
            return Err(Error::Ellipticity { r: ri, value: c2 });
        }
        m = m.max(c2.sqrt());
    }
    Ok(m)
}

/// Semi-discrete right-hand side of R_τ = W_y, W_τ = Φ₁′(R)_y with
/// minmod-limited local Lax–Friedrichs fluxes.
fn rhs(r: &[f64], w: &[f64], dy: f64, spec: &PotentialSpec, dr: &mut [f64], dw: &mut [f64]) -> Result<()> {
    let n = r.len();
    let slope = |u: &[f64], i: usize| minmod(u[i] - u[(i + n - 1) % n], u[(i + 1) % n] - u[i]);
    let sr: Vec<f64> = (0..n).map(|i| slope(r, i)).collect();
    let sw: Vec<f64> = (0..n).map(|i| slope(w, i)).collect();
    // Flux of the conservative form U_τ + F(U)_y = 0 with F = (−W, −Φ₁′(R)).
    let mut flux_r = vec![0.0; n];
    let mut flux_w = vec![0.0; n];
    for i in 0..n {
        let ip = (i + 1) % n;
        let (rl, wl) = (r[i] + 0.5 * sr[i], w[i] + 0.5 * sw[i]);
        let (rr, wr) = (r[ip] - 0.5 * sr[ip], w[ip] - 0.5 * sw[ip]);
        let cl = spec.pair_dd(rl);
        let cr = spec.pair_dd(rr);
        if !(cl > 0.0) {
            return Err(Error::Ellipticity { r: rl, value: cl });
        }
        if !(cr > 0.0) {
            return Err(Error::Ellipticity { r: rr, value: cr });
        }
        let a = cl.sqrt().max(cr.sqrt());
        flux_r[i] = 0.5 * (-wl - wr) - 0.5 * a * (rr - rl);
        flux_w[i] = 0.5 * (-spec.pair_d(rl) - spec.pair_d(rr)) - 0.5 * a * (wr - wl);
    }
    for i in 0..n {
        let im = (i + n - 1) % n;
        dr[i] = -(flux_r[i] - flux_r[im]) / dy;
        dw[i] = -(flux_w[i] - flux_w[im]) / dy;
    }
    Ok(())
}

fn max_jump(r: &[f64]) -> f64 {
    let n = r.len();
    (0..n).map(|i| (r[(i + 1) % n] - r[i]).abs()).fold(0.0, f64::max)
}

/// Finite-volume solution of the p-system up to `tau_end`.
pub fn solve_psystem(init: &PSystemState, spec: &PotentialSpec, tau_end: f64, opts: &PSystemOptions) -> Result<PSystemResult> {
    if !(opts.cfl > 0.0 && opts.cfl <= 1.0) {
        return Err(Error::Cfl(format!("CFL number {} outside (0, 1]", opts.cfl)));
    }
    let n = init.r.len();
    let dy = init.length / n as f64;
    max_speed(&init.r, spec)?;
    if !(opts.gradient_amplification > 1.0) {
        return Err(Error::InvalidParameter("gradient amplification must exceed 1".into()));
    }
    let jump_limit = opts.gradient_amplification * max_jump(&init.r);
    let e0 = psystem_energy(init, spec);

    let mut s = init.clone();
    let mut snapshots = vec![s.clone()];
    let mut energy = vec![(s.tau, e0)];
    let mut max_gradient = vec![max_jump(&s.r) / dy];
    let mut shock_time = None;
    let mut dissipation_onset = None;
    let mut steps = 0usize;
    let (mut k1r, mut k1w, mut k2r, mut k2w) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut next_out = opts.output_interval.min(tau_end);
    while s.tau < tau_end - 1e-12 {
        let a = max_speed(&s.r, spec)?;
        let mut dt = opts.cfl * dy / a;
        let mut hit_output = false;
        if s.tau + dt >= next_out - 1e-12 {
            dt = next_out - s.tau;
            hit_output = true;
        }
        rhs(&s.r, &s.w, dy, spec, &mut k1r, &mut k1w)?;
        let r1: Vec<f64> = (0..n).map(|i| s.r[i] + dt * k1r[i]).collect();
        let w1: Vec<f64> = (0..n).map(|i| s.w[i] + dt * k1w[i]).collect();
        rhs(&r1, &w1, dy, spec, &mut k2r, &mut k2w)?;
        for i in 0..n {
            s.r[i] = 0.5 * (s.r[i] + r1[i] + dt * k2r[i]);
            s.w[i] = 0.5 * (s.w[i] + w1[i] + dt * k2w[i]);
        }
        s.tau += dt;
        steps += 1;
        if shock_time.is_none() && jump_limit > 0.0 && max_jump(&s.r) >= jump_limit {
            shock_time = Some(s.tau);
        }
        if hit_output {
            s.tau = next_out;
            let e = psystem_energy(&s, spec);
            let (tp, ep) = *energy.last().expect("nonempty");
            if dissipation_onset.is_none() && e0 > 0.0 && (ep - e) / (e0 * (s.tau - tp)) > opts.dissipation_rate {
                dissipation_onset = Some(s.tau);
            }
            energy.push((s.tau, e));
            max_gradient.push(max_jump(&s.r) / dy);
            snapshots.push(s.clone());
            next_out = (next_out + opts.output_interval).min(tau_end);
        }
    }
    Ok(PSystemResult { snapshots, energy, shock_time, dissipation_onset, max_gradient, steps })
}
