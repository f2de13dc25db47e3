//! Periodic FPU / KG ring with a Störmer–Verlet integrator.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials_dispersion::{omega, ChainKind, PotentialSpec};

/// Displacements and velocities of a periodic ring.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub t: f64,
    pub spec: PotentialSpec,
}

impl ChainState {
    pub fn new(x: Vec<f64>, v: Vec<f64>, spec: PotentialSpec) -> Result<Self> {
        if x.len() != v.len() {
            return Err(Error::ShapeMismatch(format!("|x| = {} but |v| = {}", x.len(), v.len())));
        }
        if x.len() < 2 {
            return Err(Error::InvalidParameter(format!("ring needs N >= 2, got {}", x.len())));
        }
        spec.validate()?;
        Ok(ChainState { x, v, t: 0.0, spec })
    }

    pub fn zeros(n: usize, spec: PotentialSpec) -> Result<Self> {
        Self::new(vec![0.0; n], vec![0.0; n], spec)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn momentum(&self) -> f64 {
        self.v.iter().sum()
    }
}

/// Writes f_j = Φ₁′(x_{j+s}−x_j) − Φ₁′(x_j−x_{j−s}) − Φ₀′(x_j) into `out`,
/// using `bonds` as scratch.
fn force_stride(spec: &PotentialSpec, x: &[f64], stride: usize, bonds: &mut [f64], out: &mut [f64]) {
    let n = x.len();
    let s = stride % n;
    for j in 0..n {
        bonds[j] = spec.pair_d(x[(j + s) % n] - x[j]);
    }
    let fpu = spec.kind == ChainKind::Fpu;
    for j in 0..n {
        let onsite = if fpu { 0.0 } else { spec.onsite_d(x[j]) };
        out[j] = bonds[j] - bonds[(j + n - s) % n] - onsite;
    }
}

/// Net force on every site.
pub fn force(state: &ChainState) -> Vec<f64> {
    let mut out = vec![0.0; state.n()];
    let mut bonds = vec![0.0; state.n()];
    force_stride(&state.spec, &state.x, 1, &mut bonds, &mut out);
    out
}

/// Total energy H = ½Σv² + Σ[Φ₁(x_{j+1}−x_j) + Φ₀(x_j)].
pub fn total_energy(state: &ChainState) -> f64 {
    let n = state.n();
    let spec = &state.spec;
    let mut h = 0.0;
    for j in 0..n {
        let r = state.x[(j + 1) % n] - state.x[j];
        h += 0.5 * state.v[j] * state.v[j] + spec.pair(r) + spec.onsite(state.x[j]);
    }
    h
}

fn verlet_stride(state: &ChainState, dt: f64, n_steps: usize, stride: usize) -> Result<ChainState> {
    if dt == 0.0 || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!("time step must be finite and nonzero, got {dt}")));
    }
    let mut s = state.clone();
    let n = s.n();
    let mut f = vec![0.0; n];
    let mut bonds = vec![0.0; n];
    force_stride(&s.spec, &s.x, stride, &mut bonds, &mut f);
    let h = 0.5 * dt;
    for step in 0..n_steps {
        for j in 0..n {
            s.v[j] += h * f[j];
            s.x[j] += dt * s.v[j];
        }
        force_stride(&s.spec, &s.x, stride, &mut bonds, &mut f);
        let mut acc = 0.0;
        for j in 0..n {
            s.v[j] += h * f[j];
            acc += s.x[j] + s.v[j];
        }
        if !acc.is_finite() {
            return Err(Error::Divergence { step: step + 1 });
        }
    }
    s.t = state.t + dt * n_steps as f64;
    Ok(s)
}

/// Advances by `n_steps` kick–drift–kick steps; a negative `dt` integrates
/// backwards in time.
pub fn step_verlet(state: &ChainState, dt: f64, n_steps: usize) -> Result<ChainState> {
    verlet_stride(state, dt, n_steps, 1)
}

/// Reusable integrator that keeps the force of the current state cached.
pub struct Verlet {
    pub state: ChainState,
    pub dt: f64,
    f: Vec<f64>,
    bonds: Vec<f64>,
    steps_taken: usize,
    t0: f64,
}

impl Verlet {
    pub fn new(state: ChainState, dt: f64) -> Result<Self> {
        if dt == 0.0 || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("time step must be finite and nonzero, got {dt}")));
        }
        let mut f = vec![0.0; state.n()];
        let mut bonds = vec![0.0; state.n()];
        force_stride(&state.spec, &state.x, 1, &mut bonds, &mut f);
        let t0 = state.t;
        Ok(Verlet { state, dt, f, bonds, steps_taken: 0, t0 })
    }

    pub fn advance(&mut self, n_steps: usize) -> Result<()> {
        let n = self.state.n();
        let (dt, h) = (self.dt, 0.5 * self.dt);
        for _ in 0..n_steps {
            let s = &mut self.state;
            for j in 0..n {
                s.v[j] += h * self.f[j];
                s.x[j] += dt * s.v[j];
            }
            force_stride(&s.spec, &s.x, 1, &mut self.bonds, &mut self.f);
            let mut acc = 0.0;
            for j in 0..n {
                s.v[j] += h * self.f[j];
                acc += s.x[j] + s.v[j];
            }
            self.steps_taken += 1;
            if !acc.is_finite() {
                return Err(Error::Divergence { step: self.steps_taken });
            }
        }
        self.state.t = self.t0 + dt * self.steps_taken as f64;
        Ok(())
    }

    /// Changes the step size from the current time on.
    pub fn set_dt(&mut self, dt: f64) -> Result<()> {
        if dt == 0.0 || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("time step must be finite and nonzero, got {dt}")));
        }
        self.t0 = self.state.t;
        self.steps_taken = 0;
        self.dt = dt;
        Ok(())
    }

    /// Acceleration of the current state.
    pub fn acceleration(&self) -> &[f64] {
        &self.f
    }
}

/// Largest plane-wave frequency, max(Ω(0), Ω(π)).
pub fn omega_max(spec: &PotentialSpec) -> Result<f64> {
    Ok(omega(0.0, spec)?.max(omega(PI, spec)?))
}

/// min(0.05, 0.2/Ω_max).
pub fn default_dt(spec: &PotentialSpec) -> Result<f64> {
    Ok(0.05f64.min(0.2 / omega_max(spec)?))
}

/// Nearest ring wave number 2πm/N; returns (m, θ_snapped).
pub fn snap_theta(theta: f64, n: usize) -> (i64, f64) {
    let m = (theta * n as f64 / TAU).round() as i64;
    let m = m.rem_euclid(n as i64);
    (m, TAU * m as f64 / n as f64)
}

/// Plane wave x_j = 2a cos(θj), v_j = −2aΩ sin(θj) with θ snapped to the ring.
pub fn plane_wave_state(spec: &PotentialSpec, n: usize, theta: f64, amplitude: f64) -> Result<(ChainState, f64)> {
    let (_, th) = snap_theta(theta, n);
    let w = omega(th, spec)?;
    let x = (0..n).map(|j| 2.0 * amplitude * (th * j as f64).cos()).collect();
    let v = (0..n).map(|j| -2.0 * amplitude * w * (th * j as f64).sin()).collect();
    Ok((ChainState::new(x, v, spec.clone())?, th))
}

/// Result of the cell-periodic ballistic run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseC1Summary {
    pub cells: usize,
    pub samples_per_cell: usize,
    pub steps: usize,
    pub dt: f64,
    pub t_end: f64,
    pub max_deviation: f64,
}

/// Discrete wave equation on M unit cells sampled at S points each, where the
/// lattice Laplacian couples samples one cell apart. Data repeating from cell
/// to cell have zero Laplacian and must move ballistically; returns the
/// largest deviation from x(0) + t·v(0) over sampled times up to `t_end`.
pub fn case_c1_demo<F>(
    spec: &PotentialSpec,
    cells: usize,
    samples_per_cell: usize,
    cell_value_fn: F,
    t_end: f64,
    dt: f64,
) -> Result<CaseC1Summary>
where
    F: Fn(usize) -> (f64, f64),
{
    if spec.kind != ChainKind::Fpu || !spec.is_linear() {
        return Err(Error::Precondition("requires Phi0 = 0 and a harmonic pair potential".into()));
    }
    if cells < 1 || samples_per_cell < 1 || cells * samples_per_cell < 2 {
        return Err(Error::InvalidParameter("need at least two lattice samples".into()));
    }
    let (x0, v0): (Vec<f64>, Vec<f64>) =
        (0..cells * samples_per_cell).map(|j| cell_value_fn(j % samples_per_cell)).unzip();
    let init = ChainState::new(x0.clone(), v0.clone(), spec.clone())?;
    case_c1_run(&init, samples_per_cell, t_end, dt).map(|(steps, dev)| CaseC1Summary {
        cells,
        samples_per_cell,
        steps,
        dt,
        t_end,
        max_deviation: dev,
    })
}

/// Runs prescribed initial data, which must repeat with period `stride`.
pub fn case_c1_run(init: &ChainState, stride: usize, t_end: f64, dt: f64) -> Result<(usize, f64)> {
    let n = init.n();
    if stride == 0 || n % stride != 0 {
        return Err(Error::Precondition(format!("ring of {n} samples is not a union of cells of {stride}")));
    }
    for j in 0..n {
        let k = (j + stride) % n;
        if init.x[j] != init.x[k] || init.v[j] != init.v[k] {
            return Err(Error::Precondition(format!("data differ between cells at sample {j}")));
        }
    }
    let steps = (t_end / dt).round() as usize;
    let chunk = (steps / 100).max(1);
    let mut s = init.clone();
    let mut done = 0;
    let mut dev: f64 = 0.0;
    while done < steps {
        let k = chunk.min(steps - done);
        s = verlet_stride(&s, dt, k, stride)?;
        done += k;
        let t = dt * done as f64;
        for j in 0..n {
            dev = dev.max((s.x[j] - (init.x[j] + t * init.v[j])).abs());
            dev = dev.max((s.v[j] - init.v[j]).abs());
        }
    }
    Ok((steps, dev))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_translation() {
        let spec = PotentialSpec::fpu(1.0, 1.0, 1.0);
        let s = ChainState::zeros(8, spec.clone()).unwrap();
        assert!(force(&s).iter().all(|&f| f == 0.0));
        assert_eq!(total_energy(&s), 0.0);
        let t = ChainState::new(vec![0.7; 8], vec![0.0; 8], spec).unwrap();
        assert!(force(&t).iter().all(|&f| f == 0.0));
    }

    #[test]
    fn two_site_energy() {
        let spec = PotentialSpec::fpu(1.0, 0.0, 0.0);
        let s = ChainState::new(vec![0.0, 1.0], vec![0.0, 0.0], spec).unwrap();
        assert!((total_energy(&s) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn snapping() {
        let (m, th) = snap_theta(std::f64::consts::FRAC_PI_2 + 0.001, 400);
        assert_eq!(m, 100);
        assert!((th - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn trivial_ballistic_cases() {
        let spec = PotentialSpec::fpu(1.0, 0.0, 0.0);
        let rest = case_c1_demo(&spec, 4, 3, |_| (1.0, 0.0), 10.0, 0.01).unwrap();
        assert_eq!(rest.max_deviation, 0.0);
        let mov = case_c1_demo(&spec, 4, 3, |_| (0.0, 2.0), 10.0, 0.01).unwrap();
        assert!(mov.max_deviation < 1e-12);
    }

    #[test]
    fn rejects_nonlinear_or_nonperiodic() {
        let spec = PotentialSpec::fpu(1.0, 1.0, 0.0);
        assert!(case_c1_demo(&spec, 4, 2, |_| (0.0, 0.0), 1.0, 0.1).is_err());
        let lin = PotentialSpec::fpu(1.0, 0.0, 0.0);
        let s = ChainState::new(vec![0.0, 1.0, 0.0, 2.0], vec![0.0; 4], lin).unwrap();
        assert!(case_c1_run(&s, 2, 1.0, 0.1).is_err());
    }
}
