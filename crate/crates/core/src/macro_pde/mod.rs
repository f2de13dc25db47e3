//! Periodic reference solvers for the reduced models.

mod kdv;
mod nls;
mod psystem;
mod threewave;

pub use kdv::{kdv_rhs, solve_kdv, solve_kdv_strain, KdvOptions, KdvTrajectory};
pub use nls::{nls_hamiltonian, nls_mass, nls_rhs, solve_nls, AmplitudeState, AmplitudeTrajectory, SplitOptions};
pub use psystem::{psystem_energy, solve_psystem, PSystemOptions, PSystemResult, PSystemState};
pub use threewave::{solve_threewave, threewave_hamiltonian, threewave_invariant, threewave_rhs};

/// Number of substeps of size ≤ `dt_max` that tile `interval` exactly.
pub(crate) fn substeps(interval: f64, dt_max: f64) -> (usize, f64) {
    let n = ((interval / dt_max) - 1e-9).ceil().max(1.0) as usize;
    (n, interval / n as f64)
}

/// Output times 0, Δ, 2Δ, …, τ_end (the last interval may be shorter).
pub(crate) fn output_times(tau_end: f64, interval: f64) -> Vec<f64> {
    let mut t = vec![0.0];
    if tau_end <= 0.0 {
        return t;
    }
    let n = ((tau_end / interval) - 1e-9).ceil().max(1.0) as usize;
    for i in 1..n {
        t.push(i as f64 * interval);
    }
    t.push(tau_end);
    t
}
