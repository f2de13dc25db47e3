//! Interaction potentials, the linear dispersion relation and the resonance
//! machinery for plane waves.

pub mod dispersion;
pub mod potential;
pub mod resonance;

pub use dispersion::{
    angle_distance_to_zero, group_velocity, nls_frame_speed, nls_nonresonance, omega, omega_second_derivative, omega_squared, wrap_angle,
    NonResonance, PlaneWave,
};
pub use potential::{eval_potential, ChainKind, ClosedForm, Evaluator, PotentialSpec, Which};
pub use resonance::{build_zset, find_resonant_triads, resonance_function, select_triad, select_triad_separated, Triad, TriadSearch, TriadStatus, ZSet};
