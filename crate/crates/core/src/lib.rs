//! Two-scale reduction laboratory for atomic chains.
//!
//! Microscopic FPU and Klein–Gordon rings, the ε-parametrised energy
//! functionals of four macroscopic reductions (quasilinear wave, KdV, nlS,
//! three-wave interaction), an ε-ladder fitting engine, solvers for the
//! reduced PDEs, and the seeding/demodulation bridge between the two scales.

pub mod acceptance;
pub mod bridge;
pub mod chain;
pub mod error;
pub mod expansion;
pub mod fields;
pub mod functionals;
pub mod macro_pde;
pub mod potentials_dispersion;
pub mod spectral;

pub use chain::{case_c1_demo, force, step_verlet, total_energy, ChainState, Verlet};
pub use error::{Error, Result};
pub use functionals::{FunctionalReport, MacroField, Reduction, ShiftSpec};
pub use potentials_dispersion::{
    build_zset, eval_potential, find_resonant_triads, group_velocity, nls_frame_speed, nls_nonresonance, omega,
    ChainKind, PlaneWave, PotentialSpec, Triad, Which, ZSet,
};

pub use num_complex::Complex64;
