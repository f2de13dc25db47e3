//! Seeding chains from macroscopic fields, demodulating them back, and
//! measuring residuals and micro–macro discrepancies.

mod ansatz;
mod demod;
mod run;
mod scaling;

pub use ansatz::{reconstruct, Derivative, HarmonicTerm, MacroSnapshot};
pub use demod::{demodulate, modulation_check, Demodulated, ModulationCheck, ALIASING_TAIL};
pub use run::{
    ansatz_residual, bridge_ladder, micro_macro_error, residual_ladder, run_macro, seed_chain, twi_coefficients_from_carriers,
    BridgeReport, MacroConfig, MacroInitial, MacroRun, ResidualLadder, ResidualReport,
};
pub use scaling::{Carrier, ScalingSpec};
