//! ε-ladder fits, cancellation checks and reduced-model coefficients.

mod cancellation;
mod coefficients;
mod fit;
mod hamiltonian;

pub use coefficients::{
    extract_reduced_coefficients, kdv_coefficients, nls_coefficients, nls_correction_amplitudes, nls_correction_closed,
    nls_correction_spectral, rho1_finite_difference, twi_coefficients, CoefficientRequest, KdvCoefficients, NlsCoefficients,
    ReducedCoefficients, TwiCoefficients,
};
pub use fit::{fit_expansion_coefficients, fit_power_series, EpsLadder, FitOptions, FitVerdict, PowerFit};
pub use cancellation::{verify_cancellation, ExpansionReport, FunctionalSeries, KDV_GAP_TOLERANCE, NLS_EPS1_TOLERANCE, NLS_EPS2_TOLERANCE};
pub use hamiltonian::{kdv_reduced_hamiltonian, verify_reduced_hamiltonian_equation, HamiltonianCheck, HamiltonianOptions};
