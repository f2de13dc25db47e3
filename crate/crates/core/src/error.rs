use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("stability condition violated: {0}")]
    Instability(String),
    #[error("degenerate dispersion: {0}")]
    DegenerateDispersion(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("divergence at step {step}: non-finite state")]
    Divergence { step: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("small divisor: {0}")]
    SmallDivisor(String),
    #[error("frame speed must equal the sound velocity (c^2 = v2): c^2 = {c2}, v2 = {v2}")]
    FrameSpeed { c2: f64, v2: f64 },
    #[error("ellipticity: Phi1''(R) = {value} <= 0 at R = {r}; the initial value problem is ill-posed")]
    Ellipticity { r: f64, value: f64 },
    #[error("CFL violation: {0}")]
    Cfl(String),
    #[error("blow-up detected at tau = {tau}: spectral tail ratio {ratio:.3e}")]
    BlowUp { tau: f64, ratio: f64 },
    #[error("step rejected: phase rotation {phase:.3e} rad per step exceeds {limit}")]
    StepRejected { phase: f64, limit: f64 },
    #[error("incommensurate parameters: {0}")]
    Incommensurate(String),
    #[error("shock reached at tau = {shock_time}; requested tau = {tau}")]
    ShockReached { shock_time: f64, tau: f64 },
    #[error("fit failed: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
