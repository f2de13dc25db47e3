//! ε-parametrised kinetic, potential and frame energies of the four
//! reductions, together with their symplectic matrices Σ(ε).
//!
//! Every frame has the shape P = ε^b X_τ + Q with 𝕂 = ε^a∫½P² and
//! 𝕀 = −ε^a∫P·Q, so 𝕳 = 𝕂 + 𝕍 + 𝕀 is the Legendre transform of 𝕃 = 𝕂 − 𝕍.

mod field;

pub use field::{fftn, shift_op, MacroField, ShiftKind, ShiftSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials_dispersion::{ChainKind, PotentialSpec};

/// The four two-scale reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    /// Quasilinear wave equation / p-system.
    We,
    Kdv,
    Nls,
    /// Three-wave interaction.
    Twi,
}

impl Reduction {
    pub fn phase_dims(self) -> usize {
        match self {
            Reduction::We | Reduction::Kdv => 0,
            Reduction::Nls => 1,
            Reduction::Twi => 2,
        }
    }
}

impl std::str::FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "we" => Ok(Reduction::We),
            "kdv" => Ok(Reduction::Kdv),
            "nls" => Ok(Reduction::Nls),
            "twi" | "3wi" => Ok(Reduction::Twi),
            other => Err(Error::Usage(format!("unknown reduction `{other}`"))),
        }
    }
}

/// Frame parameters of a reduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Frame {
    We,
    Kdv { c: f64 },
    Nls { c: f64, omega: f64, theta: f64 },
    Twi { omega: [f64; 2], theta: [f64; 2] },
}

impl Frame {
    pub fn reduction(&self) -> Reduction {
        match self {
            Frame::We => Reduction::We,
            Frame::Kdv { .. } => Reduction::Kdv,
            Frame::Nls { .. } => Reduction::Nls,
            Frame::Twi { .. } => Reduction::Twi,
        }
    }

    fn phase_shift(&self) -> Vec<f64> {
        match self {
            Frame::We | Frame::Kdv { .. } => Vec::new(),
            Frame::Nls { theta, .. } => vec![*theta],
            Frame::Twi { theta, .. } => theta.to_vec(),
        }
    }

}

/// Values of 𝕂, 𝕍, 𝕀 and the derived 𝕃, 𝕰, 𝕳 at one ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub eps: f64,
    pub k: f64,
    pub v: f64,
    pub i: f64,
    pub l: f64,
    pub e: f64,
    pub h: f64,
    pub box_length: f64,
}

impl FunctionalReport {
    pub fn new(eps: f64, k: f64, v: f64, i: f64, box_length: f64) -> Self {
        let e = k + v;
        FunctionalReport { eps, k, v, i, l: k - v, e, h: e + i, box_length }
    }

    /// Named component, one of K, V, I, L, E, H.
    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "K" => Some(self.k),
            "V" => Some(self.v),
            "I" => Some(self.i),
            "L" => Some(self.l),
            "E" => Some(self.e),
            "H" => Some(self.h),
            _ => None,
        }
    }
}

pub const FUNCTIONAL_NAMES: [&str; 6] = ["K", "V", "I", "L", "E", "H"];

/// (a, P, Q) with P = ε^b X_τ + Q.
fn momentum(frame: &Frame, eps: f64, x: &MacroField, xt: &MacroField) -> (f64, MacroField, MacroField) {
    match frame {
        Frame::We => (-1.0, xt.clone(), x.scale(0.0)),
        Frame::Kdv { c } => {
            let q = x.dy().scale(*c);
            (3.0, q.axpy(eps * eps, xt), q)
        }
        Frame::Nls { c, omega, .. } => {
            let q = x.dy().scale(-eps * eps * c).axpy(eps * omega, &x.dphi_dir(&[1.0]));
            (-1.0, q.axpy(eps.powi(3), xt), q)
        }
        Frame::Twi { omega, .. } => {
            let q = x.dphi_dir(omega).scale(eps);
            (-1.0, q.axpy(eps * eps, xt), q)
        }
    }
}

fn potential(frame: &Frame, eps: f64, x: &MacroField, spec: &PotentialSpec) -> f64 {
    let inv = 1.0 / eps;
    match frame {
        Frame::We | Frame::Kdv { .. } => {
            let d = shift_op(x, &ShiftSpec::space(eps), ShiftKind::Fwd).expect("phase_dims checked");
            let scale = if matches!(frame, Frame::We) { inv } else { eps };
            let strain = d.scale(scale).dealiased();
            inv * x.integrate_values(&strain.values.iter().map(|&r| spec.pair(r)).collect::<Vec<_>>())
        }
        Frame::Nls { .. } | Frame::Twi { .. } => {
            let s = ShiftSpec::new(eps, frame.phase_shift());
            let onsite: Vec<f64> = x.scale(eps).dealiased().values.iter().map(|&r| spec.onsite(r)).collect();
            let pair = if spec.kind == ChainKind::Kg && spec.closed_form.is_none() {
                let lap = shift_op(x, &s, ShiftKind::Laplace).expect("phase_dims checked");
                -0.5 * spec.alpha * eps * eps * x.inner(&lap)
            } else {
                let d = shift_op(x, &s, ShiftKind::Fwd).expect("phase_dims checked").scale(eps).dealiased();
                x.integrate_values(&d.values.iter().map(|&r| spec.pair(r)).collect::<Vec<_>>())
            };
            inv * (pair + x.integrate_values(&onsite))
        }
    }
}

fn check(frame: &Frame, eps: f64, x: &MacroField, xt: &MacroField) -> Result<()> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    x.validate()?;
    x.check_same_shape(xt)?;
    let want = frame.reduction().phase_dims();
    if x.phase_dims != want {
        return Err(Error::ShapeMismatch(format!(
            "{:?} needs phase_dims = {want}, field has {}",
            frame.reduction(),
            x.phase_dims
        )));
    }
    Ok(())
}

/// Evaluates all functionals for an arbitrary frame.
pub fn evaluate(frame: &Frame, eps: f64, x: &MacroField, xt: &MacroField, spec: &PotentialSpec) -> Result<FunctionalReport> {
    check(frame, eps, x, xt)?;
    let (a, p, q) = momentum(frame, eps, x, xt);
    let pre = eps.powf(a);
    let k = pre * 0.5 * p.inner(&p);
    let i = -pre * p.inner(&q);
    let v = potential(frame, eps, x, spec);
    Ok(FunctionalReport::new(eps, k, v, i, x.length))
}

/// Quasilinear wave reduction: no moving frame, so 𝕳 = 𝕰.
pub fn we_functionals(eps: f64, x: &MacroField, xt: &MacroField, spec: &PotentialSpec) -> Result<FunctionalReport> {
    evaluate(&Frame::We, eps, x, xt, spec)
}

pub fn kdv_functionals(eps: f64, x: &MacroField, xt: &MacroField, spec: &PotentialSpec, c: f64) -> Result<FunctionalReport> {
    evaluate(&Frame::Kdv { c }, eps, x, xt, spec)
}

pub fn nls_functionals(
    eps: f64,
    x: &MacroField,
    xt: &MacroField,
    spec: &PotentialSpec,
    c: f64,
    omega: f64,
    theta: f64,
) -> Result<FunctionalReport> {
    evaluate(&Frame::Nls { c, omega, theta }, eps, x, xt, spec)
}

pub fn threewave_functionals(
    eps: f64,
    x: &MacroField,
    xt: &MacroField,
    spec: &PotentialSpec,
    omega: [f64; 2],
    theta: [f64; 2],
) -> Result<FunctionalReport> {
    evaluate(&Frame::Twi { omega, theta }, eps, x, xt, spec)
}

/// Relative mismatch between 𝕳 and ⟨∂_{X_τ}𝕃, X_τ⟩ − 𝕃, with the fibre
/// derivative taken by a central difference along X_τ.
pub fn legendre_defect(frame: &Frame, eps: f64, x: &MacroField, xt: &MacroField, spec: &PotentialSpec) -> Result<f64> {
    let base = evaluate(frame, eps, x, xt, spec)?;
    let h = 1e-3;
    let lp = evaluate(frame, eps, x, &xt.scale(1.0 + h), spec)?.l;
    let lm = evaluate(frame, eps, x, &xt.scale(1.0 - h), spec)?.l;
    let dl = (lp - lm) / (2.0 * h);
    let legendre = dl - base.l;
    let scale = base.h.abs().max(base.k.abs()).max(base.v.abs()).max(f64::MIN_POSITIVE);
    Ok((legendre - base.h).abs() / scale)
}

/// Blocks of Σ(ε) = Σ_n ε^n Σ_n.
#[derive(Debug, Clone, PartialEq)]
pub enum SigmaBlock {
    /// (coef·∂_y) in the (X, X) slot.
    DySpace(f64),
    /// (−2 w·∂_φ) in the (X, X) slot.
    DPhase(Vec<f64>),
    /// (0, −1; 1, 0).
    Metric,
}

/// The blocks of Σ with their ε-powers.
pub fn sigma_blocks(frame: &Frame) -> Vec<(i32, SigmaBlock)> {
    match frame {
        Frame::We => vec![(-1, SigmaBlock::Metric)],
        Frame::Kdv { c } => vec![(5, SigmaBlock::DySpace(-2.0 * c)), (7, SigmaBlock::Metric)],
        Frame::Nls { c, omega, .. } => vec![
            (3, SigmaBlock::DPhase(vec![*omega])),
            (4, SigmaBlock::DySpace(2.0 * c)),
            (5, SigmaBlock::Metric),
        ],
        Frame::Twi { omega, .. } => vec![(2, SigmaBlock::DPhase(omega.to_vec())), (3, SigmaBlock::Metric)],
    }
}

fn block_value(block: &SigmaBlock, z: (&MacroField, &MacroField), zt: (&MacroField, &MacroField)) -> f64 {
    match block {
        SigmaBlock::DySpace(coef) => coef * z.0.dy().inner(zt.0),
        SigmaBlock::DPhase(w) => -2.0 * z.0.dphi_dir(w).inner(zt.0),
        SigmaBlock::Metric => -z.1.inner(zt.0) + z.0.inner(zt.1),
    }
}

/// ⟨Σ(ε)Z, Z̃⟩ for tangent pairs Z = (δX, δX_τ).
pub fn apply_sigma(
    frame: &Frame,
    eps: f64,
    z: (&MacroField, &MacroField),
    zt: (&MacroField, &MacroField),
) -> Result<f64> {
    let want = frame.reduction().phase_dims();
    for f in [z.0, z.1, zt.0, zt.1] {
        z.0.check_same_shape(f)?;
        if f.phase_dims != want {
            return Err(Error::ShapeMismatch(format!("{:?} needs phase_dims = {want}", frame.reduction())));
        }
    }
    Ok(sigma_blocks(frame).iter().map(|(n, b)| eps.powi(*n) * block_value(b, z, zt)).sum())
}

/// Value of the single block of Σ at ε-power `order` (0 if absent).
pub fn apply_sigma_order(frame: &Frame, order: i32, z: (&MacroField, &MacroField), zt: (&MacroField, &MacroField)) -> f64 {
    sigma_blocks(frame).iter().filter(|(n, _)| *n == order).map(|(_, b)| block_value(b, z, zt)).sum()
}
