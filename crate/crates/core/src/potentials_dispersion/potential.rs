use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Chain family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ChainKind {
    /// Nonlinear pair potential, no on-site term.
    Fpu,
    /// Harmonic pair potential, nonlinear on-site term.
    Kg,
}

/// Selects the on-site potential Φ₀ or the pair potential Φ₁.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Onsite,
    Pair,
}

impl FromStr for Which {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "onsite" => Ok(Which::Onsite),
            "pair" => Ok(Which::Pair),
            other => Err(Error::Usage(format!(
                "unknown potential selector `{other}` (expected `onsite` or `pair`)"
            ))),
        }
    }
}

/// Closed-form evaluator returning (Φ(r), Φ′(r), Φ″(r)).
pub type Evaluator = Arc<dyn Fn(f64) -> (f64, f64, f64) + Send + Sync>;

/// Optional closed forms overriding the Taylor polynomials.
#[derive(Clone, Default)]
pub struct ClosedForm {
    pub onsite: Option<Evaluator>,
    pub pair: Option<Evaluator>,
}

impl fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosedForm")
            .field("onsite", &self.onsite.is_some())
            .field("pair", &self.pair.is_some())
            .finish()
    }
}

/// On-site and pair potentials of an atomic chain.
///
/// `v` holds the Taylor coefficients v₀..v₄ of Φ₁ for FPU chains and of Φ₀
/// for KG chains. `alpha` is Φ₁″(0).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub alpha: f64,
    pub v: [f64; 5],
    pub kind: ChainKind,
    #[serde(skip)]
    pub closed_form: Option<ClosedForm>,
}

fn taylor(v: &[f64; 5], r: f64) -> (f64, f64, f64) {
    let r2 = r * r;
    let value = v[0] + v[1] * r + v[2] * r2 / 2.0 + v[3] * r2 * r / 6.0 + v[4] * r2 * r2 / 24.0;
    let d1 = v[1] + v[2] * r + v[3] * r2 / 2.0 + v[4] * r2 * r / 6.0;
    let d2 = v[2] + v[3] * r + v[4] * r2 / 2.0;
    (value, d1, d2)
}

impl PotentialSpec {
    /// FPU chain with Φ₁(r) = v₂r²/2 + v₃r³/6 + v₄r⁴/24.
    pub fn fpu(v2: f64, v3: f64, v4: f64) -> Self {
        PotentialSpec { alpha: v2, v: [0.0, 0.0, v2, v3, v4], kind: ChainKind::Fpu, closed_form: None }
    }

    /// KG chain with Φ₁(r) = αr²/2 and Φ₀(r) = v₂r²/2 + v₃r³/6 + v₄r⁴/24.
    pub fn kg(alpha: f64, v2: f64, v3: f64, v4: f64) -> Self {
        PotentialSpec { alpha, v: [0.0, 0.0, v2, v3, v4], kind: ChainKind::Kg, closed_form: None }
    }

    pub fn with_closed_form(mut self, closed_form: ClosedForm) -> Self {
        self.closed_form = Some(closed_form);
        self
    }

    pub fn v2(&self) -> f64 {
        self.v[2]
    }

    pub fn v3(&self) -> f64 {
        self.v[3]
    }

    pub fn v4(&self) -> f64 {
        self.v[4]
    }

    /// Curvature of the on-site potential at zero (0 for FPU).
    pub fn onsite_v2(&self) -> f64 {
        match self.kind {
            ChainKind::Fpu => 0.0,
            ChainKind::Kg => self.v[2],
        }
    }

    /// True when the pair potential is quadratic and the on-site one vanishes
    /// beyond the harmonic term, i.e. the equations of motion are linear.
    pub fn is_linear(&self) -> bool {
        self.closed_form.is_none() && self.v[3] == 0.0 && self.v[4] == 0.0
    }

    /// Checks the normalisation v₀ = v₁ = 0 and, for FPU, α = v₂.
    pub fn validate(&self) -> Result<()> {
        if self.v[0] != 0.0 || self.v[1] != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "potentials are normalised with v0 = v1 = 0, got v0 = {}, v1 = {}",
                self.v[0], self.v[1]
            )));
        }
        if self.v.iter().any(|x| !x.is_finite()) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter("non-finite potential coefficient".into()));
        }
        if self.kind == ChainKind::Fpu && (self.alpha - self.v[2]).abs() > 1e-14 * (1.0 + self.v[2].abs()) {
            return Err(Error::InvalidParameter(format!(
                "FPU chains require alpha = v2, got alpha = {}, v2 = {}",
                self.alpha, self.v[2]
            )));
        }
        Ok(())
    }

    /// KG stability: min{4α + v₂, v₂} > 0.
    pub fn check_stability(&self) -> Result<()> {
        let v2 = self.onsite_v2();
        let m = (4.0 * self.alpha + v2).min(v2);
        if m > 0.0 {
            Ok(())
        } else {
            Err(Error::Instability(format!(
                "min(4 alpha + v2, v2) = {m} <= 0 (alpha = {}, v2 = {v2})",
                self.alpha
            )))
        }
    }

    /// Φ₀ or Φ₁ with first and second derivatives.
    pub fn eval3(&self, which: Which, r: f64) -> (f64, f64, f64) {
        if let Some(cf) = &self.closed_form {
            let ev = match which {
                Which::Onsite => &cf.onsite,
                Which::Pair => &cf.pair,
            };
            if let Some(ev) = ev {
                return ev(r);
            }
        }
        match (self.kind, which) {
            (ChainKind::Fpu, Which::Pair) | (ChainKind::Kg, Which::Onsite) => taylor(&self.v, r),
            (ChainKind::Fpu, Which::Onsite) => (0.0, 0.0, 0.0),
            (ChainKind::Kg, Which::Pair) => (0.5 * self.alpha * r * r, self.alpha * r, self.alpha),
        }
    }

    pub fn pair(&self, r: f64) -> f64 {
        self.eval3(Which::Pair, r).0
    }

    pub fn pair_d(&self, r: f64) -> f64 {
        self.eval3(Which::Pair, r).1
    }

    pub fn pair_dd(&self, r: f64) -> f64 {
        self.eval3(Which::Pair, r).2
    }

    pub fn onsite(&self, r: f64) -> f64 {
        self.eval3(Which::Onsite, r).0
    }

    pub fn onsite_d(&self, r: f64) -> f64 {
        self.eval3(Which::Onsite, r).1
    }
}

/// Value and derivative of Φ₀ (`onsite`) or Φ₁ (`pair`) at `r`.
pub fn eval_potential(spec: &PotentialSpec, which: Which, r: f64) -> Result<(f64, f64)> {
    spec.validate()?;
    let (value, d, _) = spec.eval3(which, r);
    Ok((value, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fpu_pair_at_one() {
        let spec = PotentialSpec::fpu(1.0, 1.0, 0.0);
        let (val, d) = eval_potential(&spec, Which::Pair, 1.0).unwrap();
        assert!((val - (0.5 + 1.0 / 6.0)).abs() < 1e-15);
        assert!((d - 1.5).abs() < 1e-15);
        assert_eq!(eval_potential(&spec, Which::Onsite, 0.7).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn zero_at_origin() {
        for spec in [PotentialSpec::fpu(1.0, -2.0, 3.0), PotentialSpec::kg(0.3, 1.0, 1.0, 1.0)] {
            for which in [Which::Onsite, Which::Pair] {
                assert_eq!(eval_potential(&spec, which, 0.0).unwrap(), (0.0, 0.0));
            }
        }
    }

    #[test]
    fn unknown_selector_is_usage_error() {
        assert!(matches!("neither".parse::<Which>(), Err(Error::Usage(_))));
    }

    #[test]
    fn normalisation_enforced() {
        let mut spec = PotentialSpec::kg(1.0, 1.0, 0.0, 0.0);
        spec.v[1] = 0.1;
        assert!(eval_potential(&spec, Which::Pair, 0.2).is_err());
    }

    #[test]
    fn closed_form_overrides_taylor() {
        let cf = ClosedForm {
            onsite: None,
            pair: Some(Arc::new(|r: f64| (r.cosh() - 1.0, r.sinh(), r.cosh()))),
        };
        let spec = PotentialSpec::fpu(1.0, 0.0, 1.0).with_closed_form(cf);
        let (v, d) = eval_potential(&spec, Which::Pair, 0.5).unwrap();
        assert!((v - (0.5f64.cosh() - 1.0)).abs() < 1e-15);
        assert!((d - 0.5f64.sinh()).abs() < 1e-15);
    }
}
