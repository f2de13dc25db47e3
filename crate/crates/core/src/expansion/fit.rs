use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometric ladder ε_k = ε₀·2^{−k}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsLadder {
    pub eps0: f64,
    pub n: usize,
    pub values: Vec<f64>,
}

impl EpsLadder {
    pub fn new(eps0: f64, n: usize) -> Result<Self> {
        if !(eps0 > 0.0 && eps0 <= 0.5) {
            return Err(Error::InvalidParameter(format!("eps0 = {eps0} must lie in (0, 0.5]")));
        }
        if n < 5 {
            return Err(Error::InvalidParameter(format!("ladder needs n >= 5, got {n}")));
        }
        let values = (0..n).map(|k| eps0 * 0.5f64.powi(k as i32)).collect();
        Ok(EpsLadder { eps0, n, values })
    }
}

impl Default for EpsLadder {
    fn default() -> Self {
        EpsLadder::new(0.2, 8).expect("valid default ladder")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitVerdict {
    PowerLaw,
    /// Log-log fit quality below the threshold; no exponent is claimed.
    NoClaim,
    IdenticallyZero,
}

/// Fitted expansion of one functional along the ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub verdict: FitVerdict,
    /// Exponent κ, present only for `PowerLaw`.
    pub exponent: Option<f64>,
    /// Raw log-log slope over the five smallest admissible ε.
    pub slope: f64,
    /// Leading coefficient a of aε^κ.
    pub coefficient: f64,
    /// Coefficient of determination of the log-log fit.
    pub r2: f64,
    /// Leading exponent of the two-term fit, if one was made.
    pub refined_exponent: Option<f64>,
    /// Exponent λ of the next term bε^λ, if one is resolved.
    pub remainder_exponent: Option<f64>,
    pub remainder_coefficient: Option<f64>,
    pub samples_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Reference magnitude for the noise floor; defaults to max |value|.
    pub scale: Option<f64>,
    pub floor: f64,
    pub n_fit: usize,
    pub r2_threshold: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { scale: None, floor: 1e-13, n_fit: 5, r2_threshold: 0.9999 }
    }
}

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    (slope, intercept, r2)
}

/// Relative least-squares fit of f ≈ aε^κ + bε^λ for fixed exponents;
/// returns (a, b, sum of squared relative residuals).
fn two_term(eps: &[f64], f: &[f64], kappa: f64, lambda: f64) -> (f64, f64, f64) {
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&e, &v) in eps.iter().zip(f) {
        let p = e.powf(kappa) / v;
        let q = e.powf(lambda) / v;
        s11 += p * p;
        s12 += p * q;
        s22 += q * q;
        r1 += p;
        r2 += q;
    }
    let det = s11 * s22 - s12 * s12;
    if det.abs() < 1e-300 {
        return (0.0, 0.0, f64::INFINITY);
    }
    let a = (r1 * s22 - r2 * s12) / det;
    let b = (s11 * r2 - s12 * r1) / det;
    let res = eps
        .iter()
        .zip(f)
        .map(|(&e, &v)| (1.0 - (a * e.powf(kappa) + b * e.powf(lambda)) / v).powi(2))
        .sum();
    (a, b, res)
}

fn golden<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Power-law fit of (ε, value) samples.
///
/// The leading exponent is the log-log slope over the five smallest ε whose
/// values clear the noise floor; a two-term fit aε^κ + bε^λ over all
/// admissible samples then yields the coefficient and the remainder exponent.
pub fn fit_power_series(samples: &[(f64, f64)], max_terms: usize, opts: &FitOptions) -> Result<PowerFit> {
    if samples.len() < 5 {
        return Err(Error::Fit(format!("need at least 5 samples, got {}", samples.len())));
    }
    let mut s: Vec<(f64, f64)> = samples.to_vec();
    s.sort_by(|a, b| a.0.total_cmp(&b.0));
    if s.windows(2).any(|w| w[0].0 == w[1].0) || s.iter().any(|p| !(p.0 > 0.0)) {
        return Err(Error::Fit("eps values must be positive and distinct".into()));
    }
    let scale = opts.scale.unwrap_or_else(|| s.iter().fold(0.0, |m, p| m.max(p.1.abs())));
    let floor = opts.floor * scale;
    let admissible: Vec<(f64, f64)> = s.iter().copied().filter(|p| p.1.abs() > floor && p.1.is_finite()).collect();
    let zero = PowerFit {
        verdict: FitVerdict::IdenticallyZero,
        exponent: None,
        slope: f64::NAN,
        coefficient: 0.0,
        r2: f64::NAN,
        refined_exponent: None,
        remainder_exponent: None,
        remainder_coefficient: None,
        samples_used: 0,
    };
    if admissible.is_empty() || scale == 0.0 {
        return Ok(zero);
    }
    if admissible.len() < opts.n_fit.min(5).max(3) {
        return Ok(PowerFit { verdict: FitVerdict::NoClaim, samples_used: admissible.len(), ..zero });
    }
    let head = &admissible[..opts.n_fit.min(admissible.len())];
    let lx: Vec<f64> = head.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = head.iter().map(|p| p.1.abs().ln()).collect();
    let (slope, intercept, r2) = linear_fit(&lx, &ly);
    let sign = head[0].1.signum();
    let mut coefficient = sign * intercept.exp();
    let mut refined_exponent = None;
    let mut remainder_exponent = None;
    let mut remainder_coefficient = None;

    let eps: Vec<f64> = admissible.iter().map(|p| p.0).collect();
    let vals: Vec<f64> = admissible.iter().map(|p| p.1).collect();
    let one_term_dev = eps
        .iter()
        .zip(&vals)
        .map(|(&e, &v)| (1.0 - coefficient * e.powf(slope) / v).abs())
        .fold(0.0, f64::max);
    if max_terms >= 2 && one_term_dev > 1e-9 && eps.len() >= 4 {
        let obj = |k: f64, l: f64| two_term(&eps, &vals, k, l).2;
        let mut best = (slope, slope + 1.0, f64::INFINITY);
        let mut k = slope - 0.3;
        while k <= slope + 0.3 {
            let mut l = k + 0.2;
            while l <= k + 8.0 {
                let r = obj(k, l);
                if r < best.2 {
                    best = (k, l, r);
                }
                l += 0.05;
            }
            k += 0.01;
        }
        let (mut bk, mut bl) = (best.0, best.1);
        for _ in 0..6 {
            bk = golden(|k| obj(k, bl), bk - 0.02, bk + 0.02, 60).0;
            bl = golden(|l| obj(bk, l), (bl - 0.1).max(bk + 0.05), bl + 0.1, 60).0;
        }
        let (a, b, _) = two_term(&eps, &vals, bk, bl);

        coefficient = a;
        refined_exponent = Some(bk);
        remainder_exponent = Some(bl);
        remainder_coefficient = Some(b);
    }
    let verdict = if r2 >= opts.r2_threshold { FitVerdict::PowerLaw } else { FitVerdict::NoClaim };

    Ok(PowerFit {
        verdict,
        exponent: if verdict == FitVerdict::PowerLaw { Some(slope) } else { None },
        slope,
        coefficient,
        r2,
        refined_exponent,
        remainder_exponent,
        remainder_coefficient,
        samples_used: admissible.len(),
    })
}

/// Least-squares coefficients c_p of f(ε) ≈ Σ_p c_p ε^p for the given powers.
pub fn fit_expansion_coefficients(samples: &[(f64, f64)], powers: &[i32]) -> Result<Vec<f64>> {
    if samples.len() < powers.len() {
        return Err(Error::Fit(format!("{} samples cannot determine {} coefficients", samples.len(), powers.len())));
    }
    let emax = samples.iter().fold(0.0f64, |m, p| m.max(p.0));
    let a = DMatrix::from_fn(samples.len(), powers.len(), |i, j| (samples[i].0 / emax).powi(powers[j]));
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|p| p.1));
    let svd = a.svd(true, true);
    let x = svd.solve(&b, 1e-15).map_err(|e| Error::Fit(e.to_string()))?;
    Ok(powers.iter().enumerate().map(|(j, &p)| x[j] / emax.powi(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        EpsLadder::default().values.iter().map(|&e| (e, f(e))).collect()
    }

    #[test]
    fn exact_power() {
        let fit = fit_power_series(&ladder(|e| e.powi(3)), 2, &FitOptions::default()).unwrap();
        assert!((fit.exponent.unwrap() - 3.0).abs() < 1e-10);
        assert!((fit.coefficient - 1.0).abs() < 1e-9);
        assert!(fit.remainder_exponent.is_none());
    }

    #[test]
    fn two_terms() {
        let fit = fit_power_series(&ladder(|e| 2.0 * e.powi(3) + e.powi(5)), 2, &FitOptions::default()).unwrap();
        assert!((fit.exponent.unwrap() - 3.0).abs() < 0.05);
        assert!((fit.coefficient - 2.0).abs() < 1e-3);
        assert!((fit.remainder_exponent.unwrap() - 5.0).abs() < 0.05);
    }

    #[test]
    fn zero_verdict() {
        let fit = fit_power_series(&ladder(|_| 0.0), 2, &FitOptions::default()).unwrap();
        assert_eq!(fit.verdict, FitVerdict::IdenticallyZero);
        let noise = fit_power_series(&ladder(|e| 1e-20 * e), 2, &FitOptions { scale: Some(1.0), ..FitOptions::default() })
            .unwrap();
        assert_eq!(noise.verdict, FitVerdict::IdenticallyZero);
    }

    #[test]
    fn coefficients() {
        let s = ladder(|e| 0.5 * e + 3.0 * e * e - e.powi(4));
        let c = fit_expansion_coefficients(&s, &[1, 2, 3, 4, 5, 6]).unwrap();
        assert!((c[0] - 0.5).abs() < 1e-10);
        assert!((c[1] - 3.0).abs() < 1e-8);
        assert!(c[2].abs() < 1e-6);
    }

    #[test]
    fn ladder_validation() {
        assert!(EpsLadder::new(0.6, 8).is_err());
        assert!(EpsLadder::new(0.2, 4).is_err());
    }
}
