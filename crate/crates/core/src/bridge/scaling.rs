use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::chain::snap_theta;
use crate::error::{Error, Result};
use crate::functionals::Reduction;
use crate::potentials_dispersion::{group_velocity, omega, ChainKind, PotentialSpec, Triad};

/// A carrier e^{i(ωt + θj)} with θ = 2πm/N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Carrier {
    pub m: i64,
    pub theta: f64,
    pub omega: f64,
}

/// Lattice realisation of a two-scale ansatz
/// x_j = ε^α X(ε^β t, ε(j − s t), ωt + θj).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSpec {
    pub reduction: Reduction,
    pub eps_requested: f64,
    /// ε = L/N actually used.
    pub eps: f64,
    pub length: f64,
    pub n: usize,
    pub alpha: i32,
    pub beta: i32,
    pub gamma: i32,
    /// Frame speed c of the reduction (KdV: √v₂, nlS: −Ω′(θ)).
    pub c: f64,
    /// Drift s of the slow variable y = ε(j − s t).
    pub drift: f64,
    pub carriers: Vec<Carrier>,
    /// Macroscopic comparison grid; demodulation keeps |k| ≤ n_macro/2.
    pub n_macro: usize,
    /// Σₙωₙ of the snapped carriers (three-wave only).
    pub detuning: f64,
}

fn lattice(eps: f64, length: f64) -> Result<(usize, f64)> {
    if !(eps > 0.0 && length > 0.0 && eps.is_finite() && length.is_finite()) {
        return Err(Error::InvalidParameter(format!("need eps > 0 and L > 0, got eps = {eps}, L = {length}")));
    }
    let n = (length / eps).round() as usize;
    if n < 8 {
        return Err(Error::Incommensurate(format!("L/eps = {:.3} gives fewer than 8 sites", length / eps)));
    }
    let actual = length / n as f64;
    if (actual - eps).abs() > 0.05 * eps {
        return Err(Error::Incommensurate(format!("eps = {eps} is 5% away from any L/N (nearest {actual})")));
    }
    Ok((n, actual))
}

impl ScalingSpec {
    fn base(reduction: Reduction, eps: f64, length: f64, exps: (i32, i32, i32), n_macro: usize) -> Result<Self> {
        let (n, actual) = lattice(eps, length)?;
        Ok(ScalingSpec {
            reduction,
            eps_requested: eps,
            eps: actual,
            length,
            n,
            alpha: exps.0,
            beta: exps.1,
            gamma: exps.2,
            c: 0.0,
            drift: 0.0,
            carriers: Vec::new(),
            n_macro: n_macro.min(n),
            detuning: 0.0,
        })
    }

    /// x_j = ε⁻¹X(εt, εj).
    pub fn we(eps: f64, length: f64) -> Result<Self> {
        Self::base(Reduction::We, eps, length, (-1, 1, 1), 32)
    }

    /// x_j = εX(ε³t, ε(j + ct)) with c = √v₂.
    pub fn kdv(eps: f64, length: f64, spec: &PotentialSpec) -> Result<Self> {
        if spec.kind != ChainKind::Fpu {
            return Err(Error::Precondition("the KdV ansatz needs an FPU chain".into()));
        }
        if !(spec.v2() > 0.0) {
            return Err(Error::Instability(format!("v2 = {} gives no sound speed", spec.v2())));
        }
        let mut s = Self::base(Reduction::Kdv, eps, length, (1, 3, 1), 64)?;
        s.c = spec.v2().sqrt();
        s.drift = -s.c;
        Ok(s)
    }

    /// x_j = ε·2Re(A(ε²t, ε(j − ct)) e^{i(ωt + θj)}) with θ snapped to the ring.
    pub fn nls(eps: f64, length: f64, theta: f64, spec: &PotentialSpec) -> Result<Self> {
        let mut s = Self::base(Reduction::Nls, eps, length, (1, 2, 1), 64)?;
        let (m, th) = snap_theta(theta, s.n);
        if m == 0 || 2 * m as usize == s.n {
            return Err(Error::Incommensurate(format!("theta = {theta} snaps to a non-oscillatory wave (m = {m})")));
        }
        let w = omega(th, spec)?;
        s.c = -group_velocity(th, spec)?;
        s.drift = s.c;
        s.carriers = vec![Carrier { m, theta: th, omega: w }];
        s.fit_window()?;
        Ok(s)
    }

    /// x_j = ε Σₙ Aₙ(εt, εj) e^{i(ωₙt + θₙj)} + c.c.; the wave numbers are
    /// snapped so that |ω₁ + ω₂ + ω₃| is smallest near the given triad.
    pub fn twi(eps: f64, length: f64, triad: &Triad, spec: &PotentialSpec) -> Result<Self> {
        let mut s = Self::base(Reduction::Twi, eps, length, (1, 1, 1), 32)?;
        let n = s.n as i64;
        let signs: Vec<f64> = triad.p.iter().map(|p| p.sign as f64).collect();
        let m1 = snap_theta(triad.p[0].theta, s.n).0;
        let m2 = snap_theta(triad.p[1].theta, s.n).0;
        let mut best: Option<(f64, [i64; 3])> = None;
        for d1 in -4..=4 {
            for d2 in -4..=4 {
                let ms = [(m1 + d1).rem_euclid(n), (m2 + d2).rem_euclid(n), (-(m1 + d1) - (m2 + d2)).rem_euclid(n)];
                let mut sum = 0.0;
                for k in 0..3 {
                    sum += signs[k] * omega(TAU * ms[k] as f64 / n as f64, spec)?;
                }
                if best.map_or(true, |b| sum.abs() < b.0.abs()) {
                    best = Some((sum, ms));
                }
            }
        }
        let (sum, ms) = best.expect("search is nonempty");
        s.detuning = sum;
        for k in 0..3 {
            let th = TAU * ms[k] as f64 / n as f64;
            s.carriers.push(Carrier { m: ms[k], theta: th, omega: signs[k] * omega(th, spec)? });
        }
        let scale = s.carriers.iter().map(|c| c.omega.abs()).fold(0.0, f64::max);
        if sum.abs() > 1e-2 * scale {
            return Err(Error::Incommensurate(format!("best snapped triad on N = {n} is detuned by {sum:.3e}")));
        }
        s.fit_window()?;
        Ok(s)
    }

    /// Smallest ring distance, in modes, between a carrier and any other
    /// carrier or conjugate image once that carrier is demodulated.
    pub fn carrier_gap(&self) -> Option<i64> {
        let n = self.n as i64;
        let dist = |m: i64| {
            let r = m.rem_euclid(n);
            r.min(n - r)
        };
        let mut gap: Option<i64> = None;
        for (a, ca) in self.carriers.iter().enumerate() {
            for (b, cb) in self.carriers.iter().enumerate() {
                let mut d = vec![dist(-cb.m - ca.m)];
                if a != b {
                    d.push(dist(cb.m - ca.m));
                }
                for v in d {
                    gap = Some(gap.map_or(v, |g| g.min(v)));
                }
            }
        }
        gap
    }

    /// Shrinks the comparison window until carrier images fall outside it.
    fn fit_window(&mut self) -> Result<()> {
        if let Some(gap) = self.carrier_gap() {
            while self.n_macro as i64 >= gap && self.n_macro > 8 {
                self.n_macro /= 2;
            }
            if self.n_macro as i64 >= gap {
                return Err(Error::Incommensurate(format!("carriers are only {gap} ring modes apart")));
            }
        }
        Ok(())
    }

    /// ε^β: macroscopic time per unit microscopic time.
    pub fn time_scale(&self) -> f64 {
        self.eps.powi(self.beta)
    }

    /// Slow coordinate y₀(t) = −εst of site 0; site j sits at y₀ + εj.
    pub fn frame_offset(&self, t: f64) -> f64 {
        -self.eps * self.drift * t
    }
}
