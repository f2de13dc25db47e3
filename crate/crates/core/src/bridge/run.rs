use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ansatz::{reconstruct, Derivative, MacroSnapshot};
use super::demod::demodulate;
use super::ScalingSpec;
use crate::chain::{default_dt, force, ChainState, Verlet};
use crate::error::{Error, Result};
use crate::expansion::{kdv_coefficients, nls_coefficients, KdvCoefficients, NlsCoefficients, TwiCoefficients};
use crate::functionals::Reduction;
use crate::macro_pde::{
    solve_kdv_strain, solve_nls, solve_psystem, solve_threewave, AmplitudeState, KdvOptions, PSystemOptions, PSystemState,
    SplitOptions,
};
use crate::potentials_dispersion::PotentialSpec;
use crate::spectral::{resample_complex, to_complex};

/// Initial macroscopic data on the solver grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MacroInitial {
    We { r: Vec<f64>, w: Vec<f64> },
    Kdv { u: Vec<f64> },
    Nls { a: Vec<Complex64> },
    Twi { a: [Vec<Complex64>; 3] },
}

impl MacroInitial {
    pub fn reduction(&self) -> Reduction {
        match self {
            MacroInitial::We { .. } => Reduction::We,
            MacroInitial::Kdv { .. } => Reduction::Kdv,
            MacroInitial::Nls { .. } => Reduction::Nls,
            MacroInitial::Twi { .. } => Reduction::Twi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacroConfig {
    /// Spacing of the comparison times in τ.
    pub output_interval: f64,
    /// Step of the KdV/nlS/3WI solvers.
    pub macro_dt: f64,
    /// Seed the nlS chain with the second-order correction.
    pub correction: bool,
    pub psystem: PSystemOptions,
    /// Microscopic step; defaults to min(0.05, 0.2/Ω_max), further capped
    /// for carrier reductions so that the Verlet phase error ω³dt²t/24
    /// accumulated over the run stays below `phase_budget`·ε.
    pub micro_dt: Option<f64>,
    pub phase_budget: f64,
}

impl Default for MacroConfig {
    fn default() -> Self {
        MacroConfig {
            output_interval: 0.05,
            macro_dt: 1e-3,
            correction: false,
            psystem: PSystemOptions::default(),
            micro_dt: None,
            phase_budget: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeReport {
    pub reduction: Reduction,
    pub eps_requested: f64,
    pub eps_used: f64,
    pub n_sites: usize,
    pub n_macro: usize,
    pub correction: Option<bool>,
    pub tau_grid: Vec<f64>,
    /// L² distance of demodulated and macroscopic fields over the initial norm.
    pub error: Vec<f64>,
    pub residual_slope: Option<f64>,
    pub shock_time: Option<f64>,
    /// Comparison stopped at the p-system shock.
    pub truncated_at_shock: bool,
    pub micro_dt: f64,
    pub micro_steps: usize,
    pub max_tail_ratio: f64,
    pub warnings: Vec<String>,
}

impl BridgeReport {
    pub fn final_error(&self) -> Option<f64> {
        self.error.last().copied()
    }

    /// Error at τ, refusing times past the shock.
    pub fn error_at(&self, tau: f64) -> Result<f64> {
        if let (true, Some(ts)) = (self.truncated_at_shock, self.shock_time) {
            if tau > ts {
                return Err(Error::ShockReached { shock_time: ts, tau });
            }
        }
        self.tau_grid
            .iter()
            .position(|t| (t - tau).abs() <= 1e-9 * (1.0 + tau.abs()))
            .map(|i| self.error[i])
            .ok_or_else(|| Error::InvalidParameter(format!("tau = {tau} is not on the comparison grid")))
    }
}

/// Three-wave coefficients of the snapped carriers.
pub fn twi_coefficients_from_carriers(scaling: &ScalingSpec, spec: &PotentialSpec) -> Result<TwiCoefficients> {
    if scaling.carriers.len() != 3 {
        return Err(Error::Precondition("three-wave scaling needs three carriers".into()));
    }
    let mut co = TwiCoefficients { theta: [0.0; 3], omega: [0.0; 3], omega_prime: [0.0; 3], omega_omega_prime: [0.0; 3], v3: spec.v3() };
    for (n, c) in scaling.carriers.iter().enumerate() {
        co.theta[n] = c.theta;
        co.omega[n] = c.omega;
        co.omega_omega_prime[n] = spec.alpha * c.theta.sin();
        co.omega_prime[n] = co.omega_omega_prime[n] / c.omega;
    }
    Ok(co)
}

/// Macroscopic solution sampled at the comparison times.
#[derive(Debug, Clone)]
pub struct MacroRun {
    pub taus: Vec<f64>,
    pub snapshots: Vec<MacroSnapshot>,
    /// Primary fields on the n_macro grid.
    pub compare: Vec<Vec<Vec<Complex64>>>,
    pub shock_time: Option<f64>,
    pub truncated_at_shock: bool,
}

fn on_macro_grid(fields: &[Vec<Complex64>], n_macro: usize) -> Vec<Vec<Complex64>> {
    fields.iter().map(|f| resample_complex(f, n_macro)).collect()
}

enum Coeffs {
    None,
    Kdv(KdvCoefficients),
    Nls(NlsCoefficients),
    Twi(TwiCoefficients),
}

fn coefficients(scaling: &ScalingSpec, spec: &PotentialSpec) -> Result<Coeffs> {
    Ok(match scaling.reduction {
        Reduction::We => Coeffs::None,
        Reduction::Kdv => Coeffs::Kdv(kdv_coefficients(spec, scaling.c)?),
        Reduction::Nls => Coeffs::Nls(nls_coefficients(spec, scaling.carriers[0].theta)?),
        Reduction::Twi => Coeffs::Twi(twi_coefficients_from_carriers(scaling, spec)?),
    })
}

/// Solves the reduced model and converts its outputs into ansatz snapshots.
pub fn run_macro(scaling: &ScalingSpec, spec: &PotentialSpec, init: &MacroInitial, cfg: &MacroConfig, tau_end: f64) -> Result<MacroRun> {
    if init.reduction() != scaling.reduction {
        return Err(Error::Precondition(format!("initial data for {:?}, scaling for {:?}", init.reduction(), scaling.reduction)));
    }
    let l = scaling.length;
    let nm = scaling.n_macro;
    let split = SplitOptions { dt: cfg.macro_dt, output_interval: cfg.output_interval, ..SplitOptions::default() };
    let mut run = MacroRun { taus: vec![], snapshots: vec![], compare: vec![], shock_time: None, truncated_at_shock: false };
    match (init, coefficients(scaling, spec)?) {
        (MacroInitial::We { r, w }, _) => {
            let opts = PSystemOptions { output_interval: cfg.output_interval, ..cfg.psystem };
            let res = solve_psystem(&PSystemState::new(r.clone(), w.clone(), l)?, spec, tau_end, &opts)?;
            run.shock_time = res.shock_time;
            for s in &res.snapshots {
                if let Some(ts) = res.shock_time {
                    if s.tau > ts + 1e-12 {
                        run.truncated_at_shock = true;
                        break;
                    }
                }
                run.taus.push(s.tau);
                run.snapshots.push(MacroSnapshot::we(&s.r, &s.w, l, spec, s.tau)?);
                run.compare.push(on_macro_grid(&[to_complex(&s.r), to_complex(&s.w)], nm));
            }
        }
        (MacroInitial::Kdv { u }, Coeffs::Kdv(co)) => {
            let opts = KdvOptions { dt: cfg.macro_dt, output_interval: cfg.output_interval, ..KdvOptions::default() };
            let tr = solve_kdv_strain(u, l, &co, tau_end, &opts)?;
            for (tau, u) in tr.times.iter().zip(&tr.u) {
                run.taus.push(*tau);
                run.snapshots.push(MacroSnapshot::kdv(u, l, &co, *tau)?);
                run.compare.push(on_macro_grid(&[to_complex(u)], nm));
            }
        }
        (MacroInitial::Nls { a }, Coeffs::Nls(co)) => {
            let tr = solve_nls(&AmplitudeState::new(vec![a.clone()], l)?, &co, tau_end, &split)?;
            let corr = cfg.correction.then_some(scaling.eps);
            for s in &tr.states {
                run.taus.push(s.tau);
                run.snapshots.push(MacroSnapshot::nls(&s.a[0], l, &co, corr, s.tau));
                run.compare.push(on_macro_grid(&s.a, nm));
            }
        }
        (MacroInitial::Twi { a }, Coeffs::Twi(co)) => {
            let tr = solve_threewave(&AmplitudeState::new(a.to_vec(), l)?, &co, tau_end, &split)?;
            for s in &tr.states {
                run.taus.push(s.tau);
                run.snapshots.push(MacroSnapshot::twi(&s.a, l, &co, s.tau));
                run.compare.push(on_macro_grid(&s.a, nm));
            }
        }
        _ => unreachable!("coefficients follow the reduction"),
    }
    Ok(run)
}

/// Chain state of the ansatz at t = 0.
pub fn seed_chain(snap: &MacroSnapshot, scaling: &ScalingSpec, spec: &PotentialSpec) -> Result<ChainState> {
    for c in &scaling.carriers {
        let m = c.theta * scaling.n as f64 / std::f64::consts::TAU;
        if (m - m.round()).abs() > 1e-9 {
            return Err(Error::Incommensurate(format!("carrier theta = {} is not 2πm/N for N = {}", c.theta, scaling.n)));
        }
    }
    let x = reconstruct(snap, scaling, 0.0, Derivative::Position)?;
    let v = reconstruct(snap, scaling, 0.0, Derivative::Velocity)?;
    ChainState::new(x, v, spec.clone())
}

fn l2(fields: &[Vec<Complex64>]) -> f64 {
    fields.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn distance(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter().zip(b).flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u - v).norm_sqr())).sum::<f64>().sqrt()
}

/// Runs chain and reduced model side by side and measures the normalised
/// discrepancy of the demodulated fields at every comparison time.
pub fn micro_macro_error(
    scaling: &ScalingSpec,
    spec: &PotentialSpec,
    init: &MacroInitial,
    cfg: &MacroConfig,
    tau_end: f64,
) -> Result<BridgeReport> {
    let run = run_macro(scaling, spec, init, cfg, tau_end)?;
    let state = seed_chain(&run.snapshots[0], scaling, spec)?;
    let eb = scaling.time_scale();
    let dt_max = match cfg.micro_dt {
        Some(dt) => dt,
        None => {
            let mut dt = default_dt(spec)?;
            let w = scaling.carriers.iter().map(|c| c.omega.abs()).fold(0.0, f64::max);
            if w > 0.0 {
                let horizon = tau_end / eb;
                dt = dt.min((24.0 * cfg.phase_budget * scaling.eps / (w.powi(3) * horizon)).sqrt());
            }
            dt
        }
    };
    let norm0 = l2(&run.compare[0]);
    let mut report = BridgeReport {
        reduction: scaling.reduction,
        eps_requested: scaling.eps_requested,
        eps_used: scaling.eps,
        n_sites: scaling.n,
        n_macro: scaling.n_macro,
        correction: (scaling.reduction == Reduction::Nls).then_some(cfg.correction),
        tau_grid: Vec::new(),
        error: Vec::new(),
        residual_slope: None,
        shock_time: run.shock_time,
        truncated_at_shock: run.truncated_at_shock,
        micro_dt: dt_max,
        micro_steps: 0,
        max_tail_ratio: 0.0,
        warnings: Vec::new(),
    };
    if run.truncated_at_shock {
        report.warnings.push(format!("p-system shock at tau = {:.4}; no comparison past it", run.shock_time.unwrap_or(f64::NAN)));
    }
    let mut integ = Verlet::new(state, dt_max)?;
    let mut alias_warned = false;
    for (k, tau) in run.taus.iter().enumerate() {
        if k > 0 {
            let dt_total = (tau - run.taus[k - 1]) / eb;
            let m = ((dt_total / dt_max) - 1e-9).ceil().max(1.0) as usize;
            let dt = dt_total / m as f64;
            if (dt - integ.dt).abs() > 1e-15 * dt {
                integ.set_dt(dt)?;
            }
            integ.advance(m)?;
            report.micro_steps += m;
            report.micro_dt = report.micro_dt.min(dt);
        }
        let t = tau / eb;
        let d = demodulate(&integ.state, scaling, t)?;
        report.max_tail_ratio = report.max_tail_ratio.max(d.tail_ratio);
        if d.aliasing_warning && !alias_warned {
            report.warnings.push(format!("demodulated spectral tail {:.2e} of peak at tau = {tau:.4}", d.tail_ratio));
            alias_warned = true;
        }
        let diff = distance(&d.fields, &run.compare[k]);
        report.tau_grid.push(*tau);
        report.error.push(if norm0 > 0.0 { diff / norm0 } else { diff });
    }
    Ok(report)
}

/// Sup over sites of |ẍ_j − F_j(x)| along the ansatz trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub eps: f64,
    pub t: Vec<f64>,
    pub norms: Vec<f64>,
}

impl ResidualReport {
    pub fn max_norm(&self) -> f64 {
        self.norms.iter().cloned().fold(0.0, f64::max)
    }
}

/// Residual of the lattice equations for the ansatz built from `snapshots`.
pub fn ansatz_residual(snapshots: &[MacroSnapshot], scaling: &ScalingSpec, spec: &PotentialSpec) -> Result<ResidualReport> {
    let eb = scaling.time_scale();
    let mut out = ResidualReport { eps: scaling.eps, t: Vec::new(), norms: Vec::new() };
    for s in snapshots {
        let t = s.tau / eb;
        let x = reconstruct(s, scaling, t, Derivative::Position)?;
        let a = reconstruct(s, scaling, t, Derivative::Acceleration)?;
        let f = force(&ChainState::new(x, vec![0.0; scaling.n], spec.clone())?);
        out.t.push(t);
        out.norms.push(a.iter().zip(&f).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max));
    }
    Ok(out)
}

/// Residual decay across an ε-ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualLadder {
    pub eps: Vec<f64>,
    pub max_norm: Vec<f64>,
    /// Least-squares slope of log(max norm) against log ε.
    pub slope: f64,
}

/// Evaluates the residual for each ε (in parallel) and fits its decay.
pub fn residual_ladder<F>(
    make_scaling: F,
    spec: &PotentialSpec,
    init: &MacroInitial,
    cfg: &MacroConfig,
    tau_end: f64,
    eps: &[f64],
) -> Result<ResidualLadder>
where
    F: Fn(f64) -> Result<ScalingSpec> + Sync,
{
    let rows: Vec<Result<(f64, f64)>> = eps
        .par_iter()
        .map(|&e| {
            let sc = make_scaling(e)?;
            let run = run_macro(&sc, spec, init, cfg, tau_end)?;
            Ok((sc.eps, ansatz_residual(&run.snapshots, &sc, spec)?.max_norm()))
        })
        .collect();
    let rows: Vec<(f64, f64)> = rows.into_iter().collect::<Result<_>>()?;
    let lx: Vec<f64> = rows.iter().map(|r| r.0.ln()).collect();
    let ly: Vec<f64> = rows.iter().map(|r| r.1.max(f64::MIN_POSITIVE).ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    Ok(ResidualLadder { eps: rows.iter().map(|r| r.0).collect(), max_norm: rows.iter().map(|r| r.1).collect(), slope: sxy / sxx })
}

/// micro_macro_error over several ε, run in parallel and returned in input order.
pub fn bridge_ladder<F>(
    make_scaling: F,
    spec: &PotentialSpec,
    init: &MacroInitial,
    cfg: &MacroConfig,
    tau_end: f64,
    eps: &[f64],
) -> Result<Vec<BridgeReport>>
where
    F: Fn(f64) -> Result<ScalingSpec> + Sync,
{
    eps.par_iter().map(|&e| micro_macro_error(&make_scaling(e)?, spec, init, cfg, tau_end)).collect()
}
