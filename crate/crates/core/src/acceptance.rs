//! Desk-scale acceptance checks. Each criterion returns its measured numbers
//! next to the pinned limits; a numerical error inside a criterion is reported
//! as a failed check named after the step that raised it.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use ode_solvers::dop853::Dop853;
use ode_solvers::{System, Vector6};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bridge::{bridge_ladder, demodulate, run_macro, seed_chain, MacroConfig, MacroInitial, ScalingSpec};
use crate::chain::{case_c1_demo, plane_wave_state, step_verlet, total_energy, ChainState, Verlet};
use crate::error::{Error, Result};
use crate::expansion::{
    extract_reduced_coefficients, kdv_coefficients, nls_coefficients, rho1_finite_difference, twi_coefficients,
    verify_cancellation, verify_reduced_hamiltonian_equation, CoefficientRequest, EpsLadder, HamiltonianOptions,
    TwiCoefficients,
};
use crate::fields::{gaussian, gaussian_complex, gaussian_values, nls_p0_field, seeded_rng};
use crate::functionals::Frame;
use crate::macro_pde::{
    solve_kdv_strain, solve_nls, solve_psystem, solve_threewave, AmplitudeState, KdvOptions, PSystemOptions,
    PSystemState, SplitOptions,
};
use crate::potentials_dispersion::{
    build_zset, find_resonant_triads, group_velocity, nls_frame_speed, omega, select_triad_separated,
    PotentialSpec, Triad, ZSet,
};

/// Identifier, title and wall-time budget in seconds.
pub const CRITERIA: [(u32, &str, f64); 12] = [
    (1, "dispersion fidelity", 10.0),
    (2, "symplectic health", 30.0),
    (3, "KdV cancellation", 60.0),
    (4, "nlS leading-order structure", 60.0),
    (5, "coefficient double entry", 1.0),
    (6, "reduced Hamiltonian equation", 60.0),
    (7, "macro-solver oracles", 120.0),
    (8, "micro-macro convergence KdV", 900.0),
    (9, "micro-macro convergence nlS", 600.0),
    (10, "three-wave resonance pipeline", 900.0),
    (11, "shock guard", 600.0),
    (12, "case C1 exactness", 5.0),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub title: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub seconds: f64,
    pub budget_seconds: f64,
    pub passed: bool,
}

impl CriterionOutcome {
    /// One-line summary, `PASS`/`FAIL` first.
    pub fn line(&self) -> String {
        let mut s = format!(
            "{} [{:>2}] {} ({:.2} s / {:.0} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.seconds,
            self.budget_seconds
        );
        for c in &self.checks {
            s.push_str(&format!(" | {}{}={:.4e} ({})", if c.passed { "" } else { "!" }, c.name, c.value, c.limit));
        }
        for n in &self.notes {
            s.push_str(&format!(" | {n}"));
        }
        s
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

#[derive(Default)]
struct Sheet {
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Sheet {
    fn below(&mut self, name: &str, value: f64, limit: f64) {
        self.push(name, value, format!("< {limit:e}"), value < limit);
    }

    fn above(&mut self, name: &str, value: f64, limit: f64) {
        self.push(name, value, format!("> {limit:e}"), value > limit);
    }

    fn within(&mut self, name: &str, value: f64, target: f64, tol: f64) {
        self.push(name, value, format!("{target} ± {tol}"), (value - target).abs() <= tol);
    }

    fn flag(&mut self, name: &str, ok: bool) {
        self.push(name, if ok { 1.0 } else { 0.0 }, "true".into(), ok);
    }

    fn push(&mut self, name: &str, value: f64, limit: String, ok: bool) {
        self.checks.push(Check { name: name.into(), value, limit, passed: ok && value.is_finite() });
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

/// Runs one criterion by number.
pub fn run_criterion(id: u32) -> Result<CriterionOutcome> {
    let &(_, title, budget) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::InvalidParameter(format!("no acceptance criterion {id}")))?;
    let start = Instant::now();
    let mut sheet = Sheet::default();
    let body = match id {
        1 => dispersion_fidelity(&mut sheet),
        2 => symplectic_health(&mut sheet),
        3 => kdv_cancellation(&mut sheet),
        4 => nls_structure(&mut sheet),
        5 => coefficient_double_entry(&mut sheet),
        6 => reduced_hamiltonian(&mut sheet),
        7 => solver_oracles(&mut sheet),
        8 => kdv_bridge(&mut sheet),
        9 => nls_bridge(&mut sheet),
        10 => threewave_pipeline(&mut sheet),
        11 => shock_guard(&mut sheet),
        _ => case_c1(&mut sheet),
    };
    if let Err(e) = body {
        sheet.push("error", f64::NAN, "no error".into(), false);
        sheet.note(format!("aborted: {e}"));
    }
    let seconds = start.elapsed().as_secs_f64();
    let mut passed = !sheet.checks.is_empty() && sheet.checks.iter().all(|c| c.passed);
    if seconds > budget {
        sheet.note(format!("over the {budget} s budget"));
        passed = false;
    }
    Ok(CriterionOutcome {
        id,
        title: title.into(),
        checks: sheet.checks,
        notes: sheet.notes,
        seconds,
        budget_seconds: budget,
        passed,
    })
}

/// Runs every criterion in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| run_criterion(c.0).expect("known criterion")).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn dispersion_fidelity(s: &mut Sheet) -> Result<()> {
    let spec = PotentialSpec::kg(1.0, 1.0, 0.0, 0.0);
    let n = 256;
    let (state, theta) = plane_wave_state(&spec, n, TAU * 13.0 / 256.0, 0.01)?;
    let w = omega(theta, &spec)?;
    let dt = 1e-3;
    // Twenty periods plus margin for the last crossing.
    let steps = (20.5 * TAU / w / dt).ceil() as usize;
    let mut integ = Verlet::new(state, dt)?;
    let mut prev = integ.state.x[0];
    let mut crossings = Vec::new();
    for k in 1..=steps {
        integ.advance(1)?;
        let cur = integ.state.x[0];
        if prev.signum() != cur.signum() && cur != 0.0 {
            let t0 = (k - 1) as f64 * dt;
            crossings.push(t0 + dt * prev / (prev - cur));
        }
        prev = cur;
    }
    let crossings = &crossings[..crossings.len().min(40)];
    let m = crossings.len() as f64;
    let idx: Vec<f64> = (0..crossings.len()).map(|i| i as f64).collect();
    let mi = idx.iter().sum::<f64>() / m;
    let mt = crossings.iter().sum::<f64>() / m;
    let num: f64 = idx.iter().zip(crossings).map(|(i, t)| (i - mi) * (t - mt)).sum();
    let den: f64 = idx.iter().map(|i| (i - mi).powi(2)).sum();
    let measured = PI / (num / den);
    s.within("crossings", m, 40.0, 0.0);
    s.below("rel_freq_error", rel(measured, w), 1e-4);
    s.note(format!("Omega = {w:.10}, measured = {measured:.10}"));
    Ok(())
}

fn symplectic_health(s: &mut Sheet) -> Result<()> {
    let spec = PotentialSpec::fpu(1.0, 0.0, 0.0);
    let n = 256;
    let x = (0..n).map(|j| 0.1 * (TAU * j as f64 / n as f64).sin()).collect();
    let v = (0..n).map(|j| 0.05 * (2.0 * TAU * j as f64 / n as f64).cos()).collect();
    let init = ChainState::new(x, v, spec)?;
    let e0 = total_energy(&init);
    let dt = 0.01;
    let mut integ = Verlet::new(init.clone(), dt)?;
    let mut drift: f64 = 0.0;
    for _ in 0..1000 {
        integ.advance(100)?;
        drift = drift.max(rel(total_energy(&integ.state), e0));
    }
    let back = step_verlet(&integ.state, -dt, 100_000)?;
    let trip = back.x.iter().zip(&init.x).chain(back.v.iter().zip(&init.v)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    s.below("energy_drift", drift, 1e-6);
    s.below("round_trip", trip, 1e-9);
    Ok(())
}

fn kdv_cancellation(s: &mut Sheet) -> Result<()> {
    let spec = PotentialSpec::fpu(1.0, 1.0, 0.0);
    let x = gaussian(512, 40.0, 20.0, 2.0, 1.0)?;
    let xt = gaussian(512, 40.0, 18.0, 3.0, 0.5)?;
    let ladder = EpsLadder::new(0.2, 8)?;
    let r1 = verify_cancellation(&Frame::Kdv { c: 1.0 }, &x, &xt, &spec, &ladder)?;
    let slope = |r: &crate::expansion::ExpansionReport, k: &str| r.slope(k).unwrap_or(f64::NAN);
    s.within("c1_slope_K", slope(&r1, "K"), 3.0, 0.05);
    s.within("c1_slope_V", slope(&r1, "V"), 3.0, 0.05);
    s.within("c1_slope_L", slope(&r1, "L"), 5.0, 0.1);
    let r2 = verify_cancellation(&Frame::Kdv { c: 2.0 }, &x, &xt, &spec, &ladder)?;
    s.within("c2_slope_L", slope(&r2, "L"), 3.0, 0.05);
    let leg = r1.legendre_defects.iter().chain(&r2.legendre_defects).copied().fold(0.0, f64::max);
    s.below("legendre_defect", leg, 1e-6);
    Ok(())
}

fn nls_structure(s: &mut Sheet) -> Result<()> {
    let kg = PotentialSpec::kg(1.0, 1.0, 1.0, 1.0);
    let th = FRAC_PI_2;
    let w = omega(th, &kg)?;
    let b1 = gaussian_values(256, 40.0, 20.0, 3.0, 1.0);
    let b2 = gaussian_values(256, 40.0, 21.0, 3.0, 0.7);
    let x = nls_p0_field(&b1, &b2, 40.0, 16)?;
    let xt = nls_p0_field(&b2, &b1, 40.0, 16)?;
    let ladder = EpsLadder::default();
    let framed = verify_cancellation(&Frame::Nls { c: -group_velocity(th, &kg)?, omega: w, theta: th }, &x, &xt, &kg, &ladder)?;
    let scale = framed.coefficient_scale;
    let coef = |r: &crate::expansion::ExpansionReport, p: i32| r.l_coefficient(p).unwrap_or(f64::NAN).abs();
    let h1 = framed.h_coefficients.first().map(|c| c.1.abs()).unwrap_or(f64::NAN);
    s.below("L1/scale", coef(&framed, 1) / scale, 1e-8);
    s.below("H1/scale", h1 / scale, 1e-8);
    s.below("L2/scale", coef(&framed, 2) / scale, 1e-6);
    let still = verify_cancellation(&Frame::Nls { c: 0.0, omega: w, theta: th }, &x, &xt, &kg, &ladder)?;
    s.above("L2/scale_c0", coef(&still, 2) / still.coefficient_scale, 1e-3);
    s.note(format!("scale = {scale:.4}"));
    Ok(())
}

fn coefficient_double_entry(s: &mut Sheet) -> Result<()> {
    let kg = PotentialSpec::kg(1.0, 1.0, 1.0, 1.0);
    let mut rng = seeded_rng(5);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let th: f64 = rng.gen_range(0.0..TAU);
        let c = nls_frame_speed(th, &kg)?;
        let formula = th.cos() - c * c;
        worst = worst.max((formula - rho1_finite_difference(th, &kg, 1e-3)?).abs());
    }
    s.below("rho1_mismatch", worst, 1e-8);
    let co = nls_coefficients(&kg, FRAC_PI_2)?;
    s.below("rho1_worked", (co.rho1 + 1.0 / 3.0).abs(), 1e-12);
    s.below("rho2_worked", (co.rho2 + 3.0 / 14.0).abs(), 1e-12);
    Ok(())
}

fn reduced_hamiltonian(s: &mut Sheet) -> Result<()> {
    let opts = HamiltonianOptions::default();
    let kdv = extract_reduced_coefficients(&PotentialSpec::fpu(1.0, 1.0, 0.0), &CoefficientRequest::Kdv { c: 1.0 })?;
    let nls = extract_reduced_coefficients(&PotentialSpec::kg(1.0, 1.0, 1.0, 1.0), &CoefficientRequest::Nls { theta: FRAC_PI_2 })?;
    for co in [kdv, nls] {
        for c in verify_reduced_hamiltonian_equation(&co, &opts)? {
            s.below(&c.form, c.max_rel_error, 1e-5);
            if let Some(f) = c.failure {
                s.note(f);
            }
        }
    }
    Ok(())
}

fn triad_setup() -> Result<(PotentialSpec, Triad, ZSet, TwiCoefficients)> {
    let spec = PotentialSpec::kg(-0.22, 1.0, 1.0, 0.0);
    let search = find_resonant_triads(&spec, 200, 1e-12)?;
    let (triad, z) = match select_triad_separated(&search, &spec, 5, 1e-8) {
        Some(p) => p,
        None => {
            let t = search.triads.first().ok_or_else(|| Error::Precondition(search.message.clone()))?;
            let z = build_zset(&t.p[0], &t.p[1], &spec, 5, 1e-8)?;
            return Err(Error::Precondition(format!("no triad satisfies the Z-set assumption; extra pairs {:?}", z.extra)));
        }
    };
    let co = twi_coefficients(&spec, &triad)?;
    Ok((spec, triad, z, co))
}

struct ThreeWaveOde {
    co: TwiCoefficients,
}

impl System<f64, Vector6<f64>> for ThreeWaveOde {
    fn system(&self, _t: f64, y: &Vector6<f64>, dy: &mut Vector6<f64>) {
        let a = [Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3]), Complex64::new(y[4], y[5])];
        for n in 0..3 {
            let (m, k) = ((n + 1) % 3, (n + 2) % 3);
            let r = Complex64::i() * self.co.v3 / (2.0 * self.co.omega[n]) * (a[m] * a[k]).conj();
            dy[2 * n] = r.re;
            dy[2 * n + 1] = r.im;
        }
    }
}

fn solver_oracles(s: &mut Sheet) -> Result<()> {
    let kg = PotentialSpec::kg(1.0, 1.0, 1.0, 1.0);
    let co = nls_coefficients(&kg, FRAC_PI_2)?;
    let a0 = Complex64::new(0.5, 0.2);
    let opts = SplitOptions::default();
    let tr = solve_nls(&AmplitudeState::new(vec![vec![a0; 64]], 20.0)?, &co, 1.0, &opts)?;
    let exact = a0 * Complex64::from_polar(1.0, co.rho2 / co.omega * a0.norm_sqr());
    let err = tr.final_state().a[0].iter().map(|z| (z - exact).norm()).fold(0.0, f64::max);
    s.below("nls_constant", err, 1e-8);

    let kco = kdv_coefficients(&PotentialSpec::fpu(1.0, 1.0, 0.0), 1.0)?;
    let u0 = gaussian_values(256, 40.0, 20.0, 2.0, 1.0);
    let kt = solve_kdv_strain(&u0, 40.0, &kco, 1.0, &KdvOptions::default())?;
    let drift = |v: &[f64]| v.iter().map(|x| rel(*x, v[0])).fold(0.0, f64::max);
    s.below("kdv_mass_drift", drift(&kt.mass), 1e-8);
    s.below("kdv_l2_drift", drift(&kt.l2), 1e-8);

    let (_, _, _, tco) = triad_setup()?;
    let pulses = [
        gaussian_complex(64, 40.0, 18.0, 4.0, Complex64::new(0.6, 0.1), 0.0),
        gaussian_complex(64, 40.0, 21.0, 5.0, Complex64::new(0.5, -0.2), 0.0),
        gaussian_complex(64, 40.0, 20.0, 3.0, Complex64::new(0.1, 0.0), 0.0),
    ];
    let tt = solve_threewave(&AmplitudeState::new(pulses.to_vec(), 40.0)?, &tco, 1.0, &opts)?;
    let inv: Vec<f64> = tt.invariants.iter().map(|p| p.0).collect();
    s.below("twi_invariant_drift", drift(&inv), 1e-8);

    let c0 = [Complex64::new(0.8, 0.1), Complex64::new(0.6, -0.3), Complex64::new(0.2, 0.4)];
    let flat = AmplitudeState::new(c0.iter().map(|z| vec![*z; 8]).collect(), 40.0)?;
    let opts = SplitOptions { output_interval: 0.1, ..Default::default() };
    let ft = solve_threewave(&flat, &tco, 1.0, &opts)?;
    let y0 = Vector6::new(c0[0].re, c0[0].im, c0[1].re, c0[1].im, c0[2].re, c0[2].im);
    let mut ode = Dop853::new(ThreeWaveOde { co: tco.clone() }, 0.0, 1.0, 0.1, y0, 1e-13, 1e-14);
    ode.integrate().map_err(|e| Error::InvalidParameter(format!("ODE oracle failed: {e:?}")))?;
    let (ts, ys) = ode.results().get();
    let mut sup: f64 = 0.0;
    for st in &ft.states {
        let Some(i) = ts.iter().position(|t| (t - st.tau).abs() < 1e-9) else {
            return Err(Error::InvalidParameter(format!("oracle has no output at tau = {}", st.tau)));
        };
        for n in 0..3 {
            let z = Complex64::new(ys[i][2 * n], ys[i][2 * n + 1]);
            sup = sup.max(st.a[n].iter().map(|a| (a - z).norm()).fold(0.0, f64::max));
        }
    }
    s.below("twi_ode_sup_error", sup, 1e-7);
    Ok(())
}

fn kdv_bridge(s: &mut Sheet) -> Result<()> {
    let fpu = PotentialSpec::fpu(1.0, 1.0, 0.0);
    let mut u = gaussian_values(256, 40.0, 20.0, 2.0, 1.0);
    let mean = u.iter().sum::<f64>() / u.len() as f64;
    u.iter_mut().for_each(|v| *v -= mean);
    let reps = bridge_ladder(|e| ScalingSpec::kdv(e, 40.0, &fpu), &fpu, &MacroInitial::Kdv { u }, &MacroConfig::default(), 0.5, &[0.2, 0.1, 0.05])?;
    let errs: Vec<f64> = reps.iter().map(|r| r.final_error().unwrap_or(f64::NAN)).collect();
    for (r, e) in reps.iter().zip(&errs) {
        s.note(format!("eps {} (N = {}): {e:.3e}", r.eps_used, r.n_sites));
    }
    s.below("ratio_0.1/0.2", errs[1] / errs[0], 0.7);
    s.below("ratio_0.05/0.1", errs[2] / errs[1], 0.7);
    Ok(())
}

fn nls_bridge(s: &mut Sheet) -> Result<()> {
    let kg = PotentialSpec::kg(1.0, 1.0, 1.0, 1.0);
    let init = MacroInitial::Nls { a: gaussian_complex(256, 40.0, 20.0, 4.0, Complex64::new(1.0, 0.0), 0.0) };
    let mut finals = Vec::new();
    for correction in [false, true] {
        let cfg = MacroConfig { correction, ..Default::default() };
        let reps = bridge_ladder(|e| ScalingSpec::nls(e, 40.0, FRAC_PI_2, &kg), &kg, &init, &cfg, 0.5, &[0.2, 0.1])?;
        let errs: Vec<f64> = reps.iter().map(|r| r.final_error().unwrap_or(f64::NAN)).collect();
        s.note(format!("correction {correction}: {:.3e}, {:.3e}", errs[0], errs[1]));
        s.below(&format!("ratio_corr_{correction}"), errs[1] / errs[0], 1.0);
        finals.push(errs);
    }
    for i in 0..2 {
        s.below(&format!("on/off_eps_{}", [0.2, 0.1][i]), finals[1][i] / finals[0][i], 1.1);
    }
    Ok(())
}

fn threewave_pipeline(s: &mut Sheet) -> Result<()> {
    let (spec, triad, z, _) = triad_setup()?;
    s.below("triad_residual", triad.residual, 1e-10);
    s.flag("zset_six_pairs", z.assumption_holds);
    if !z.extra.is_empty() {
        s.note(format!("extra pairs {:?}", z.extra));
    }
    let g = gaussian_complex(128, 40.0, 20.0, 6.0, Complex64::new(0.7, 0.0), 0.0);
    let init = MacroInitial::Twi { a: [g.clone(), g, vec![Complex64::new(0.0, 0.0); 128]] };
    let cfg = MacroConfig::default();
    let tau_end = 0.5;
    let make = |e| ScalingSpec::twi(e, 40.0, &triad, &spec);
    let reps = bridge_ladder(make, &spec, &init, &cfg, tau_end, &[0.1, 0.05])?;
    let errs: Vec<f64> = reps.iter().map(|r| r.final_error().unwrap_or(f64::NAN)).collect();
    s.below("error_eps_0.1", errs[0], 0.2);
    s.below("ratio_0.05/0.1", errs[1] / errs[0], 1.0);

    // Transfer is read off the chain itself.
    let sc = make(0.1)?;
    let run = run_macro(&sc, &spec, &init, &cfg, tau_end)?;
    let state = seed_chain(&run.snapshots[0], &sc, &spec)?;
    let t_end = tau_end / sc.time_scale();
    let m = (t_end / reps[0].micro_dt).ceil() as usize;
    let mut integ = Verlet::new(state, t_end / m as f64)?;
    integ.advance(m)?;
    let d = demodulate(&integ.state, &sc, t_end)?;
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let n0 = run.compare[0].iter().map(|f| norm(f).powi(2)).sum::<f64>().sqrt();
    s.above("chain_A3_transfer", norm(&d.fields[2]) / n0, 0.05);
    s.note(format!("errors {:.3e}, {:.3e}; n_macro {}", errs[0], errs[1], sc.n_macro));
    Ok(())
}

fn shock_guard(s: &mut Sheet) -> Result<()> {
    let fpu = PotentialSpec::fpu(1.0, 1.0, 0.0);
    let sine = |n: usize| (0..n).map(|j| 0.1 * (TAU * j as f64 / n as f64).sin()).collect::<Vec<f64>>();
    let opts = PSystemOptions::default();
    let mut shocks = Vec::new();
    for n in [1024, 4096] {
        let st = PSystemState::new(sine(n), vec![0.0; n], TAU)?;
        let r = solve_psystem(&st, &fpu, 60.0, &opts)?;
        shocks.push(r.shock_time.ok_or_else(|| Error::InvalidParameter(format!("no shock flagged at N = {n}")))?);
    }
    s.below("shock_refinement_rel", rel(shocks[1], shocks[0]), 0.05);
    let ts = shocks[0];

    let n = 1024;
    let init = MacroInitial::We { r: sine(n), w: vec![0.0; n] };
    let cfg = MacroConfig { output_interval: 0.5, ..Default::default() };
    let past = bridge_ladder(|e| ScalingSpec::we(e, TAU), &fpu, &init, &cfg, 1.2 * ts, &[0.1])?;
    let p = &past[0];
    s.flag("truncated_at_shock", p.truncated_at_shock);
    s.flag("no_error_past_shock", p.tau_grid.iter().all(|t| *t <= ts + 1e-12));
    s.flag("error_at_refuses", p.error_at(1.1 * ts).is_err());

    let reps = bridge_ladder(|e| ScalingSpec::we(e, TAU), &fpu, &init, &cfg, 0.5 * ts, &[0.1, 0.05])?;
    let errs: Vec<f64> = reps.iter().map(|r| r.final_error().unwrap_or(f64::NAN)).collect();
    s.below("pre_shock_ratio", errs[1] / errs[0], 1.0);
    s.note(format!("shock_time {:.3} / {:.3}; pre-shock errors {:.3e}, {:.3e}", shocks[0], shocks[1], errs[0], errs[1]));
    Ok(())
}

fn case_c1(s: &mut Sheet) -> Result<()> {
    let spec = PotentialSpec::fpu(1.0, 0.0, 0.0);
    let r = case_c1_demo(&spec, 16, 4, |i| ((i as f64).sin(), 0.1 * (i as f64).cos()), 10.0, 0.01)?;
    s.below("ballistic_deviation", r.max_deviation, 1e-10);
    Ok(())
}
