//! One function per subcommand. Each fills the context with files, checks
//! and fitted numbers, and may overwrite config fields with resolved values.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde_json::{json, Value};
use twoscale::acceptance::{run_criterion, CRITERIA};
use twoscale::bridge::{bridge_ladder, BridgeReport, MacroConfig, MacroInitial, ScalingSpec};
use twoscale::chain::snap_theta;
use twoscale::expansion::{
    extract_reduced_coefficients, kdv_coefficients, nls_coefficients, twi_coefficients, verify_cancellation,
    CoefficientRequest, EpsLadder, ReducedCoefficients,
};
use twoscale::fields::{gaussian_complex, gaussian_values, grid, nls_p0_field, random_bandlimited_values, random_field, seeded_rng, twi_p0_field};
use twoscale::functionals::{Frame, MacroField};
use twoscale::macro_pde::{
    solve_kdv_strain, solve_nls, solve_psystem, solve_threewave, AmplitudeState, AmplitudeTrajectory, KdvOptions,
    PSystemOptions, PSystemState, SplitOptions,
};
use twoscale::potentials_dispersion::{select_triad_separated, TriadStatus};
use twoscale::{
    build_zset, find_resonant_triads, group_velocity, omega, total_energy, ChainKind, ChainState, Complex64, PotentialSpec,
    Triad, Verlet,
};

use crate::config::{ChainInit, Correction, ExperimentConfig, FieldShape, Kind, Model, ReductionName};
use crate::output::{num, Artifacts};

#[derive(Debug)]
pub enum Failure {
    Schema(String),
    Runtime(String),
}

impl From<twoscale::Error> for Failure {
    fn from(e: twoscale::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(format!("i/o: {e}"))
    }
}

type Out = Result<(), Failure>;

pub struct Ctx {
    pub cfg: ExperimentConfig,
    pub art: Artifacts,
    pub checks: BTreeMap<String, bool>,
    pub numbers: BTreeMap<String, Value>,
}

impl Ctx {
    fn check(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.into(), ok);
    }

    fn put(&mut self, name: &str, v: Value) {
        self.numbers.insert(name.into(), v);
    }

    fn potential(&self) -> Result<PotentialSpec, Failure> {
        let p = self.cfg.potential.as_ref().ok_or_else(|| missing("potential"))?;
        let spec = p.spec().map_err(Failure::Schema)?;
        if p.kind == Kind::Kg && p.check_stability {
            spec.check_stability()?;
        }
        Ok(spec)
    }
}

fn missing(table: &str) -> Failure {
    Failure::Schema(format!("missing [{table}] table"))
}

fn need<T: Clone>(t: &Option<T>, name: &str) -> Result<T, Failure> {
    t.clone().ok_or_else(|| missing(name))
}

fn positive(name: &str, x: f64) -> Result<(), Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Failure::Schema(format!("{name} must be positive, got {x}")))
    }
}

/// Triad with the cleanest carrier spectrum among those satisfying the
/// 𝒵-set assumption within radius 5.
fn default_triad(spec: &PotentialSpec) -> Result<Triad, Failure> {
    let search = find_resonant_triads(spec, 200, 1e-12)?;
    match select_triad_separated(&search, spec, 5, 1e-8) {
        Some((t, _)) => Ok(t),
        None => Err(Failure::Runtime(format!("no usable resonant triad: {}", search.message))),
    }
}

pub fn dispersion(ctx: &mut Ctx) -> Out {
    let d = need(&ctx.cfg.dispersion, "dispersion")?;
    if d.ny == 0 {
        return Err(Failure::Schema("dispersion.ny must be at least 1".into()));
    }
    let spec = ctx.potential()?;
    // Cell-centred samples of [0, 2π) avoid θ = 0, where Ω′ is undefined for FPU.
    let mut rows = Vec::with_capacity(d.ny);
    for j in 0..d.ny {
        let th = TAU * (j as f64 + 0.5) / d.ny as f64;
        rows.push(vec![num(th), num(omega(th, &spec)?), num(group_velocity(th, &spec)?)]);
    }
    ctx.art.csv("dispersion.csv", &["theta", "omega", "group_velocity"], &rows)?;
    ctx.put("omega_max", json!(twoscale::chain::omega_max(&spec)?));
    ctx.put("rows", json!(d.ny));
    Ok(())
}

pub fn resonance(ctx: &mut Ctx) -> Out {
    let r = ctx.cfg.resonance.clone().unwrap_or_else(|| toml::from_str("").expect("defaults"));
    let spec = ctx.potential()?;
    let search = find_resonant_triads(&spec, r.samples, r.tol)?;
    let rows: Vec<Vec<String>> = search
        .triads
        .iter()
        .map(|t| {
            let (th, w) = (t.thetas(), t.omegas());
            th.iter().chain(&w).map(|x| num(*x)).chain([num(t.residual)]).collect()
        })
        .collect();
    ctx.art.csv(
        "triads.csv",
        &["theta1", "theta2", "theta3", "omega1", "omega2", "omega3", "residual"],
        &rows,
    )?;
    ctx.put("triads", json!(search.triads.len()));
    ctx.put("status", json!(format!("{:?}", search.status)));
    ctx.put("message", json!(search.message));
    ctx.cfg.resonance = Some(r.clone());
    if search.status != TriadStatus::Found {
        return Ok(());
    }
    match select_triad_separated(&search, &spec, r.zset_radius, r.zset_tol) {
        Some((t, z)) => {
            ctx.put("selected", json!({"theta": t.thetas(), "omega": t.omegas(), "residual": t.residual,
                "carrier_separation": t.carrier_separation(), "harmonic_separation": t.harmonic_separation()}));
            ctx.put("zset_members", json!(z.members.iter().collect::<Vec<_>>()));
            ctx.check("zset_six_pairs", true);
        }
        None => {
            let t = &search.triads[0];
            let z = build_zset(&t.p[0], &t.p[1], &spec, r.zset_radius, r.zset_tol)?;
            ctx.put("extra_pairs", json!(z.extra));
            ctx.check("zset_six_pairs", false);
        }
    }
    Ok(())
}

pub fn simulate_chain(ctx: &mut Ctx) -> Out {
    let mut c = need(&ctx.cfg.chain, "chain")?;
    let spec = ctx.potential()?;
    positive("chain.dt", c.dt)?;
    if c.stride == 0 || c.n < 2 {
        return Err(Failure::Schema("chain.stride must be >= 1 and chain.n >= 2".into()));
    }
    let state = match c.init {
        ChainInit::PlaneWave => {
            let th = c.theta.ok_or_else(|| Failure::Schema("chain.init = \"plane_wave\" needs chain.theta".into()))?;
            let (st, snapped) = twoscale::chain::plane_wave_state(&spec, c.n, th, c.amplitude)?;
            c.theta = Some(snapped);
            st
        }
        ChainInit::Random => {
            let mut rng = seeded_rng(ctx.cfg.seed);
            let scale = |v: Vec<f64>| {
                let m = v.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
                v.into_iter().map(|x| c.amplitude * x / m).collect::<Vec<_>>()
            };
            let x = scale(random_bandlimited_values(c.n, c.modes, &mut rng));
            let v = scale(random_bandlimited_values(c.n, c.modes, &mut rng));
            ChainState::new(x, v, spec.clone())?
        }
    };
    let e0 = total_energy(&state);
    let mut integ = Verlet::new(state, c.dt)?;
    let mut rows = Vec::new();
    let mut snap = 0usize;
    let mut record = |integ: &Verlet, art: &mut Artifacts, rows: &mut Vec<Vec<String>>| -> Out {
        let s = &integ.state;
        rows.push(vec![num(s.t), num(total_energy(s)), num(s.momentum())]);
        if c.snapshots {
            let body: Vec<Vec<String>> = (0..s.n()).map(|j| vec![j.to_string(), num(s.x[j]), num(s.v[j])]).collect();
            art.csv(&format!("snapshot_{snap:05}.csv"), &["j", "x", "v"], &body)?;
            snap += 1;
        }
        Ok(())
    };
    record(&integ, &mut ctx.art, &mut rows)?;
    let mut done = 0;
    while done < c.steps {
        let k = c.stride.min(c.steps - done);
        integ.advance(k)?;
        done += k;
        record(&integ, &mut ctx.art, &mut rows)?;
    }
    ctx.art.csv("chain.csv", &["t", "H", "momentum"], &rows)?;
    let e1 = total_energy(&integ.state);
    ctx.put("energy_initial", json!(e0));
    ctx.put("energy_final", json!(e1));
    ctx.put("relative_energy_drift", json!(if e0 != 0.0 { (e1 - e0).abs() / e0.abs() } else { (e1 - e0).abs() }));
    ctx.cfg.chain = Some(c);
    Ok(())
}

fn real_field(shape: FieldShape, ny: usize, length: f64, width: f64, amp: f64, center: f64, seed: u64) -> Result<MacroField, Failure> {
    Ok(match shape {
        FieldShape::Gaussian => MacroField::new(ny, length, 0, 1, gaussian_values(ny, length, center, width, amp))?,
        FieldShape::Random => {
            let f = random_field(ny, length, 0, 1, 8, 0, &mut seeded_rng(seed))?;
            f.scale(amp / f.max_abs().max(f64::MIN_POSITIVE))
        }
    })
}

fn real_profile(shape: FieldShape, ny: usize, length: f64, width: f64, amp: f64, center: f64, seed: u64, modes: usize) -> Vec<f64> {
    match shape {
        FieldShape::Gaussian => gaussian_values(ny, length, center, width, amp),
        FieldShape::Random => {
            let v = random_bandlimited_values(ny, modes, &mut seeded_rng(seed));
            let m = v.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
            v.into_iter().map(|x| amp * x / m).collect()
        }
    }
}

pub fn expand(ctx: &mut Ctx) -> Out {
    let mut e = need(&ctx.cfg.expand, "expand")?;
    let spec = ctx.potential()?;
    let seed = ctx.cfg.seed;
    let (ny, l, w, a) = (e.ny, e.length, e.width, e.amplitude);
    let mid = l / 2.0;
    let (frame, x, xt, request) = match e.reduction {
        ReductionName::We | ReductionName::Kdv => {
            if spec.kind != ChainKind::Fpu {
                return Err(Failure::Schema("the we and kdv reductions need potential.kind = \"fpu\"".into()));
            }
            let x = real_field(e.field, ny, l, w, a, mid, seed)?;
            let xt = real_field(e.field, ny, l, 1.5 * w, 0.5 * a, mid - 2.0, seed.wrapping_add(1))?;
            if e.reduction == ReductionName::We {
                (Frame::We, x, xt, None)
            } else {
                let c = e.c.unwrap_or_else(|| spec.v2().sqrt());
                e.c = Some(c);
                (Frame::Kdv { c }, x, xt, Some(CoefficientRequest::Kdv { c }))
            }
        }
        ReductionName::Nls => {
            let th = e.theta.ok_or_else(|| Failure::Schema("expand.reduction = \"nls\" needs expand.theta".into()))?;
            let c = match e.c {
                Some(c) => c,
                None => -group_velocity(th, &spec)?,
            };
            e.c = Some(c);
            let b1 = real_profile(e.field, ny, l, w, a, mid, seed, e.modes);
            let b2 = real_profile(e.field, ny, l, w, 0.7 * a, mid + 1.0, seed.wrapping_add(1), e.modes);
            let x = nls_p0_field(&b1, &b2, l, e.nphi)?;
            let xt = nls_p0_field(&b2, &b1, l, e.nphi)?;
            (Frame::Nls { c, omega: omega(th, &spec)?, theta: th }, x, xt, Some(CoefficientRequest::Nls { theta: th }))
        }
        ReductionName::Twi => {
            let t = default_triad(&spec)?;
            let (th, om) = (t.thetas(), t.omegas());
            let envelope = |amp: f64, center: f64| gaussian_complex(ny, l, center, w, Complex64::new(amp, 0.0), 0.0);
            let (g1, g2, g3) = (envelope(a, mid), envelope(0.8 * a, mid + 1.0), envelope(0.5 * a, mid - 1.0));
            let x = twi_p0_field([&g1, &g2, &g3], l, e.nphi)?;
            let xt = twi_p0_field([&g3, &g1, &g2], l, e.nphi)?;
            ctx.put("triad", json!({"theta": th, "omega": om}));
            (Frame::Twi { omega: [om[0], om[1]], theta: [th[0], th[1]] }, x, xt, Some(CoefficientRequest::Twi { triad: t }))
        }
    };
    let ladder = EpsLadder::new(e.eps0, e.ladder)?;
    let rep = verify_cancellation(&frame, &x, &xt, &spec, &ladder)?;
    let mut rows = Vec::new();
    for s in &rep.series {
        for (eps, v) in &s.samples {
            rows.push(vec![s.name.clone(), num(*eps), num(*v)]);
        }
    }
    ctx.art.csv("expansion.csv", &["functional", "eps", "value"], &rows)?;
    let exps: BTreeMap<&str, Value> = rep.series.iter().map(|s| (s.name.as_str(), json!(s.fit.exponent))).collect();
    let leg = rep.legendre_defects.iter().copied().fold(0.0, f64::max);
    ctx.put("exponents", json!(exps));
    ctx.put("l_coefficients", json!(rep.l_coefficients));
    ctx.put("h_coefficients", json!(rep.h_coefficients));
    ctx.put("coefficient_scale", json!(rep.coefficient_scale));
    ctx.put("cancellation", json!(rep.cancellation));
    ctx.put("max_legendre_defect", json!(leg));
    ctx.check("legendre_identity", leg < 1e-6);
    let coeffs = match request {
        Some(r) => match extract_reduced_coefficients(&spec, &r) {
            Ok(c) => Some(c),
            Err(err) => {
                ctx.put("coefficients_unavailable", json!(err.to_string()));
                None
            }
        },
        None => None,
    };
    ctx.put("coefficients", json!(coeffs));
    ctx.cfg.expand = Some(e);
    Ok(())
}

fn coefficients_from(path: &str) -> Result<ReducedCoefficients, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Runtime(format!("cannot read {path}: {e}")))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Schema(format!("{path}: {e}")))?;
    let c = v.pointer("/numbers/coefficients").cloned().unwrap_or(Value::Null);
    serde_json::from_value(c).map_err(|e| Failure::Schema(format!("{path}: numbers.coefficients: {e}")))
}

fn amplitude_rows(traj: &AmplitudeTrajectory) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for s in &traj.states {
        for (j, y) in grid(s.n(), s.length).into_iter().enumerate() {
            let mut r = vec![num(s.tau), num(y)];
            for comp in &s.a {
                r.push(num(comp[j].re));
                r.push(num(comp[j].im));
            }
            rows.push(r);
        }
    }
    rows
}

fn invariant_rows(traj: &AmplitudeTrajectory) -> Vec<Vec<String>> {
    traj.states.iter().zip(&traj.invariants).map(|(s, i)| vec![num(s.tau), num(i.0), num(i.1)]).collect()
}

fn relative_drift(v: &[f64]) -> f64 {
    let v0 = v[0].abs().max(f64::MIN_POSITIVE);
    v.iter().map(|x| (x - v[0]).abs() / v0).fold(0.0, f64::max)
}

pub fn solve_pde(ctx: &mut Ctx) -> Out {
    let mut p = need(&ctx.cfg.pde, "pde")?;
    positive("pde.tau_end", p.tau_end)?;
    positive("pde.dt", p.dt)?;
    positive("pde.output_interval", p.output_interval)?;
    let spec = ctx.potential()?;
    let (n, l) = (p.n, p.length);
    let loaded = p.coefficients_from.as_deref().map(coefficients_from).transpose()?;
    let wrong = |want: &str| Failure::Schema(format!("pde.coefficients_from does not hold {want} coefficients"));
    match p.model {
        Model::Kdv => {
            let co = match loaded {
                Some(ReducedCoefficients::Kdv(c)) => c,
                Some(_) => return Err(wrong("kdv")),
                None => {
                    let c = p.c.unwrap_or_else(|| spec.v2().sqrt());
                    p.c = Some(c);
                    kdv_coefficients(&spec, c)?
                }
            };
            let mut u = gaussian_values(n, l, l / 2.0, p.width, p.amplitude);
            let mean = u.iter().sum::<f64>() / n as f64;
            u.iter_mut().for_each(|v| *v -= mean);
            let opts = KdvOptions { dt: p.dt, output_interval: p.output_interval, ..Default::default() };
            let traj = solve_kdv_strain(&u, l, &co, p.tau_end, &opts)?;
            let ys = grid(n, l);
            let rows: Vec<Vec<String>> = traj
                .times
                .iter()
                .zip(&traj.u)
                .flat_map(|(t, u)| ys.iter().zip(u).map(move |(y, v)| vec![num(*t), num(*y), num(*v)]))
                .collect();
            ctx.art.csv("fields.csv", &["tau", "y", "u"], &rows)?;
            let inv: Vec<Vec<String>> =
                (0..traj.times.len()).map(|i| vec![num(traj.times[i]), num(traj.mass[i]), num(traj.l2[i])]).collect();
            ctx.art.csv("invariants.csv", &["tau", "mass", "l2"], &inv)?;
            ctx.put("l2_drift", json!(relative_drift(&traj.l2)));
            ctx.put("coefficients", json!(ReducedCoefficients::Kdv(co)));
        }
        Model::Nls => {
            let co = match loaded {
                Some(ReducedCoefficients::Nls(c)) => c,
                Some(_) => return Err(wrong("nls")),
                None => {
                    let th = p.theta.ok_or_else(|| Failure::Schema("pde.model = \"nls\" needs pde.theta".into()))?;
                    nls_coefficients(&spec, th)?
                }
            };
            let a = gaussian_complex(n, l, l / 2.0, p.width, Complex64::new(p.amplitude, 0.0), 0.0);
            let opts = SplitOptions { dt: p.dt, output_interval: p.output_interval, ..Default::default() };
            let traj = solve_nls(&AmplitudeState::new(vec![a], l)?, &co, p.tau_end, &opts)?;
            ctx.art.csv("fields.csv", &["tau", "y", "re", "im"], &amplitude_rows(&traj))?;
            ctx.art.csv("invariants.csv", &["tau", "mass", "hamiltonian"], &invariant_rows(&traj))?;
            let mass: Vec<f64> = traj.invariants.iter().map(|i| i.0).collect();
            ctx.put("mass_drift", json!(relative_drift(&mass)));
            ctx.put("coefficients", json!(ReducedCoefficients::Nls(co)));
        }
        Model::Threewave => {
            let co = match loaded {
                Some(ReducedCoefficients::Twi(c)) => c,
                Some(_) => return Err(wrong("twi")),
                None => twi_coefficients(&spec, &default_triad(&spec)?)?,
            };
            let g = gaussian_complex(n, l, l / 2.0, p.width, Complex64::new(p.amplitude, 0.0), 0.0);
            let init = AmplitudeState::new(vec![g.clone(), g, vec![Complex64::new(0.0, 0.0); n]], l)?;
            let opts = SplitOptions { dt: p.dt, output_interval: p.output_interval, ..Default::default() };
            let traj = solve_threewave(&init, &co, p.tau_end, &opts)?;
            ctx.art.csv("fields.csv", &["tau", "y", "re1", "im1", "re2", "im2", "re3", "im3"], &amplitude_rows(&traj))?;
            ctx.art.csv("invariants.csv", &["tau", "weighted_mass", "hamiltonian"], &invariant_rows(&traj))?;
            let mass: Vec<f64> = traj.invariants.iter().map(|i| i.0).collect();
            ctx.put("weighted_mass_drift", json!(relative_drift(&mass)));
            ctx.put("coefficients", json!(ReducedCoefficients::Twi(co)));
        }
        Model::Psystem => {
            let ys = grid(n, l);
            let r = ys.iter().map(|y| p.amplitude * (TAU * y / l).sin()).collect();
            let init = PSystemState::new(r, vec![0.0; n], l)?;
            let opts = PSystemOptions { output_interval: p.output_interval, ..Default::default() };
            let res = solve_psystem(&init, &spec, p.tau_end, &opts)?;
            let rows: Vec<Vec<String>> = res
                .snapshots
                .iter()
                .flat_map(|s| (0..n).map(move |j| vec![num(s.tau), num(l * j as f64 / n as f64), num(s.r[j]), num(s.w[j])]))
                .collect();
            ctx.art.csv("fields.csv", &["tau", "y", "r", "w"], &rows)?;
            let inv: Vec<Vec<String>> = res.energy.iter().map(|(t, e)| vec![num(*t), num(*e)]).collect();
            ctx.art.csv("invariants.csv", &["tau", "energy"], &inv)?;
            ctx.put("shock_time", json!(res.shock_time));
            ctx.put("dissipation_onset", json!(res.dissipation_onset));
        }
    }
    ctx.cfg.pde = Some(p);
    Ok(())
}

fn ls_slope(pts: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = pts.iter().filter(|p| p.1 > 0.0).map(|p| (p.0.ln(), p.1.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

pub fn bridge(ctx: &mut Ctx) -> Out {
    let mut b = need(&ctx.cfg.bridge, "bridge")?;
    if b.eps.is_empty() {
        return Err(Failure::Schema("bridge.eps must list at least one value".into()));
    }
    positive("bridge.tau_end", b.tau_end)?;
    let spec = ctx.potential()?;
    let (n, l, w, a) = (b.n, b.length, b.width, b.amplitude);
    let triad = match b.reduction {
        ReductionName::Twi => Some(default_triad(&spec)?),
        _ => None,
    };
    let theta = match b.reduction {
        ReductionName::Nls => Some(b.theta.ok_or_else(|| Failure::Schema("bridge.reduction = \"nls\" needs bridge.theta".into()))?),
        _ => None,
    };
    let init = match b.reduction {
        ReductionName::We => {
            let ys = grid(n, l);
            MacroInitial::We { r: ys.iter().map(|y| a * (TAU * y / l).sin()).collect(), w: vec![0.0; n] }
        }
        ReductionName::Kdv => {
            let mut u = gaussian_values(n, l, l / 2.0, w, a);
            let mean = u.iter().sum::<f64>() / n as f64;
            u.iter_mut().for_each(|v| *v -= mean);
            MacroInitial::Kdv { u }
        }
        ReductionName::Nls => MacroInitial::Nls { a: gaussian_complex(n, l, l / 2.0, w, Complex64::new(a, 0.0), 0.0) },
        ReductionName::Twi => {
            let g = gaussian_complex(n, l, l / 2.0, w, Complex64::new(a, 0.0), 0.0);
            MacroInitial::Twi { a: [g.clone(), g, vec![Complex64::new(0.0, 0.0); n]] }
        }
    };
    let make = |e: f64| -> twoscale::Result<ScalingSpec> {
        match b.reduction {
            ReductionName::We => ScalingSpec::we(e, l),
            ReductionName::Kdv => ScalingSpec::kdv(e, l, &spec),
            ReductionName::Nls => ScalingSpec::nls(e, l, theta.expect("checked"), &spec),
            ReductionName::Twi => ScalingSpec::twi(e, l, triad.as_ref().expect("checked"), &spec),
        }
    };
    let modes: Vec<bool> = match (b.reduction, b.correction) {
        (ReductionName::Nls, Correction::Both) => vec![false, true],
        (ReductionName::Nls, Correction::On) => vec![true],
        _ => vec![false],
    };
    let mut summary = Vec::new();
    let mut finals: Vec<Vec<f64>> = Vec::new();
    let mut reports: Vec<BridgeReport> = Vec::new();
    for &corr in &modes {
        let cfg = MacroConfig { correction: corr, output_interval: b.output_interval, micro_dt: b.micro_dt, ..Default::default() };
        let reps = bridge_ladder(make, &spec, &init, &cfg, b.tau_end, &b.eps)?;
        let tag = if corr { "on" } else { "off" };
        let mut errs = Vec::new();
        for r in &reps {
            let rows: Vec<Vec<String>> = r.tau_grid.iter().zip(&r.error).map(|(t, e)| vec![num(*t), num(*e)]).collect();
            ctx.art.csv(&format!("bridge_eps_{}_{tag}.csv", r.eps_used), &["tau", "error"], &rows)?;
            let fe = r.final_error().unwrap_or(f64::NAN);
            errs.push(fe);
            summary.push(vec![
                num(r.eps_requested),
                num(r.eps_used),
                r.n_sites.to_string(),
                tag.to_string(),
                num(r.tau_grid.last().copied().unwrap_or(0.0)),
                num(fe),
                num(r.micro_dt),
                r.micro_steps.to_string(),
                num(r.max_tail_ratio),
            ]);
        }
        let decreasing = errs.windows(2).all(|p| p[1] < p[0]);
        let key = if modes.len() > 1 { format!("error_decreases_{tag}") } else { "error_decreases".into() };
        ctx.check(&key, decreasing);
        let pts: Vec<(f64, f64)> = reps.iter().zip(&errs).map(|(r, e)| (r.eps_used, *e)).collect();
        ctx.put(&format!("error_slope_{tag}"), json!(ls_slope(&pts)));
        finals.push(errs);
        reports.extend(reps);
    }
    ctx.art.csv(
        "bridge.csv",
        &["eps_requested", "eps", "n_sites", "correction", "tau_final", "final_error", "micro_dt", "micro_steps", "max_tail_ratio"],
        &summary,
    )?;
    if finals.len() == 2 {
        let ok = finals[0].iter().zip(&finals[1]).all(|(off, on)| *on <= 1.1 * off);
        ctx.check("correction_not_worse", ok);
    }
    let first = reports.iter().take(b.eps.len());
    ctx.put("shock_time", json!(reports.first().and_then(|r| r.shock_time)));
    ctx.put("truncated_at_shock", json!(reports.iter().any(|r| r.truncated_at_shock)));
    let warnings: Vec<&String> = reports.iter().flat_map(|r| &r.warnings).collect();
    ctx.put("warnings", json!(warnings));
    let thetas: Vec<Vec<f64>> =
        first.clone().map(|r| make(r.eps_requested).map(|s| s.carriers.iter().map(|c| c.theta).collect()).unwrap_or_default()).collect();
    ctx.put("snapped_theta", json!(thetas));
    b.eps = first.map(|r| r.eps_used).collect();
    if let (Some(th), Some(n_sites)) = (theta, reports.first().map(|r| r.n_sites)) {
        let snapped: Vec<f64> = reports.iter().map(|r| snap_theta(th, r.n_sites).1).collect();
        if snapped.iter().all(|s| *s == snapped[0]) {
            b.theta = Some(snap_theta(th, n_sites).1);
        }
    }
    ctx.cfg.bridge = Some(b);
    Ok(())
}

pub fn acceptance(ctx: &mut Ctx) -> Out {
    let ids: Vec<u32> = match ctx.cfg.acceptance.as_ref().map(|a| a.criteria.clone()) {
        Some(v) if !v.is_empty() => v,
        _ => CRITERIA.iter().map(|c| c.0).collect(),
    };
    let mut rows = Vec::new();
    for id in ids {
        let out = run_criterion(id).map_err(|e| Failure::Schema(format!("acceptance.criteria: {e}")))?;
        println!("{}", out.line());
        for c in &out.checks {
            ctx.check(&format!("C{id}.{}", c.name), c.passed);
        }
        ctx.check(&format!("C{id}.budget"), out.seconds <= out.budget_seconds);
        ctx.put(&format!("C{id}"), json!({"checks": out.checks, "notes": out.notes}));
        rows.push(vec![id.to_string(), out.title.clone(), out.passed.to_string(), format!("{:.3}", out.seconds), num(out.budget_seconds)]);
    }
    ctx.art.csv("acceptance.csv", &["id", "title", "passed", "seconds", "budget_seconds"], &rows)?;
    Ok(())
}
