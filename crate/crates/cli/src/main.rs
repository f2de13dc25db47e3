mod commands;
mod config;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use commands::{Ctx, Failure};
use config::{ConfigError, ExperimentConfig, SCHEMA_VERSION};
use output::{sha256_hex, Artifacts, RunSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Subcommand {
    Dispersion,
    Resonance,
    SimulateChain,
    Expand,
    SolvePde,
    Bridge,
    Acceptance,
}

impl Subcommand {
    fn name(self) -> &'static str {
        match self {
            Subcommand::Dispersion => "dispersion",
            Subcommand::Resonance => "resonance",
            Subcommand::SimulateChain => "simulate-chain",
            Subcommand::Expand => "expand",
            Subcommand::SolvePde => "solve-pde",
            Subcommand::Bridge => "bridge",
            Subcommand::Acceptance => "acceptance",
        }
    }
}

/// Two-scale experiments on FPU and Klein–Gordon chains.
#[derive(Debug, Parser)]
#[command(name = "twoscale", version)]
struct Args {
    #[arg(value_enum)]
    subcommand: Subcommand,
    /// TOML experiment file; optional for `acceptance`.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Overrides the `seed` key of the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    jobs: Option<usize>,
}

const EXIT_RUNTIME: u8 = 1;
const EXIT_SCHEMA: u8 = 2;

fn main() -> ExitCode {
    let args = Args::parse();
    let sub = args.subcommand;
    if let Some(j) = args.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: cannot start {j} workers: {e}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    }
    let mut cfg = match &args.config {
        Some(p) => match ExperimentConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(match e {
                    ConfigError::Io(_) => EXIT_RUNTIME,
                    ConfigError::Schema(_) => EXIT_SCHEMA,
                });
            }
        },
        None if sub == Subcommand::Acceptance => {
            ExperimentConfig::parse(&format!("schema_version = {SCHEMA_VERSION}"), "<default>").expect("minimal config")
        }
        None => {
            eprintln!("error: {} needs --config <path>", sub.name());
            return ExitCode::from(EXIT_SCHEMA);
        }
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let hash = sha256_hex(&cfg.to_toml());
    let art = match Artifacts::new(&args.out_dir, sub.name(), hash.clone(), cfg.seed) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: cannot create {}: {e}", args.out_dir.display());
            return ExitCode::from(EXIT_RUNTIME);
        }
    };
    let mut ctx = Ctx { cfg, art, checks: BTreeMap::new(), numbers: BTreeMap::new() };
    let start = Instant::now();
    let res = match sub {
        Subcommand::Dispersion => commands::dispersion(&mut ctx),
        Subcommand::Resonance => commands::resonance(&mut ctx),
        Subcommand::SimulateChain => commands::simulate_chain(&mut ctx),
        Subcommand::Expand => commands::expand(&mut ctx),
        Subcommand::SolvePde => commands::solve_pde(&mut ctx),
        Subcommand::Bridge => commands::bridge(&mut ctx),
        Subcommand::Acceptance => commands::acceptance(&mut ctx),
    };
    if let Err(f) = res {
        return match f {
            Failure::Schema(m) => {
                eprintln!("error: schema error: {m}");
                ExitCode::from(EXIT_SCHEMA)
            }
            Failure::Runtime(m) => {
                eprintln!("error: {}: {m}", sub.name());
                ExitCode::from(EXIT_RUNTIME)
            }
        };
    }
    let resolved = format!("# resolved config, config_sha256: {hash}\n{}", ctx.cfg.to_toml());
    if let Err(e) = ctx.art.text("config.resolved.toml", &resolved) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_RUNTIME);
    }
    let summary = RunSummary {
        subcommand: sub.name().into(),
        schema_version: SCHEMA_VERSION,
        config_sha256: hash,
        seed: ctx.cfg.seed,
        passed: ctx.checks.values().all(|c| *c),
        checks: ctx.checks,
        numbers: ctx.numbers,
        files: ctx.art.files.clone(),
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    let body = serde_json::to_string_pretty(&summary).expect("summary serialises");
    if let Err(e) = std::fs::write(ctx.art.dir.join("summary.json"), body) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_RUNTIME);
    }
    let failed = summary.failed();
    if failed.is_empty() {
        println!("{}: ok, {} files in {}", sub.name(), summary.files.len() + 1, args.out_dir.display());
        ExitCode::SUCCESS
    } else {
        eprintln!("error: {}: failed checks: {}", sub.name(), failed.join(", "));
        ExitCode::from(EXIT_RUNTIME)
    }
}
