//! TOML experiment configuration. Every table rejects unknown keys.

use serde::{Deserialize, Serialize};
use twoscale::PotentialSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    pub potential: Option<PotentialConfig>,
    pub dispersion: Option<DispersionConfig>,
    pub resonance: Option<ResonanceConfig>,
    pub chain: Option<ChainConfig>,
    pub expand: Option<ExpandConfig>,
    pub pde: Option<PdeConfig>,
    pub bridge: Option<BridgeConfig>,
    pub acceptance: Option<AcceptanceConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Fpu,
    Kg,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub kind: Kind,
    /// Pair stiffness for KG chains; FPU chains take α = v2.
    pub alpha: Option<f64>,
    pub v2: f64,
    #[serde(default)]
    pub v3: f64,
    #[serde(default)]
    pub v4: f64,
    /// Refuse KG parameters with min(4α + v2, v2) <= 0.
    #[serde(default = "yes")]
    pub check_stability: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionConfig {
    pub ny: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonanceConfig {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_radius")]
    pub zset_radius: i32,
    #[serde(default = "default_ztol")]
    pub zset_tol: f64,
}

fn default_samples() -> usize {
    200
}
fn default_tol() -> f64 {
    1e-10
}
fn default_radius() -> i32 {
    5
}
fn default_ztol() -> f64 {
    1e-8
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainInit {
    PlaneWave,
    Random,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub n: usize,
    pub dt: f64,
    pub steps: usize,
    #[serde(default = "one")]
    pub stride: usize,
    pub init: ChainInit,
    pub theta: Option<f64>,
    #[serde(default = "default_amp")]
    pub amplitude: f64,
    /// Highest mode of random initial data.
    #[serde(default = "default_modes")]
    pub modes: usize,
    /// Also write one (j, x, v) file per recorded row.
    #[serde(default)]
    pub snapshots: bool,
}

fn one() -> usize {
    1
}
fn default_amp() -> f64 {
    0.1
}
fn default_modes() -> usize {
    8
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionName {
    We,
    Kdv,
    Nls,
    Twi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldShape {
    Gaussian,
    Random,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpandConfig {
    pub reduction: ReductionName,
    /// KdV frame speed (default √v2) or nlS frame speed (default −Ω′(θ)).
    pub c: Option<f64>,
    pub theta: Option<f64>,
    #[serde(default = "default_eps0")]
    pub eps0: f64,
    #[serde(default = "default_ladder")]
    pub ladder: usize,
    #[serde(default = "default_ny")]
    pub ny: usize,
    #[serde(default = "default_length")]
    pub length: f64,
    #[serde(default = "default_nphi")]
    pub nphi: usize,
    #[serde(default = "gaussian")]
    pub field: FieldShape,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "unit")]
    pub amplitude: f64,
    #[serde(default = "default_modes")]
    pub modes: usize,
}

fn default_eps0() -> f64 {
    0.2
}
fn default_ladder() -> usize {
    8
}
fn default_ny() -> usize {
    256
}
fn default_length() -> f64 {
    40.0
}
fn default_nphi() -> usize {
    16
}
fn gaussian() -> FieldShape {
    FieldShape::Gaussian
}
fn default_width() -> f64 {
    3.0
}
fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Kdv,
    Nls,
    Threewave,
    Psystem,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdeConfig {
    pub model: Model,
    #[serde(default = "default_ny")]
    pub n: usize,
    #[serde(default = "default_length")]
    pub length: f64,
    pub tau_end: f64,
    #[serde(default = "default_macro_dt")]
    pub dt: f64,
    #[serde(default = "default_interval")]
    pub output_interval: f64,
    pub theta: Option<f64>,
    pub c: Option<f64>,
    /// Summary JSON of an `expand` run whose coefficients replace the
    /// ones derived from [potential].
    pub coefficients_from: Option<String>,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "unit")]
    pub amplitude: f64,
}

fn default_macro_dt() -> f64 {
    1e-3
}
fn default_interval() -> f64 {
    0.1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Correction {
    On,
    Off,
    Both,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BridgeConfig {
    pub reduction: ReductionName,
    pub eps: Vec<f64>,
    #[serde(default = "default_length")]
    pub length: f64,
    pub tau_end: f64,
    /// Grid of the initial macroscopic data.
    #[serde(default = "default_ny")]
    pub n: usize,
    pub theta: Option<f64>,
    #[serde(default = "off")]
    pub correction: Correction,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "unit")]
    pub amplitude: f64,
    #[serde(default = "default_bridge_interval")]
    pub output_interval: f64,
    pub micro_dt: Option<f64>,
}

fn off() -> Correction {
    Correction::Off
}
fn default_bridge_interval() -> f64 {
    0.05
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AcceptanceConfig {
    /// Criterion ids; empty runs all of them.
    #[serde(default)]
    pub criteria: Vec<u32>,
}

#[derive(Debug)]
pub enum ConfigError {
    Io(String),
    Schema(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Io(m) => write!(f, "{m}"),
            ConfigError::Schema(m) => write!(f, "schema error: {m}"),
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| ConfigError::Schema(locate(origin, text, &e)))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::Schema(format!(
                "{origin}: schema_version = {} is not supported (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }
}

/// `path:line:column: message` from a deserialisation error.
fn locate(origin: &str, text: &str, e: &toml::de::Error) -> String {
    let msg = e.message().trim();
    match e.span() {
        Some(span) => {
            let before = &text[..span.start.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let col = before.len() - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
            format!("{origin}:{line}:{col}: {msg}")
        }
        None => format!("{origin}: {msg}"),
    }
}

impl PotentialConfig {
    pub fn spec(&self) -> Result<PotentialSpec, String> {
        let spec = match self.kind {
            Kind::Fpu => {
                if let Some(a) = self.alpha {
                    if a != self.v2 {
                        return Err(format!("FPU chains take alpha = v2; got alpha = {a}, v2 = {}", self.v2));
                    }
                }
                PotentialSpec::fpu(self.v2, self.v3, self.v4)
            }
            Kind::Kg => {
                let alpha = self.alpha.ok_or("KG chains need potential.alpha")?;
                PotentialSpec::kg(alpha, self.v2, self.v3, self.v4)
            }
        };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}
