use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::UsageError;

#[derive(Debug, Parser)]
#[command(name = "vislab", version, about = "Visibility radius laws for random obstacle models")]
pub struct Cli {
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true, env = "VISLAB_THREADS")]
    pub threads: Option<usize>,

    /// JSON file with default values for the subcommand's flags; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact (or, for interlacements, asymptotic) visibility functionals.
    Exact(ExactArgs),
    /// Sample conditioned scenes and write per-scene visibility radii as CSV.
    Simulate(SimulateArgs),
    /// Walk-on-spheres capacity estimate of a ball, cylinder or cone.
    Capacity(CapacityArgs),
    /// Compare simulated radii with the exponential limit law over a list of r.
    LimitCheck(LimitCheckArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ModelArgs {
    /// bm, pc or bi.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Cylinder or tube radius (pc, bi).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// `const:V`, `unif:A:B` or `disc:v1@p1,v2@p2,...` (bm).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_law: Option<String>,
}

const MODEL_KEYS: &[&str] = &["model", "d", "alpha", "rho", "radius_law"];

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ExactArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    /// Number of conditioned scenes.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// CSV output path.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Apertures are capped at `min(M δ_r, 0.9 r)` [default: 50].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_cap_mult: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct CapacityArgs {
    /// ball, cylinder or cone.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    /// Ball radius, or axis length of a cylinder or cone.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// Cone aperture q.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aperture: Option<f64>,
    /// Number of walkers.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Stop escaping walkers instead of returning them (biased low).
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub truncate_only: bool,
}

/// A list of reals given as `a,b,c` on the command line or as a JSON array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FloatList {
    Values(Vec<f64>),
    Text(String),
}

impl std::str::FromStr for FloatList {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Self::Text(s.to_string()))
    }
}

impl FloatList {
    pub fn values(&self, what: &str) -> Result<Vec<f64>, UsageError> {
        match self {
            Self::Values(v) => Ok(v.clone()),
            Self::Text(t) => t
                .split(',')
                .map(|p| {
                    p.trim().parse::<f64>().map_err(|_| {
                        UsageError(format!("malformed {what} {t:?}: expected comma-separated numbers such as 50,200,800"))
                    })
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct LimitCheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Increasing distances, e.g. 50,200,800.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_list: Option<FloatList>,
    /// Scenes per r (bm, pc) or coupled walkers per r (bi).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// JSON report path.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Values of s at which survival is reported [default: 0.5,1,2].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_grid: Option<FloatList>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_cap_mult: Option<f64>,
}

pub trait ConfigKeys {
    const KEYS: &'static [&'static str];
}

impl ConfigKeys for ExactArgs {
    const KEYS: &'static [&'static str] = &["r", "s"];
}

impl ConfigKeys for SimulateArgs {
    const KEYS: &'static [&'static str] = &["r", "n", "seed", "out", "q_cap_mult"];
}

impl ConfigKeys for CapacityArgs {
    const KEYS: &'static [&'static str] = &["shape", "d", "r", "rho", "aperture", "n", "seed", "truncate_only"];
}

impl ConfigKeys for LimitCheckArgs {
    const KEYS: &'static [&'static str] = &["r_list", "n", "seed", "out", "s_grid", "q_cap_mult"];
}

/// Overlays the flags given on the command line on the values of a JSON
/// config object. Keys may be written with `-` or `_`.
pub fn merge<T>(flags: &T, config: Option<&Value>, with_model: bool) -> Result<T, UsageError>
where
    T: Serialize + DeserializeOwned + ConfigKeys,
{
    let mut base = Map::new();
    if let Some(cfg) = config {
        let obj = cfg
            .as_object()
            .ok_or_else(|| UsageError("config file must hold a JSON object".into()))?;
        for (k, v) in obj {
            let key = k.replace('-', "_");
            let known = T::KEYS.contains(&key.as_str()) || (with_model && MODEL_KEYS.contains(&key.as_str()));
            if !known {
                return Err(UsageError(format!("unknown config key {k:?} for this subcommand")));
            }
            base.insert(key, v.clone());
        }
    }
    let overlay = serde_json::to_value(flags).expect("flag structs serialize");
    if let Value::Object(m) = overlay {
        base.extend(m);
    }
    serde_json::from_value(Value::Object(base)).map_err(|e| UsageError(format!("invalid config value: {e}")))
}
