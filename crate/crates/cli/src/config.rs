//! Defaults profile. Read from the TOML file named by `POLYHARM_CONFIG` when set;
//! command-line flags override individual values.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const CONFIG_ENV: &str = "POLYHARM_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub radial: usize,
    pub angular: usize,
    pub max_radius: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = polyharm::GridSpec::default();
        GridConfig {
            radial: g.radial_count,
            angular: g.angular_count,
            max_radius: g.max_radius,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderConfig {
    pub circles: usize,
    pub rays: usize,
    pub max_radius: f64,
    pub width: f64,
    pub height: f64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            circles: 10,
            rays: 24,
            max_radius: 0.995,
            width: 800.0,
            height: 800.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub grid: GridConfig,
    /// Slice radii for `slice-test` and `certify-ctc`.
    pub radii: Vec<f64>,
    /// Radii approaching one for `boundary`; empty selects `1 − 10^{−k/8}`.
    pub boundary_radii: Vec<f64>,
    pub cutoffs: Vec<f64>,
    pub theta0: f64,
    pub m: f64,
    pub curve_samples: usize,
    pub render: RenderConfig,
}

impl Default for Config {
    fn default() -> Self {
        let mut radii: Vec<f64> = (10..100).map(|k| k as f64 / 100.0).collect();
        radii.push(0.995);
        Config {
            grid: GridConfig::default(),
            radii,
            boundary_radii: Vec::new(),
            cutoffs: vec![1e-2, 1e-3, 1e-4],
            theta0: 0.0,
            m: 0.1,
            curve_samples: 1024,
            render: RenderConfig::default(),
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Parse(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text)
    }

    /// The file named by `POLYHARM_CONFIG`, or the built-in defaults.
    pub fn from_env() -> CliResult<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }
}
