use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use qactivation::epsnet::{default_net, NetSpec, MAX_SCAN_STEP};
use qactivation::qcore::PreparationNoise;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Expected events per setting when a command needs counts but none were configured.
pub const DEFAULT_EXPOSURE: f64 = 1e4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub q_values: Vec<f64>,
    pub net: NetSpec,
    pub noise: PreparationNoise,
    /// `None` means exact expectation values; `Some(n)` runs the counting
    /// and reconstruction pipeline at `n` expected events per setting.
    pub exposure: Option<f64>,
    pub reps: usize,
    pub seed: u64,
    pub grid_step: f64,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            q_values: vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0],
            net: default_net(),
            noise: PreparationNoise::Ideal,
            exposure: None,
            reps: 100,
            seed: 0,
            grid_step: PI / 180.0,
            output_dir: PathBuf::from("out"),
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub noise: Option<PreparationNoise>,
    pub exposure: Option<f64>,
    pub grid_step: Option<f64>,
    pub output_dir: Option<PathBuf>,
}

/// `ideal` or `werner:<visibility>`.
pub fn parse_noise(text: &str) -> CliResult<PreparationNoise> {
    let text = text.trim();
    if text.eq_ignore_ascii_case("ideal") {
        return Ok(PreparationNoise::Ideal);
    }
    let v = text.strip_prefix("werner:").ok_or_else(|| {
        CliError::Config(format!("noise `{text}`: expected `ideal` or `werner:<v>`"))
    })?;
    let v: f64 = v
        .parse()
        .map_err(|_| CliError::Config(format!("werner visibility `{v}` is not a number")))?;
    Ok(PreparationNoise::Werner(v))
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> CliResult<Self> {
        let mut config = match path {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|source| CliError::Io {
                    path: p.to_path_buf(),
                    source,
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => Self::default(),
        };
        if let Some(s) = overrides.seed {
            config.seed = s;
        }
        if let Some(n) = overrides.noise {
            config.noise = n;
        }
        if let Some(e) = overrides.exposure {
            config.exposure = Some(e);
        }
        if let Some(g) = overrides.grid_step {
            config.grid_step = g;
        }
        if let Some(o) = &overrides.output_dir {
            config.output_dir = o.clone();
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.q_values.is_empty() {
            return Err(CliError::Config("q_values is empty".into()));
        }
        if let Some(q) = self.q_values.iter().find(|q| !(0.0..=1.0).contains(*q)) {
            return Err(CliError::Config(format!("q = {q} outside [0, 1]")));
        }
        if self.net.is_empty() {
            return Err(CliError::Config("net has no settings".into()));
        }
        if self
            .net
            .thetas
            .iter()
            .chain(&self.net.phis)
            .any(|a| !a.is_finite())
        {
            return Err(CliError::Config("net angles must be finite".into()));
        }
        if let Some(e) = self.exposure {
            if !(e.is_finite() && e > 0.0) {
                return Err(CliError::Config(format!("exposure {e} must be positive")));
            }
        }
        if self.reps < qactivation::tomo::montecarlo::MIN_REPS {
            return Err(CliError::Config(format!(
                "reps {} below {}",
                self.reps,
                qactivation::tomo::montecarlo::MIN_REPS
            )));
        }
        if !(self.grid_step > 0.0 && self.grid_step <= MAX_SCAN_STEP) {
            return Err(CliError::Config(format!(
                "grid_step {} outside (0, pi/90]",
                self.grid_step
            )));
        }
        if let PreparationNoise::Werner(v) = self.noise {
            if !(0.0..=1.0).contains(&v) {
                return Err(CliError::Config(format!(
                    "werner visibility {v} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// First 16 hex digits of SHA-256 over every field except `output_dir`,
    /// so identical experiments written to different places share a hash.
    pub fn hash(&self) -> String {
        let mut view = self.clone();
        view.output_dir = PathBuf::new();
        let bytes = serde_json::to_vec(&view).expect("config serializes");
        Sha256::digest(&bytes)[..8]
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn exposure_or_default(&self) -> f64 {
        self.exposure.unwrap_or(DEFAULT_EXPOSURE)
    }
}
