//! Sweeps over the activation protocol that write plot-ready CSV datasets.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::{parse_noise, ExperimentConfig, Overrides};
pub use error::{exit, CliError, CliResult};
pub use output::OutputDir;

/// Angle in radians. Plain numbers are radians; `15deg` and `pi/12` style
/// forms are also accepted.
pub fn parse_radians(text: &str) -> CliResult<f64> {
    if let Ok(v) = text.trim().parse::<f64>() {
        return Ok(v);
    }
    qactivation::protocol::parse_angle(text).map_err(|e| CliError::Config(e.to_string()))
}
