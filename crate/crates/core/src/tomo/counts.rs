use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::density::DensityMatrix;
use crate::tomo::settings::MeasurementSetting;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsTable {
    pub setting: MeasurementSetting,
    pub counts: Vec<u64>,
    /// Expected total events for this setting.
    pub exposure: f64,
}

impl CountsTable {
    pub fn new(setting: MeasurementSetting, counts: Vec<u64>, exposure: f64) -> Result<Self> {
        if counts.len() != setting.n_outcomes() {
            return Err(Error::Shape {
                expected: format!("{} outcomes", setting.n_outcomes()),
                got: format!("{}", counts.len()),
            });
        }
        Ok(Self {
            setting,
            counts,
            exposure,
        })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// `Tr[Π_o ρ]` per outcome, clipped at zero against round-off.
pub fn born_probabilities(rho: &DensityMatrix, setting: &MeasurementSetting) -> Result<Vec<f64>> {
    if rho.dim() != setting.n_outcomes() {
        return Err(Error::Shape {
            expected: format!("{}-dimensional state", setting.n_outcomes()),
            got: format!("{}", rho.dim()),
        });
    }
    Ok(setting
        .projectors()
        .iter()
        .map(|p| rho.expectation(p).re.max(0.0))
        .collect())
}

fn check_exposure(exposure: f64) -> Result<()> {
    if exposure.is_finite() && exposure > 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "exposure",
            value: exposure,
            range: "(0, inf)",
        })
    }
}

/// Independent Poisson counts with mean `exposure · Tr[Π_o ρ]`.
///
/// Setting `i` draws from ChaCha8 stream `i` of `seed`, so results do not
/// depend on how the settings are scheduled.
pub fn simulate_counts(
    rho: &DensityMatrix,
    settings: &[MeasurementSetting],
    exposure: f64,
    seed: u64,
) -> Result<Vec<CountsTable>> {
    check_exposure(exposure)?;
    settings
        .iter()
        .enumerate()
        .map(|(i, setting)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let counts = born_probabilities(rho, setting)?
                .into_iter()
                .map(|p| {
                    let lambda = exposure * p;
                    if lambda <= 0.0 {
                        return Ok(0);
                    }
                    let dist = Poisson::new(lambda).map_err(|e| Error::Numeric(e.to_string()))?;
                    Ok(dist.sample(&mut rng) as u64)
                })
                .collect::<Result<Vec<u64>>>()?;
            CountsTable::new(setting.clone(), counts, exposure)
        })
        .collect()
}
