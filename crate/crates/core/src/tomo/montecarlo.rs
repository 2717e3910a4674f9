use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{discord_numeric, negativity, Bipartition};
use crate::qcore::density::{fidelity, DensityMatrix};
use crate::tomo::counts::simulate_counts;
use crate::tomo::reconstruct::reconstruct;
use crate::tomo::settings::pauli_settings;
use crate::witnesses::{expect, w2, w3};

/// Fewer repetitions than this give an unreliable standard deviation.
pub const MIN_REPS: usize = 50;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of repetition `rep`, independent of scheduling.
pub fn derive_seed(seed: u64, rep: usize) -> u64 {
    splitmix64(seed ^ splitmix64(rep as u64))
}

/// Scalar evaluated on each reconstructed state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    /// `AB|M` for three qubits, `A|B` for two.
    Negativity,
    /// W3 for three qubits, W2 for two.
    WitnessExpect,
    /// Trace-distance discord of the `A|B` marginal.
    Discord,
    /// Fidelity with the true state.
    Fidelity,
}

impl Functional {
    pub fn evaluate(self, reconstructed: &DensityMatrix, truth: &DensityMatrix) -> Result<f64> {
        let n = reconstructed.n_subsystems();
        match self {
            Functional::Negativity => {
                let cut = if n == 3 {
                    Bipartition::ab_m()
                } else {
                    Bipartition::a_b()
                };
                negativity(reconstructed, &cut)
            }
            Functional::WitnessExpect => {
                let w = if n == 3 { w3() } else { w2() };
                expect(&w, reconstructed)
            }
            Functional::Discord => {
                let ab = if n == 3 {
                    reconstructed.partial_trace(&[0, 1])?
                } else {
                    reconstructed.clone()
                };
                discord_numeric(&ab, 0)
            }
            Functional::Fidelity => fidelity(reconstructed, truth),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub mean: f64,
    /// Sample standard deviation (`n − 1` denominator).
    pub std: f64,
    pub reps: usize,
    pub values: Vec<f64>,
}

impl McSummary {
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Empty("Monte Carlo values"));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Ok(Self {
            mean,
            std: var.sqrt(),
            reps: values.len(),
            values,
        })
    }
}

/// Resample Poisson counts `reps` times, reconstruct, and summarize the
/// functional. Repetition `r` uses [`derive_seed`]`(seed, r)`.
pub fn mc_errorbar(
    rho: &DensityMatrix,
    exposure: f64,
    reps: usize,
    seed: u64,
    functional: Functional,
) -> Result<McSummary> {
    if reps < MIN_REPS {
        return Err(Error::OutOfRange {
            name: "reps",
            value: reps as f64,
            range: "[50, inf)",
        });
    }
    if rho.dims().iter().any(|&d| d != 2) {
        return Err(Error::InvalidSubsystem(format!(
            "dims {:?} are not qubits",
            rho.dims()
        )));
    }
    let settings = pauli_settings(rho.n_subsystems())?;
    let values = (0..reps)
        .into_par_iter()
        .map(|r| {
            let counts = simulate_counts(rho, &settings, exposure, derive_seed(seed, r))?;
            functional.evaluate(&reconstruct(&counts)?, rho)
        })
        .collect::<Result<Vec<f64>>>()?;
    McSummary::from_values(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::states::chi_q;

    #[test]
    fn seeds_differ() {
        let s: std::collections::HashSet<u64> = (0..1000).map(|r| derive_seed(7, r)).collect();
        assert_eq!(s.len(), 1000);
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
    }

    #[test]
    fn summary_statistics() {
        let s = McSummary::from_values(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(McSummary::from_values(vec![1.0]).is_err());
    }

    #[test]
    fn reproducible_and_bounded() {
        let rho = chi_q(0.6).unwrap();
        let a = mc_errorbar(&rho, 1e4, 50, 11, Functional::Fidelity).unwrap();
        let b = mc_errorbar(&rho, 1e4, 50, 11, Functional::Fidelity).unwrap();
        assert_eq!(a, b);
        assert!(a.values.iter().all(|&f| (0.0..=1.0).contains(&f)));
        assert!(a.mean > 0.98);
        assert!(mc_errorbar(&rho, 1e4, 10, 11, Functional::Fidelity).is_err());
    }

    #[test]
    fn witness_tracks_truth() {
        let rho = chi_q(0.8).unwrap();
        let s = mc_errorbar(&rho, 1e5, 50, 2, Functional::WitnessExpect).unwrap();
        assert!(
            (s.mean + 0.3).abs() < 5.0 * s.std / (50f64).sqrt() + 1e-3,
            "{s:?}"
        );
    }
}
