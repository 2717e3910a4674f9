//! Simulated state tomography: Pauli-product settings, Poisson counts,
//! linear inversion with a positivity projection, and Monte Carlo error bars.

pub mod counts;
pub mod montecarlo;
pub mod reconstruct;
pub mod settings;

pub use counts::{born_probabilities, simulate_counts, CountsTable};
pub use montecarlo::{derive_seed, mc_errorbar, Functional, McSummary};
pub use reconstruct::{
    exact_data, linear_inversion, pauli_expectation, project_psd, reconstruct, reconstruct_from,
    SettingData,
};
pub use settings::{
    pauli_settings, table1_axes, table1_schedule, MeasurementSetting, WaveplateScheduleRow,
};
