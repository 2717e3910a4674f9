use std::f64::consts::FRAC_PI_4;

use qactivation::epsnet::{
    cap_radius, combined_bound, ideal_records, sphere_scan_with, verify_covering, verify_packing,
    CoveringReport, PackingReport, ScanRow,
};
use qactivation::measures::{
    discord_bell_diagonal, discord_numeric, negativity, negativity_of_quantumness,
    negativity_theory, Bipartition,
};
use qactivation::protocol::{premeasurement, WaveplateSetting};
use qactivation::qcore::{fidelity, DensityMatrix, PreparationNoise};
use qactivation::tomo::{
    derive_seed, exact_data, mc_errorbar, pauli_settings, reconstruct, reconstruct_from,
    simulate_counts, table1_schedule, Functional,
};
use qactivation::witnesses::{expect, expect_noisy, w2, w3};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::{num, opt, q_tag, OutputDir, Row};

fn noisy_chi(config: &ExperimentConfig, q: f64) -> CliResult<DensityMatrix> {
    Ok(config.noise.chi_q(q)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct ActivateRow {
    pub q: f64,
    pub theta_rad: f64,
    pub phi_rad: f64,
    pub n_theory: f64,
    pub n_sim: f64,
    /// Monte Carlo standard deviation; absent for exact evaluation.
    pub n_sim_std: Option<f64>,
}

impl Row for ActivateRow {
    const HEADER: &'static [&'static str] = &[
        "q",
        "theta_rad",
        "phi_rad",
        "n_theory",
        "n_sim",
        "n_sim_std",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            num(self.q),
            num(self.theta_rad),
            num(self.phi_rad),
            num(self.n_theory),
            num(self.n_sim),
            opt(self.n_sim_std),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ActivateSummaryRow {
    pub q: f64,
    pub discord: f64,
    pub min_n_theory: f64,
    pub min_n_sim: f64,
    pub deviation: f64,
}

impl Row for ActivateSummaryRow {
    const HEADER: &'static [&'static str] =
        &["q", "discord", "min_n_theory", "min_n_sim", "deviation"];

    fn fields(&self) -> Vec<String> {
        vec![
            num(self.q),
            num(self.discord),
            num(self.min_n_theory),
            num(self.min_n_sim),
            num(self.deviation),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ActivateReport {
    pub rows: Vec<Vec<ActivateRow>>,
    pub summary: Vec<ActivateSummaryRow>,
}

/// Simulated negativity at one net point. Ideal exact mode returns the closed
/// form itself so that both columns come from the same code path.
fn simulate_point(
    config: &ExperimentConfig,
    chi: &DensityMatrix,
    q: f64,
    s: &WaveplateSetting,
    stream: u64,
) -> CliResult<ActivateRow> {
    let n_theory = negativity_theory(q, s)?;
    let (n_sim, n_sim_std) = match (config.exposure, config.noise) {
        (None, PreparationNoise::Ideal) => (n_theory, None),
        (None, _) => (
            negativity(&premeasurement(chi, s)?, &Bipartition::ab_m())?,
            None,
        ),
        (Some(exposure), _) => {
            let rho = premeasurement(chi, s)?;
            let mc = mc_errorbar(
                &rho,
                exposure,
                config.reps,
                derive_seed(config.seed, stream as usize),
                Functional::Negativity,
            )?;
            (mc.mean, Some(mc.std))
        }
    };
    Ok(ActivateRow {
        q,
        theta_rad: s.theta(),
        phi_rad: s.phi(),
        n_theory,
        n_sim,
        n_sim_std,
    })
}

pub fn activate(config: &ExperimentConfig, out: &mut OutputDir) -> CliResult<ActivateReport> {
    let settings = config.net.settings()?;
    let per_q: Vec<(Vec<ActivateRow>, ActivateSummaryRow)> = config
        .q_values
        .par_iter()
        .enumerate()
        .map(|(qi, &q)| {
            let chi = noisy_chi(config, q)?;
            let rows = settings
                .par_iter()
                .enumerate()
                .map(|(si, s)| {
                    simulate_point(config, &chi, q, s, (qi * settings.len() + si) as u64)
                })
                .collect::<CliResult<Vec<_>>>()?;
            let min_n_theory = rows
                .iter()
                .map(|r| r.n_theory)
                .fold(f64::INFINITY, f64::min);
            let min_n_sim = rows.iter().map(|r| r.n_sim).fold(f64::INFINITY, f64::min);
            let discord = discord_bell_diagonal(&chi)?;
            let summary = ActivateSummaryRow {
                q,
                discord,
                min_n_theory,
                min_n_sim,
                deviation: (min_n_sim - q).abs(),
            };
            Ok((rows, summary))
        })
        .collect::<CliResult<_>>()?;
    let (rows, summary): (Vec<_>, Vec<_>) = per_q.into_iter().unzip();
    for block in &rows {
        out.write_csv(&format!("activate_{}.csv", q_tag(block[0].q)), block)?;
    }
    out.write_csv("activate_summary.csv", &summary)?;
    Ok(ActivateReport { rows, summary })
}

struct CertifyRow(ScanRow);

impl Row for CertifyRow {
    const HEADER: &'static [&'static str] = &[
        "q",
        "theta_rad",
        "phi_rad",
        "n_theory",
        "n_low1",
        "n_low2",
        "n_low",
    ];

    fn fields(&self) -> Vec<String> {
        let r = &self.0;
        [
            r.q,
            r.theta_rad,
            r.phi_rad,
            r.n_theory,
            r.n_low1,
            r.n_low2,
            r.n_low,
        ]
        .into_iter()
        .map(num)
        .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifySummaryRow {
    pub q: f64,
    pub min_low: f64,
    pub argmin_theta_rad: f64,
    pub argmin_phi_rad: f64,
    pub certified: bool,
}

impl Row for CertifySummaryRow {
    const HEADER: &'static [&'static str] = &[
        "q",
        "min_low",
        "argmin_theta_rad",
        "argmin_phi_rad",
        "verdict",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            num(self.q),
            num(self.min_low),
            num(self.argmin_theta_rad),
            num(self.argmin_phi_rad),
            if self.certified {
                "certified"
            } else {
                "not certified"
            }
            .to_string(),
        ]
    }
}

pub fn certify(
    config: &ExperimentConfig,
    out: &mut OutputDir,
) -> CliResult<Vec<CertifySummaryRow>> {
    let mut summary = Vec::with_capacity(config.q_values.len());
    for &q in &config.q_values {
        let scan = sphere_scan_with(q, &config.net, config.grid_step, config.noise)?;
        let rows: Vec<CertifyRow> = scan.rows.iter().copied().map(CertifyRow).collect();
        out.write_csv(&format!("certify_{}.csv", q_tag(q)), &rows)?;
        let chi = noisy_chi(config, q)?;
        let worst = combined_bound(&ideal_records(&chi, &config.net)?, &scan.argmin, &chi)?;
        let text = serde_json::to_string_pretty(&worst).expect("report serializes");
        out.write_text(&format!("certify_{}_bound.json", q_tag(q)), &(text + "\n"))?;
        summary.push(CertifySummaryRow {
            q,
            min_low: scan.min_low,
            argmin_theta_rad: scan.argmin.theta(),
            argmin_phi_rad: scan.argmin.phi(),
            certified: scan.certified(),
        });
    }
    out.write_csv("certify_summary.csv", &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscordMatchRow {
    pub q: f64,
    pub d_closed: Option<f64>,
    pub d_numeric: Option<f64>,
    pub min_net_negativity: Option<f64>,
    pub q_n: Option<f64>,
    pub status: String,
}

impl Row for DiscordMatchRow {
    const HEADER: &'static [&'static str] = &[
        "q",
        "d_closed",
        "d_numeric",
        "min_net_negativity",
        "q_n",
        "status",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            num(self.q),
            opt(self.d_closed),
            opt(self.d_numeric),
            opt(self.min_net_negativity),
            opt(self.q_n),
            self.status.clone(),
        ]
    }
}

fn net_min_negativity(
    chi: &DensityMatrix,
    settings: &[WaveplateSetting],
) -> qactivation::Result<f64> {
    settings.iter().try_fold(f64::INFINITY, |m, s| {
        Ok(m.min(negativity(&premeasurement(chi, s)?, &Bipartition::ab_m())?))
    })
}

/// Failures of individual measures are recorded in `status` rather than
/// aborting the sweep.
pub fn discord_match(
    config: &ExperimentConfig,
    out: &mut OutputDir,
) -> CliResult<Vec<DiscordMatchRow>> {
    let settings = config.net.settings()?;
    let rows: Vec<DiscordMatchRow> = config
        .q_values
        .par_iter()
        .enumerate()
        .map(|(i, &q)| {
            let chi = noisy_chi(config, q)?;
            let mut problems = Vec::new();
            let mut keep = |name: &str, r: qactivation::Result<f64>| match r {
                Ok(v) => Some(v),
                Err(e) => {
                    problems.push(format!("{name}: {e}"));
                    None
                }
            };
            let d_closed = keep("d_closed", discord_bell_diagonal(&chi));
            let d_numeric = keep(
                "d_numeric",
                discord_numeric(&chi, derive_seed(config.seed, i)),
            );
            let min_net_negativity =
                keep("min_net_negativity", net_min_negativity(&chi, &settings));
            let q_n = keep("q_n", negativity_of_quantumness(&chi).map(|m| m.value));
            Ok(DiscordMatchRow {
                q,
                d_closed,
                d_numeric,
                min_net_negativity,
                q_n,
                status: if problems.is_empty() {
                    "ok".into()
                } else {
                    problems.join("; ")
                },
            })
        })
        .collect::<CliResult<_>>()?;
    out.write_csv("discord_match.csv", &rows)?;
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessRow {
    pub q: f64,
    pub w2: f64,
    pub w3: f64,
    pub theory: f64,
    pub w2_sampled: Option<f64>,
    pub w3_sampled: Option<f64>,
}

impl Row for WitnessRow {
    const HEADER: &'static [&'static str] =
        &["q", "w2", "w3", "theory", "w2_sampled", "w3_sampled"];

    fn fields(&self) -> Vec<String> {
        vec![
            num(self.q),
            num(self.w2),
            num(self.w3),
            num(self.theory),
            opt(self.w2_sampled),
            opt(self.w3_sampled),
        ]
    }
}

/// `<W2>` on `χ` and `<W3>` on the premeasurement state at `(π/4, 0)`.
pub fn witness(config: &ExperimentConfig, out: &mut OutputDir) -> CliResult<Vec<WitnessRow>> {
    let (w2, w3) = (w2(), w3());
    let s = WaveplateSetting::new(FRAC_PI_4, 0.0)?;
    let rows = config
        .q_values
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            let chi = noisy_chi(config, q)?;
            let rho = premeasurement(&chi, &s)?;
            let (w2_sampled, w3_sampled) = match config.exposure {
                Some(e) => (
                    Some(expect_noisy(&w2, &chi, e, derive_seed(config.seed, 2 * i))?),
                    Some(expect_noisy(
                        &w3,
                        &rho,
                        e,
                        derive_seed(config.seed, 2 * i + 1),
                    )?),
                ),
                None => (None, None),
            };
            Ok(WitnessRow {
                q,
                w2: expect(&w2, &chi)?,
                w3: expect(&w3, &rho)?,
                theory: 0.5 - q,
                w2_sampled,
                w3_sampled,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    out.write_csv("witness.csv", &rows)?;
    Ok(rows)
}

#[derive(Debug, Clone, Copy)]
pub struct TomoDemoArgs {
    pub q: f64,
    pub setting: WaveplateSetting,
    /// Use Born probabilities instead of sampled counts.
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TomoReport {
    pub q: f64,
    pub theta_rad: f64,
    pub phi_rad: f64,
    pub exposure: Option<f64>,
    pub fidelity: f64,
    pub negativity_ideal: f64,
    pub negativity_reconstructed: f64,
}

impl Row for TomoReport {
    const HEADER: &'static [&'static str] = &[
        "q",
        "theta_rad",
        "phi_rad",
        "exposure",
        "fidelity",
        "negativity_ideal",
        "negativity_reconstructed",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            num(self.q),
            num(self.theta_rad),
            num(self.phi_rad),
            opt(self.exposure),
            num(self.fidelity),
            num(self.negativity_ideal),
            num(self.negativity_reconstructed),
        ]
    }
}

struct CountsRow {
    setting: String,
    outcome: usize,
    count: u64,
    exposure: f64,
}

impl Row for CountsRow {
    const HEADER: &'static [&'static str] = &["setting", "outcome", "count", "exposure"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.setting.clone(),
            self.outcome.to_string(),
            self.count.to_string(),
            num(self.exposure),
        ]
    }
}

struct ScheduleRow(qactivation::tomo::WaveplateScheduleRow);

impl Row for ScheduleRow {
    const HEADER: &'static [&'static str] = &[
        "set", "state", "qwp_a", "hwp_a", "qwp_b", "hwp_b", "qwp_c", "hwp_c", "qwp_d", "hwp_d",
        "detector",
    ];

    fn fields(&self) -> Vec<String> {
        let r = &self.0;
        let mut f = vec![r.set_label.clone(), r.state_label.clone()];
        f.extend(
            [
                r.qwp_a, r.hwp_a, r.qwp_b, r.hwp_b, r.qwp_c, r.hwp_c, r.qwp_d, r.hwp_d,
            ]
            .map(num),
        );
        f.push(r.detector.to_string());
        f
    }
}

/// Simulates tomography of one premeasurement state and reports the
/// reconstruction fidelity. Also exports the laboratory waveplate schedule.
pub fn tomo_demo(
    config: &ExperimentConfig,
    args: TomoDemoArgs,
    out: &mut OutputDir,
) -> CliResult<TomoReport> {
    if !(0.0..=1.0).contains(&args.q) {
        return Err(CliError::Config(format!("q = {} outside [0, 1]", args.q)));
    }
    let rho = premeasurement(&noisy_chi(config, args.q)?, &args.setting)?;
    let settings = pauli_settings(3)?;
    let (reconstructed, exposure) = if args.exact {
        (reconstruct_from(&exact_data(&rho, &settings)?)?, None)
    } else {
        let exposure = config.exposure_or_default();
        let counts = simulate_counts(&rho, &settings, exposure, config.seed)?;
        let rows: Vec<CountsRow> = counts
            .iter()
            .flat_map(|t| {
                t.counts
                    .iter()
                    .enumerate()
                    .map(|(outcome, &count)| CountsRow {
                        setting: t.setting.label(),
                        outcome,
                        count,
                        exposure: t.exposure,
                    })
            })
            .collect();
        out.write_csv("tomo_counts.csv", &rows)?;
        (reconstruct(&counts)?, Some(exposure))
    };
    out.write_text("tomo_ideal.json", &rho.to_json())?;
    out.write_text("tomo_reconstructed.json", &reconstructed.to_json())?;
    let schedule: Vec<ScheduleRow> = table1_schedule().into_iter().map(ScheduleRow).collect();
    out.write_csv("waveplate_schedule.csv", &schedule)?;
    let report = TomoReport {
        q: args.q,
        theta_rad: args.setting.theta(),
        phi_rad: args.setting.phi(),
        exposure,
        fidelity: fidelity(&rho, &reconstructed)?,
        negativity_ideal: negativity(&rho, &Bipartition::ab_m())?,
        negativity_reconstructed: negativity(&reconstructed, &Bipartition::ab_m())?,
    };
    out.write_csv("tomo_report.csv", std::slice::from_ref(&report))?;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct NetVerifyReport {
    pub epsilon: f64,
    pub covering: CoveringReport,
    pub packing: PackingReport,
    pub cap_radius: f64,
    pub is_epsilon_net: bool,
}

pub fn net_verify(
    config: &ExperimentConfig,
    epsilon: f64,
    resolution: usize,
    out: &mut OutputDir,
) -> CliResult<NetVerifyReport> {
    let covering = verify_covering(&config.net, epsilon, resolution)?;
    let packing = verify_packing(&config.net, epsilon)?;
    let report = NetVerifyReport {
        epsilon,
        covering,
        packing,
        cap_radius: cap_radius(epsilon)?,
        is_epsilon_net: covering.covered && packing.packed,
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    out.write_text("net_verify.json", &(text + "\n"))?;
    Ok(report)
}
