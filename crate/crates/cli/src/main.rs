use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qactivation::epsnet::DEFAULT_COVERING_RESOLUTION;
use qactivation::protocol::{parse_angle, WaveplateSetting};
use qactivation_cli::commands::{self, TomoDemoArgs};
use qactivation_cli::{
    exit, parse_noise, parse_radians, CliError, CliResult, ExperimentConfig, OutputDir, Overrides,
};

#[derive(Parser)]
#[command(
    name = "qactivation",
    version,
    about = "Discord-to-entanglement activation sweeps"
)]
struct Cli {
    /// JSON config file; flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// `ideal` or `werner:<visibility>`.
    #[arg(long, global = true)]
    noise: Option<String>,
    /// Expected events per tomography setting; enables the counting pipeline.
    #[arg(long, global = true)]
    exposure: Option<f64>,
    /// Scan grid step in radians (`pi/180` style also accepted).
    #[arg(long, global = true)]
    grid_step: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Exit with code 3 when any certify verdict is negative.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Theory and simulated negativity at every net setting.
    Activate,
    /// Certified lower bound over the whole measurement sphere.
    Certify,
    /// Discord, minimal net negativity and negativity of quantumness per q.
    DiscordMatch,
    /// Bipartite and tripartite witness expectations per q.
    Witness,
    /// Tomography of one premeasurement state.
    /// Angles are degrees when given as plain numbers; `j/12 pi` forms also work.
    TomoDemo {
        #[arg(long, default_value_t = 0.2)]
        q: f64,
        #[arg(long, default_value = "pi/12")]
        theta: String,
        #[arg(long, default_value = "pi/6")]
        phi: String,
        /// Reconstruct from exact probabilities instead of counts.
        #[arg(long)]
        exact: bool,
    },
    /// Covering and packing checks of the net.
    NetVerify {
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_COVERING_RESOLUTION)]
        resolution: usize,
    },
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Activate => "activate",
        Command::Certify => "certify",
        Command::DiscordMatch => "discord-match",
        Command::Witness => "witness",
        Command::TomoDemo { .. } => "tomo-demo",
        Command::NetVerify { .. } => "net-verify",
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    let overrides = Overrides {
        seed: cli.seed,
        noise: cli.noise.as_deref().map(parse_noise).transpose()?,
        exposure: cli.exposure,
        grid_step: cli.grid_step.as_deref().map(parse_radians).transpose()?,
        output_dir: cli.out,
    };
    let config = ExperimentConfig::load(cli.config.as_deref(), &overrides)?;
    let mut out = OutputDir::create(&config)?;
    let mut code = exit::SUCCESS;
    match &cli.command {
        Command::Activate => {
            for s in commands::activate(&config, &mut out)?.summary {
                println!(
                    "q={}: min N = {:.6}, D = {:.6}",
                    s.q, s.min_n_sim, s.discord
                );
            }
        }
        Command::Certify => {
            let summary = commands::certify(&config, &mut out)?;
            for s in &summary {
                let verdict = if s.certified {
                    "certified"
                } else {
                    "not certified"
                };
                println!("q={}: min_low = {:+.6} ({verdict})", s.q, s.min_low);
            }
            if cli.strict && summary.iter().any(|s| !s.certified) {
                code = exit::NOT_CERTIFIED;
            }
        }
        Command::DiscordMatch => {
            let show = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.6}"));
            for r in commands::discord_match(&config, &mut out)? {
                println!(
                    "q={}: D = {}, D_num = {}, min N = {}, Q_N = {} [{}]",
                    r.q,
                    show(r.d_closed),
                    show(r.d_numeric),
                    show(r.min_net_negativity),
                    show(r.q_n),
                    r.status
                );
            }
        }
        Command::Witness => {
            for r in commands::witness(&config, &mut out)? {
                println!(
                    "q={}: <W2> = {:.6}, <W3> = {:.6}, 1/2 - q = {:.6}",
                    r.q, r.w2, r.w3, r.theory
                );
            }
        }
        Command::TomoDemo {
            q,
            theta,
            phi,
            exact,
        } => {
            let angle = |t: &str| parse_angle(t).map_err(|e| CliError::Config(e.to_string()));
            let setting = WaveplateSetting::new(angle(theta)?, angle(phi)?)?;
            let r = commands::tomo_demo(
                &config,
                TomoDemoArgs {
                    q: *q,
                    setting,
                    exact: *exact,
                },
                &mut out,
            )?;
            println!(
                "fidelity {:.6}, negativity ideal {:.6}, reconstructed {:.6}",
                r.fidelity, r.negativity_ideal, r.negativity_reconstructed
            );
        }
        Command::NetVerify {
            epsilon,
            resolution,
        } => {
            let r = commands::net_verify(&config, *epsilon, *resolution, &mut out)?;
            println!(
                "epsilon {}: covering {} (worst gap {:.6}), packing {} (min chord {:.6}, {} bases), cap radius {:.6}",
                r.epsilon,
                r.covering.covered,
                r.covering.worst_gap,
                r.packing.packed,
                r.packing.min_distance.unwrap_or(f64::NAN),
                r.packing.distinct_bases,
                r.cap_radius
            );
        }
    }
    out.finish(command_name(&cli.command), &config)?;
    Ok(code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
