use std::f64::consts::{FRAC_PI_4, PI};
use std::fs;
use std::path::Path;
use std::process::Command;

use qactivation::measures::negativity_theory;
use qactivation::protocol::WaveplateSetting;
use qactivation::qcore::PreparationNoise;
use qactivation_cli::commands::{self, TomoDemoArgs};
use qactivation_cli::output::SCHEMA_LINE;
use qactivation_cli::{ExperimentConfig, OutputDir};
use tempfile::TempDir;

fn config(dir: &TempDir, q_values: &[f64]) -> ExperimentConfig {
    ExperimentConfig {
        q_values: q_values.to_vec(),
        output_dir: dir.path().to_path_buf(),
        ..Default::default()
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qactivation"))
}

#[test]
fn activate_ideal_matches_closed_form() {
    let dir = TempDir::new().unwrap();
    let c = config(&dir, &[0.0, 0.6]);
    let mut out = OutputDir::create(&c).unwrap();
    let report = commands::activate(&c, &mut out).unwrap();
    for row in &report.rows[1] {
        let s = WaveplateSetting::new(row.theta_rad, row.phi_rad).unwrap();
        assert_eq!(row.n_sim, negativity_theory(0.6, &s).unwrap());
        assert!((row.n_sim - 0.6).abs() <= 1e-9);
    }
    assert_eq!(report.rows[1].len(), 28);
    let corner = report.rows[0]
        .iter()
        .find(|r| (r.theta_rad - FRAC_PI_4).abs() < 1e-12 && r.phi_rad == 0.0)
        .unwrap();
    assert!(corner.n_sim.abs() <= 1e-12);
}

#[test]
fn activate_werner_envelope() {
    let dir = TempDir::new().unwrap();
    let c = ExperimentConfig {
        noise: PreparationNoise::Werner(0.9564),
        ..config(&dir, &[1.0])
    };
    let report = commands::activate(&c, &mut OutputDir::create(&c).unwrap()).unwrap();
    assert!(report.summary[0].deviation <= 0.12);
}

#[test]
fn activate_with_exposure_has_error_bars() {
    let dir = TempDir::new().unwrap();
    let c = ExperimentConfig {
        exposure: Some(1e4),
        reps: 50,
        ..config(&dir, &[0.6])
    };
    let report = commands::activate(&c, &mut OutputDir::create(&c).unwrap()).unwrap();
    for row in &report.rows[0] {
        let std = row.n_sim_std.unwrap();
        assert!(std < 1e-2);
        assert!((row.n_sim - row.n_theory).abs() < 0.05);
    }
}

#[test]
fn certify_verdicts() {
    let dir = TempDir::new().unwrap();
    let c = config(&dir, &[0.0, 0.2, 1.0]);
    let summary = commands::certify(&c, &mut OutputDir::create(&c).unwrap()).unwrap();
    assert!(!summary[0].certified);
    // net distance terms outweigh the signal here
    assert!(!summary[1].certified);
    assert!((summary[1].min_low + 0.0082).abs() < 1e-3);
    assert!(summary[2].certified);
    assert!(summary[2].min_low > 0.03 && summary[2].min_low < 0.9);
}

#[test]
fn discord_match_rows() {
    let dir = TempDir::new().unwrap();
    let c = config(&dir, &[0.0, 0.2, 0.4, 0.6, 0.8, 1.0]);
    let rows = commands::discord_match(&c, &mut OutputDir::create(&c).unwrap()).unwrap();
    for r in &rows {
        assert_eq!(r.status, "ok");
        assert!((r.min_net_negativity.unwrap() - r.d_closed.unwrap()).abs() <= 1e-6);
    }
    assert!(
        rows[0].d_closed.unwrap().abs() < 1e-12
            && rows[0].min_net_negativity.unwrap().abs() < 1e-12
    );
    let noisy = ExperimentConfig {
        noise: PreparationNoise::Werner(0.9564),
        ..config(&dir, &[1.0])
    };
    let d = commands::discord_match(&noisy, &mut OutputDir::create(&noisy).unwrap()).unwrap()[0]
        .d_closed
        .unwrap();
    assert!((0.85..=1.0).contains(&d));
}

#[test]
fn witness_rows() {
    let dir = TempDir::new().unwrap();
    let c = config(&dir, &[0.0, 0.5, 0.8]);
    let rows = commands::witness(&c, &mut OutputDir::create(&c).unwrap()).unwrap();
    for (r, expected) in rows.iter().zip([0.5, 0.0, -0.3]) {
        assert!((r.w2 - expected).abs() < 1e-12);
        assert!((r.w3 - expected).abs() < 1e-12);
        assert!(r.w2_sampled.is_none());
    }
}

fn tomo(exposure: Option<f64>, exact: bool) -> f64 {
    let dir = TempDir::new().unwrap();
    let c = ExperimentConfig {
        exposure,
        ..config(&dir, &[0.2])
    };
    let args = TomoDemoArgs {
        q: 0.2,
        setting: WaveplateSetting::new(PI / 12.0, PI / 6.0).unwrap(),
        exact,
    };
    commands::tomo_demo(&c, args, &mut OutputDir::create(&c).unwrap())
        .unwrap()
        .fidelity
}

#[test]
fn tomo_demo_fidelity() {
    assert!(tomo(Some(1e4), false) >= 0.99);
    assert!(tomo(Some(1e6), false) >= 0.999);
    assert!((tomo(None, true) - 1.0).abs() <= 1e-9);
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn reproducible_output_with_provenance() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for d in [&a, &b] {
        let status = bin()
            .args(["activate", "--seed", "9", "--exposure", "2000", "--out"])
            .arg(d.path())
            .status()
            .unwrap();
        assert!(status.success());
    }
    let (fa, fb) = (csv_files(a.path()), csv_files(b.path()));
    assert_eq!(fa.len(), 7);
    assert_eq!(fa, fb);
    let hash = ExperimentConfig {
        seed: 9,
        exposure: Some(2000.0),
        ..Default::default()
    }
    .hash();
    for (_, bytes) in &fa {
        let text = String::from_utf8(bytes.clone()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(SCHEMA_LINE));
        assert!(lines.next().unwrap().ends_with("config_hash,seed"));
        for line in lines {
            assert!(line.ends_with(&format!(",{hash},9")), "{line}");
        }
    }
    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(a.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["files"].as_array().unwrap().len(), 7);
    assert_eq!(manifest["config_hash"], hash.as_str());
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("config.json");
    fs::write(&path, r#"{"q_values": [0.8], "seed": 4}"#).unwrap();
    let out = dir.path().join("out");
    let status = bin()
        .args(["witness", "--seed", "5", "--config"])
        .arg(&path)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(out.join("witness.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().last().unwrap().starts_with("0.8,-0.3"));
    assert!(text.lines().last().unwrap().ends_with(",5"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.json");
    fs::write(&empty, r#"{"q_values": []}"#).unwrap();
    let code = |args: &[&str]| {
        bin()
            .args(args)
            .arg("--out")
            .arg(dir.path().join("o"))
            .status()
            .unwrap()
            .code()
            .unwrap()
    };
    assert_eq!(code(&["witness", "--config", empty.to_str().unwrap()]), 2);
    assert_eq!(code(&["activate", "--noise", "werner:1.5"]), 2);
    assert_eq!(code(&["certify", "--grid-step", "0.5"]), 2);
    assert_eq!(code(&["net-verify", "--epsilon", "3"]), 4);
    let q0 = dir.path().join("q0.json");
    fs::write(&q0, r#"{"q_values": [0.0]}"#).unwrap();
    assert_eq!(
        code(&[
            "certify",
            "--grid-step",
            "pi/90",
            "--config",
            q0.to_str().unwrap()
        ]),
        0
    );
    assert_eq!(
        code(&[
            "certify",
            "--strict",
            "--grid-step",
            "pi/90",
            "--config",
            q0.to_str().unwrap()
        ]),
        3
    );
}
