//! One line per acceptance criterion. Exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::Duration;

use qactivation::epsnet::{cap_radius, default_net, sphere_scan, verify_covering, verify_packing};
use qactivation::measures::{
    discord_bell_diagonal, discord_numeric, negativity, negativity_of_quantumness,
    negativity_theory, Bipartition,
};
use qactivation::protocol::{premeasurement, WaveplateSetting};
use qactivation::qcore::states::werner_visibility_for_purity;
use qactivation::qcore::{chi_q, DensityMatrix, PreparationNoise};
use qactivation::tomo::{mc_errorbar, Functional};
use qactivation::witnesses::{expect, w2, w3};
use qactivation_validation::{run_all, Criterion, Outcome};

const Q_SIX: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
const WERNER_V: f64 = 0.9564;

fn q_twenty() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 20.0).collect()
}

fn net_min_negativity(chi: &DensityMatrix) -> f64 {
    default_net()
        .settings()
        .unwrap()
        .iter()
        .map(|s| negativity(&premeasurement(chi, s).unwrap(), &Bipartition::ab_m()).unwrap())
        .fold(f64::INFINITY, f64::min)
}

fn closed_form_oracle() -> Outcome {
    let settings = default_net().settings().unwrap();
    let mut worst = 0.0f64;
    for q in q_twenty() {
        let chi = chi_q(q).unwrap();
        for s in &settings {
            let brute =
                negativity(&premeasurement(&chi, s).unwrap(), &Bipartition::ab_m()).unwrap();
            worst = worst.max((brute - negativity_theory(q, s).unwrap()).abs());
        }
    }
    Outcome {
        passed: worst <= 1e-9,
        detail: format!("max |N - theory| = {worst:.2e} over 21 q x 28 settings (tol 1e-9)"),
    }
}

fn activation_identity() -> Outcome {
    let mut worst = 0.0f64;
    for q in Q_SIX {
        worst = worst.max((net_min_negativity(&chi_q(q).unwrap()) - q).abs());
    }
    Outcome {
        passed: worst <= 1e-9,
        detail: format!("max |min_net N - q| = {worst:.2e} (tol 1e-9)"),
    }
}

fn discord_triple() -> Outcome {
    let (mut closed, mut numeric, mut qn) = (0.0f64, 0.0f64, 0.0f64);
    for q in Q_SIX {
        let chi = chi_q(q).unwrap();
        closed = closed.max((discord_bell_diagonal(&chi).unwrap() - q).abs());
        numeric = numeric.max((discord_numeric(&chi, 1).unwrap() - q).abs());
        qn = qn.max((negativity_of_quantumness(&chi).unwrap().value - q).abs());
    }
    Outcome {
        passed: closed <= 1e-10 && numeric <= 1e-3 && qn <= 1e-6,
        detail: format!(
            "max dev: closed form {closed:.2e} (tol 1e-10), numeric {numeric:.2e} (tol 1e-3), Q_N {qn:.2e} (tol 1e-6)"
        ),
    }
}

fn certification() -> Outcome {
    let net = default_net();
    let mut passed = true;
    let mut parts = Vec::new();
    for q in Q_SIX {
        let scan = sphere_scan(q, &net, PI / 180.0).unwrap();
        let ok = if q == 0.0 {
            scan.min_low <= 0.0
        } else {
            scan.min_low > 0.0
        };
        passed &= ok;
        parts.push(format!(
            "q={q}: {:+.4}{}",
            scan.min_low,
            if ok { "" } else { " (!)" }
        ));
    }
    Outcome {
        passed,
        detail: format!("min_low at step pi/180: {}", parts.join(", ")),
    }
}

fn epsilon_net() -> Outcome {
    let net = default_net();
    let cover = verify_covering(&net, 0.5, 10_000).unwrap();
    let pack = verify_packing(&net, 0.5).unwrap();
    let cap = cap_radius(0.5).unwrap();
    let cap_ok = (cap - 0.242061).abs() <= 1e-6;
    Outcome {
        passed: cover.covered && pack.packed && cap_ok,
        detail: format!(
            "covering {} (worst gap {:.4}), packing {} (min chord {:.4}), cap_radius {:.6} (target 0.242061)",
            cover.covered,
            cover.worst_gap,
            pack.packed,
            pack.min_distance.unwrap_or(f64::NAN),
            cap
        ),
    }
}

fn witness_line() -> Outcome {
    let s = WaveplateSetting::new(FRAC_PI_4, 0.0).unwrap();
    let (mut worst, mut sign_ok) = (0.0f64, true);
    for q in q_twenty() {
        let chi = chi_q(q).unwrap();
        let e2 = expect(&w2(), &chi).unwrap();
        let e3 = expect(&w3(), &premeasurement(&chi, &s).unwrap()).unwrap();
        worst = worst
            .max((e2 - (0.5 - q)).abs())
            .max((e3 - (0.5 - q)).abs());
        for e in [e2, e3] {
            sign_ok &= if q > 0.5 { e < 0.0 } else { e >= -1e-9 };
        }
    }
    Outcome {
        passed: worst <= 1e-9 && sign_ok,
        detail: format!("max |<W> - (1/2 - q)| = {worst:.2e} (tol 1e-9), negative exactly for q > 1/2: {sign_ok}"),
    }
}

fn tomography() -> Outcome {
    let fig = premeasurement(
        &chi_q(0.2).unwrap(),
        &WaveplateSetting::new(PI / 12.0, PI / 6.0).unwrap(),
    )
    .unwrap();
    let neg = mc_errorbar(&fig, 1e4, 100, 2025, Functional::Negativity).unwrap();
    let fid = mc_errorbar(&fig, 1e4, 100, 2025, Functional::Fidelity).unwrap();
    Outcome {
        passed: neg.std < 1e-2 && fid.mean >= 0.99,
        detail: format!(
            "exposure 1e4, 100 reps: negativity std {:.4} (< 0.01), mean fidelity {:.4} (>= 0.99)",
            neg.std, fid.mean
        ),
    }
}

fn noisy_envelope() -> Outcome {
    let from_purity = werner_visibility_for_purity(0.936).unwrap();
    let noise = PreparationNoise::Werner(WERNER_V);
    let mut worst = 0.0f64;
    for q in Q_SIX {
        worst = worst.max((net_min_negativity(&noise.chi_q(q).unwrap()) - q).abs());
    }
    Outcome {
        passed: worst <= 0.12 && (from_purity - WERNER_V).abs() < 1e-4,
        detail: format!("v = {WERNER_V} (purity 0.936 gives {from_purity:.4}): max |min_net N - q| = {worst:.4} (tol 0.12)"),
    }
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            name: "C1 closed-form oracle agreement",
            budget: secs(10),
            check: closed_form_oracle,
        },
        Criterion {
            name: "C2 activation identity",
            budget: secs(5),
            check: activation_identity,
        },
        Criterion {
            name: "C3 discord triple agreement",
            budget: secs(120),
            check: discord_triple,
        },
        Criterion {
            name: "C4 certification positivity",
            budget: secs(60),
            check: certification,
        },
        Criterion {
            name: "C5 epsilon-net verification",
            budget: secs(5),
            check: epsilon_net,
        },
        Criterion {
            name: "C6 witness line",
            budget: secs(5),
            check: witness_line,
        },
        Criterion {
            name: "C7 tomography statistics",
            budget: secs(120),
            check: tomography,
        },
        Criterion {
            name: "C8 noisy-preparation envelope",
            budget: secs(30),
            check: noisy_envelope,
        },
    ];
    if !run_all(&criteria).is_empty() {
        std::process::exit(1);
    }
}
