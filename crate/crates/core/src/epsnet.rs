//! Finite-sample certification: the sampled net of waveplate settings, chord
//! geometry on the Bloch sphere, and the two continuity lower bounds on the
//! premeasurement negativity at unmeasured settings.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::negativity::{negativity, negativity_theory, Bipartition};
use crate::protocol::{bloch_vector, premeasurement, WaveplateSetting};
use crate::qcore::bloch::BlochVector;
use crate::qcore::density::{partial_transpose_op, DensityMatrix};
use crate::qcore::eigen::trace_norm;
use crate::qcore::states::{chi_q, PreparationNoise};

/// Vectors closer than this (up to sign) are the same basis.
pub const DEDUP_TOL: f64 = 1e-8;
/// Slack on the packing comparison; the default net's closest pair sits at
/// chord `0.5` up to round-off.
pub const PACKING_SLACK: f64 = 1e-10;
pub const MIN_COVERING_RESOLUTION: usize = 1000;
pub const DEFAULT_COVERING_RESOLUTION: usize = 10_000;
/// Coarsest step `sphere_scan` accepts.
pub const MAX_SCAN_STEP: f64 = PI / 90.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetSpec {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
}

impl NetSpec {
    pub fn settings(&self) -> Result<Vec<WaveplateSetting>> {
        let mut out = Vec::with_capacity(self.len());
        for &t in &self.thetas {
            for &p in &self.phis {
                out.push(WaveplateSetting::new(t, p)?);
            }
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.thetas.len() * self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `θ_j = jπ/12` for `j = 0..6`, `φ_k = kπ/12` for `k = 0..3`.
pub fn default_net() -> NetSpec {
    NetSpec {
        thetas: (0..=6).map(|j| j as f64 * PI / 12.0).collect(),
        phis: (0..=3).map(|k| k as f64 * PI / 12.0).collect(),
    }
}

/// `‖n₁ − n₂‖`, equal to `√(2(1 − n₁·n₂))` on the unit sphere.
pub fn euclid_chord(n1: &BlochVector, n2: &BlochVector) -> f64 {
    let d = [n1.x - n2.x, n1.y - n2.y, n1.z - n2.z];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// Chord to the nearer of `±n₂`.
pub fn basis_chord(n1: &BlochVector, n2: &BlochVector) -> f64 {
    euclid_chord(n1, n2).min(euclid_chord(n1, &n2.antipode()))
}

/// Distinct measurement bases of the net, with `n` and `−n` identified;
/// first occurrence wins.
pub fn dedup_bloch(net: &NetSpec) -> Result<Vec<BlochVector>> {
    let mut out: Vec<BlochVector> = Vec::new();
    for s in net.settings()? {
        let n = bloch_vector(&s);
        if out.iter().all(|m| basis_chord(&n, m) >= DEDUP_TOL) {
            out.push(n);
        }
    }
    Ok(out)
}

/// `¼√(ε²(4 − ε²))`.
pub fn cap_radius(epsilon: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&epsilon) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "[0, 2]",
        });
    }
    Ok(0.25 * (epsilon * epsilon * (4.0 - epsilon * epsilon)).sqrt())
}

/// Deterministic quasi-uniform sphere sampling.
pub fn fibonacci_sphere(n: usize) -> Vec<BlochVector> {
    let golden = PI * (3.0 - 5.0_f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let a = golden * i as f64;
            BlochVector::unchecked(r * a.cos(), r * a.sin(), z)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoveringReport {
    pub covered: bool,
    pub epsilon: f64,
    /// Largest distance from a lattice point to its nearest basis.
    pub worst_gap: f64,
    pub worst_point: BlochVector,
    pub resolution: usize,
}

pub fn verify_covering(net: &NetSpec, epsilon: f64, resolution: usize) -> Result<CoveringReport> {
    if resolution < MIN_COVERING_RESOLUTION {
        return Err(Error::OutOfRange {
            name: "resolution",
            value: resolution as f64,
            range: ">= 1000",
        });
    }
    let bases = dedup_bloch(net)?;
    if bases.is_empty() {
        return Err(Error::Empty("net"));
    }
    let (worst_gap, worst_point) = fibonacci_sphere(resolution)
        .into_iter()
        .map(|p| {
            let gap = bases
                .iter()
                .map(|n| basis_chord(&p, n))
                .fold(f64::INFINITY, f64::min);
            (gap, p)
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("resolution > 0");
    Ok(CoveringReport {
        covered: worst_gap <= epsilon,
        epsilon,
        worst_gap,
        worst_point,
        resolution,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackingReport {
    pub packed: bool,
    pub epsilon: f64,
    /// `None` when fewer than two distinct bases exist.
    pub min_distance: Option<f64>,
    pub distinct_bases: usize,
}

pub fn verify_packing(net: &NetSpec, epsilon: f64) -> Result<PackingReport> {
    let bases = dedup_bloch(net)?;
    let mut min_distance: Option<f64> = None;
    for i in 0..bases.len() {
        for j in (i + 1)..bases.len() {
            let d = basis_chord(&bases[i], &bases[j]);
            min_distance = Some(min_distance.map_or(d, |m| m.min(d)));
        }
    }
    Ok(PackingReport {
        packed: min_distance.is_none_or(|d| d >= epsilon - PACKING_SLACK),
        epsilon,
        min_distance,
        distinct_bases: bases.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetRecord {
    pub setting: WaveplateSetting,
    pub bloch: BlochVector,
    pub negativity_measured: f64,
    pub state: Option<DensityMatrix>,
}

impl NetRecord {
    pub fn new(
        setting: WaveplateSetting,
        negativity_measured: f64,
        state: Option<DensityMatrix>,
    ) -> Result<Self> {
        if !(negativity_measured >= 0.0) {
            return Err(Error::OutOfRange {
                name: "negativity_measured",
                value: negativity_measured,
                range: ">= 0",
            });
        }
        Ok(Self {
            setting,
            bloch: bloch_vector(&setting),
            negativity_measured,
            state,
        })
    }
}

/// Exact records at every net setting, each carrying its premeasurement state.
pub fn ideal_records(chi: &DensityMatrix, net: &NetSpec) -> Result<Vec<NetRecord>> {
    net.settings()?
        .into_iter()
        .map(|s| {
            let rho = premeasurement(chi, &s)?;
            let n = negativity(&rho, &Bipartition::ab_m())?;
            NetRecord::new(s, n, Some(rho))
        })
        .collect()
}

fn argmax(values: impl Iterator<Item = f64>) -> Option<(usize, f64)> {
    values.enumerate().fold(None, |best, (i, v)| match best {
        Some((_, b)) if b >= v => best,
        _ => Some((i, v)),
    })
}

/// `max_jk { N_jk − chord(n, ±n_jk) }` with the index of the maximizing record.
/// Not clamped: a negative value means "not certified".
pub fn bound1_detailed(records: &[NetRecord], target: &BlochVector) -> Result<(f64, usize)> {
    argmax(
        records
            .iter()
            .map(|r| r.negativity_measured - basis_chord(target, &r.bloch)),
    )
    .map(|(i, v)| (v, i))
    .ok_or(Error::Empty("records"))
}

pub fn bound1(records: &[NetRecord], target: &BlochVector) -> Result<f64> {
    bound1_detailed(records, target).map(|b| b.0)
}

/// `max_jk { N_jk − ‖(ρ_target − ρ_jk)^Γ‖₁ }` with Γ on M.
pub fn bound2_detailed(
    records: &[NetRecord],
    target_state: &DensityMatrix,
) -> Result<(f64, usize)> {
    if records.is_empty() {
        return Err(Error::Empty("records"));
    }
    let mut values = Vec::with_capacity(records.len());
    for (index, r) in records.iter().enumerate() {
        let state = r.state.as_ref().ok_or(Error::MissingState { index })?;
        if state.dims() != target_state.dims() {
            return Err(Error::InvalidSubsystem(format!(
                "record {index} dims {:?} vs target {:?}",
                state.dims(),
                target_state.dims()
            )));
        }
        let diff = target_state.matrix() - state.matrix();
        let m = target_state.n_subsystems() - 1;
        let pt = partial_transpose_op(&diff, target_state.dims(), &[m])?;
        values.push(r.negativity_measured - trace_norm(&pt)?);
    }
    let (i, v) = argmax(values.into_iter()).expect("nonempty");
    Ok((v, i))
}

pub fn bound2(records: &[NetRecord], target_state: &DensityMatrix) -> Result<f64> {
    bound2_detailed(records, target_state).map(|b| b.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub target: WaveplateSetting,
    pub low1: f64,
    pub low2: f64,
    pub low: f64,
    /// Maximizing record for `[low1, low2]`.
    pub witness_record: [usize; 2],
    /// `low2` used the model premeasurement state at the target rather than
    /// a measured one.
    pub model_state_assumed: bool,
}

/// `min(bound1, bound2)`, with bound2's target state built from `chi`.
pub fn combined_bound(
    records: &[NetRecord],
    target: &WaveplateSetting,
    chi: &DensityMatrix,
) -> Result<BoundReport> {
    let (low1, i1) = bound1_detailed(records, &bloch_vector(target))?;
    let (low2, i2) = bound2_detailed(records, &premeasurement(chi, target)?)?;
    Ok(BoundReport {
        target: *target,
        low1,
        low2,
        low: low1.min(low2),
        witness_record: [i1, i2],
        model_state_assumed: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub q: f64,
    pub theta_rad: f64,
    pub phi_rad: f64,
    pub n_theory: f64,
    pub n_low1: f64,
    pub n_low2: f64,
    pub n_low: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub q: f64,
    pub min_low: f64,
    pub argmin: WaveplateSetting,
    pub rows: Vec<ScanRow>,
}

impl ScanResult {
    pub fn certified(&self) -> bool {
        self.min_low > 0.0
    }
}

fn axis(range: f64, step: f64) -> Vec<f64> {
    let count = (range / step + 1e-9).floor() as usize;
    let mut v: Vec<f64> = (0..=count).map(|i| (i as f64 * step).min(range)).collect();
    if range - v[count] > 1e-12 {
        v.push(range);
    }
    v
}

/// `combined_bound` over a `(θ, φ)` grid covering `[0, π/2] × [0, π/4]`,
/// with records and model states built from `noise` applied to `χ^(q)`.
pub fn sphere_scan_with(
    q: f64,
    net: &NetSpec,
    grid_step: f64,
    noise: PreparationNoise,
) -> Result<ScanResult> {
    if !(grid_step > 0.0 && grid_step <= MAX_SCAN_STEP + 1e-15) {
        return Err(Error::OutOfRange {
            name: "grid_step",
            value: grid_step,
            range: "(0, π/90]",
        });
    }
    let chi = noise.chi_q(q)?;
    let records = ideal_records(&chi, net)?;
    let targets: Vec<(f64, f64)> = axis(FRAC_PI_2, grid_step)
        .into_iter()
        .flat_map(|t| axis(FRAC_PI_4, grid_step).into_iter().map(move |p| (t, p)))
        .collect();
    let rows: Vec<ScanRow> = targets
        .par_iter()
        .map(|&(t, p)| {
            let s = WaveplateSetting::new(t, p)?;
            let report = combined_bound(&records, &s, &chi)?;
            Ok(ScanRow {
                q,
                theta_rad: s.theta(),
                phi_rad: s.phi(),
                n_theory: negativity_theory(q, &s)?,
                n_low1: report.low1,
                n_low2: report.low2,
                n_low: report.low,
            })
        })
        .collect::<Result<_>>()?;
    let best = rows
        .iter()
        .min_by(|a, b| a.n_low.total_cmp(&b.n_low))
        .expect("grid is nonempty");
    Ok(ScanResult {
        q,
        min_low: best.n_low,
        argmin: WaveplateSetting::new(best.theta_rad, best.phi_rad)?,
        rows,
    })
}

/// Ideal-record scan of `χ^(q)`.
pub fn sphere_scan(q: f64, net: &NetSpec, grid_step: f64) -> Result<ScanResult> {
    chi_q(q)?;
    sphere_scan_with(q, net, grid_step, PreparationNoise::Ideal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_net_shape() {
        let net = default_net();
        let settings = net.settings().unwrap();
        assert_eq!(settings.len(), 28);
        assert!(settings
            .iter()
            .any(|s| (s.theta() - FRAC_PI_4).abs() < 1e-15 && s.phi() == 0.0));
        assert!(settings.iter().all(
            |s| (0.0..=FRAC_PI_2).contains(&s.theta()) && (0.0..=FRAC_PI_4).contains(&s.phi())
        ));
    }

    #[test]
    fn dedup_counts() {
        let bases = dedup_bloch(&default_net()).unwrap();
        assert_eq!(bases.len(), 16);
        let single = NetSpec {
            thetas: vec![0.3],
            phis: vec![0.1],
        };
        assert_eq!(dedup_bloch(&single).unwrap().len(), 1);
        let mut doubled = default_net();
        doubled.thetas.extend(default_net().thetas);
        assert_eq!(dedup_bloch(&doubled).unwrap(), bases);
    }

    #[test]
    fn chords() {
        let z = BlochVector::z_axis();
        assert_eq!(euclid_chord(&z, &z), 0.0);
        assert_eq!(euclid_chord(&z, &z.antipode()), 2.0);
        assert!((euclid_chord(&z, &BlochVector::x_axis()) - 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cap_radius_values() {
        assert!((cap_radius(0.5).unwrap() - 0.242061).abs() < 1e-6);
        assert_eq!(cap_radius(0.0).unwrap(), 0.0);
        assert_eq!(cap_radius(2.0).unwrap(), 0.0);
        assert!(cap_radius(2.1).is_err());
    }

    #[test]
    fn covering_cases() {
        let net = default_net();
        let tight = verify_covering(&net, 0.1, 1000).unwrap();
        assert!(!tight.covered);
        let single = NetSpec {
            thetas: vec![0.0],
            phis: vec![0.0],
        };
        assert!(verify_covering(&single, 2.0, 1000).unwrap().covered);
        assert!(verify_covering(&net, 0.5, 10).is_err());
    }

    #[test]
    fn packing_cases() {
        let net = default_net();
        let r = verify_packing(&net, 0.5).unwrap();
        assert!(r.packed, "{r:?}");
        assert!((r.min_distance.unwrap() - 0.5).abs() < 1e-12);
        assert!(!verify_packing(&net, 1.9).unwrap().packed);
        let single = NetSpec {
            thetas: vec![0.0],
            phis: vec![0.0],
        };
        let r = verify_packing(&single, 1.0).unwrap();
        assert!(r.packed && r.min_distance.is_none());
    }

    #[test]
    fn fibonacci_points_are_unit() {
        for p in fibonacci_sphere(500) {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bound1_examples() {
        let chi = chi_q(0.2).unwrap();
        let records = ideal_records(&chi, &default_net()).unwrap();
        let r = &records[9];
        assert_eq!(
            bound1(std::slice::from_ref(r), &r.bloch).unwrap(),
            r.negativity_measured
        );
        assert!(bound1(&records, &r.bloch).unwrap() >= r.negativity_measured);
        assert!(bound1(&records, &BlochVector::y_axis().antipode()).unwrap() >= 0.05);

        let z = BlochVector::z_axis();
        let far =
            vec![NetRecord::new(WaveplateSetting::new(0.0, 0.0).unwrap(), 1.0, None).unwrap()];
        let x = BlochVector::x_axis();
        assert!((bound1(&far, &x).unwrap() - (1.0 - 2.0_f64.sqrt())).abs() < 1e-15);
        assert_eq!(bound1(&far, &z).unwrap(), 1.0);
        assert!(bound1(&[], &z).is_err());
    }

    #[test]
    fn bound2_examples() {
        let chi = chi_q(0.4).unwrap();
        let records = ideal_records(&chi, &default_net()).unwrap();
        let own = bound2(&records, records[5].state.as_ref().unwrap()).unwrap();
        assert!(own >= records[5].negativity_measured);
        let target =
            premeasurement(&chi, &WaveplateSetting::new(PI / 8.0, PI / 24.0).unwrap()).unwrap();
        assert!(bound2(&records, &target).unwrap() <= 0.4 + 1e-9);
        let stripped = vec![NetRecord::new(records[0].setting, 0.4, None).unwrap()];
        assert!(matches!(
            bound2(&stripped, &target),
            Err(Error::MissingState { index: 0 })
        ));
    }

    #[test]
    fn combined_bound_is_sound_at_classical_point() {
        let chi = chi_q(0.0).unwrap();
        let records = ideal_records(&chi, &default_net()).unwrap();
        let r = combined_bound(
            &records,
            &WaveplateSetting::new(FRAC_PI_4, 0.0).unwrap(),
            &chi,
        )
        .unwrap();
        assert!(r.low <= 1e-12);
        assert!(r.low <= r.low1 && r.low <= r.low2);
    }

    #[test]
    fn scan_rejects_coarse_step() {
        assert!(sphere_scan(0.5, &default_net(), 0.1).is_err());
    }

    #[test]
    fn axis_includes_endpoint() {
        let a = axis(FRAC_PI_4, PI / 180.0);
        assert_eq!(a.len(), 46);
        assert_eq!(*a.last().unwrap(), FRAC_PI_4);
        let b = axis(1.0, 0.3);
        assert_eq!(b.last().copied(), Some(1.0));
    }
}
