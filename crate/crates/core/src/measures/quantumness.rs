use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measures::negativity::negativity_offdiag;
use crate::measures::optimize::{compass_search, NelderMead};
use crate::protocol::{bloch_vector, WaveplateSetting};
use crate::qcore::density::DensityMatrix;

/// Coarse grid step for the quantumness search; divides the net spacing.
pub const COARSE_STEP: f64 = std::f64::consts::PI / 48.0;
pub const ANGULAR_RESOLUTION: f64 = 1e-6;
/// Settings whose values differ by less than this are ties.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    BruteForce,
    OffDiagonalBlock,
    ClosedForm,
    NumericalMin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    pub value: f64,
    pub method: Method,
    pub settings_used: Option<WaveplateSetting>,
}

fn at(chi: &DensityMatrix, theta: f64, phi: f64) -> f64 {
    match WaveplateSetting::new(theta, phi) {
        Ok(s) => negativity_offdiag(chi, &bloch_vector(&s)).unwrap_or(f64::INFINITY),
        Err(_) => f64::INFINITY,
    }
}

/// `Q_N`: the smallest premeasurement negativity over all settings.
///
/// Scans `[0, π/2] × [0, π/4]` at [`COARSE_STEP`], takes the lexicographically
/// first `(θ, φ)` within [`TIE_TOL`] of the grid minimum, then refines it by
/// compass search down to [`ANGULAR_RESOLUTION`]. A Nelder-Mead polish
/// follows for minima in valleys that are not axis aligned; like the compass
/// moves it is only accepted on a gain above [`TIE_TOL`].
pub fn negativity_of_quantumness(chi: &DensityMatrix) -> Result<MeasureResult> {
    // validates the dims before the scan swallows errors
    negativity_offdiag(chi, &bloch_vector(&WaveplateSetting::new(0.0, 0.0)?))?;
    let n_theta = (FRAC_PI_2 / COARSE_STEP).round() as usize;
    let n_phi = (FRAC_PI_4 / COARSE_STEP).round() as usize;
    let mut grid = Vec::with_capacity((n_theta + 1) * (n_phi + 1));
    for i in 0..=n_theta {
        for k in 0..=n_phi {
            let (theta, phi) = (i as f64 * COARSE_STEP, k as f64 * COARSE_STEP);
            grid.push((theta, phi, at(chi, theta, phi)));
        }
    }
    let floor = grid.iter().map(|g| g.2).fold(f64::INFINITY, f64::min);
    let &(theta, phi, _) = grid
        .iter()
        .find(|g| g.2 <= floor + TIE_TOL)
        .expect("nonempty grid");

    let refined = compass_search(
        |x| at(chi, x[0], x[1]),
        [theta, phi],
        COARSE_STEP / 2.0,
        ANGULAR_RESOLUTION,
        TIE_TOL,
    );
    let polish = NelderMead {
        initial_step: 8.0 * ANGULAR_RESOLUTION,
        max_iterations: 500,
        x_tol: 1e-12,
        f_tol: 1e-15,
    }
    .minimize(|x| at(chi, x[0], x[1]), refined.x);
    let best = if polish.value < refined.value - TIE_TOL {
        polish
    } else {
        refined
    };
    Ok(MeasureResult {
        value: best.value.max(0.0),
        method: Method::NumericalMin,
        settings_used: Some(WaveplateSetting::new(best.x[0], best.x[1])?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::bloch::BlochVector;
    use crate::qcore::states::{chi_q, quantum_classical};
    use std::f64::consts::PI;

    #[test]
    fn chi_q_matches_q() {
        for q in [0.0, 0.1, 0.2, 0.3, 0.4, 0.7, 1.0] {
            let r = negativity_of_quantumness(&chi_q(q).unwrap()).unwrap();
            assert!((r.value - q).abs() < 1e-6, "q={q} {r:?}");
            assert_eq!(r.method, Method::NumericalMin);
        }
    }

    #[test]
    fn tie_break_and_minimizer_line() {
        let r = negativity_of_quantumness(&chi_q(0.6).unwrap()).unwrap();
        let s = r.settings_used.unwrap();
        assert_eq!((s.theta(), s.phi()), (0.0, 0.0));
        let r = negativity_of_quantumness(&chi_q(0.1).unwrap()).unwrap();
        let s = r.settings_used.unwrap();
        let off = (s.phi() - s.theta() / 2.0).abs();
        assert!((off - PI / 8.0).abs() < 1e-6, "{s}");
    }

    #[test]
    fn quantum_classical_is_zero() {
        let half = DensityMatrix::maximally_mixed(vec![2]).unwrap();
        let up = DensityMatrix::new(BlochVector::z_axis().projector(), vec![2]).unwrap();
        let qc = quantum_classical(
            [0.5, 0.5],
            [&up, &half],
            BlochVector::normalized(0.3, 0.5, -0.2).unwrap(),
        )
        .unwrap();
        let r = negativity_of_quantumness(&qc).unwrap();
        assert!(r.value < 1e-6, "{r:?}");
    }

    #[test]
    fn serializes_with_method_tag() {
        let r = negativity_of_quantumness(&chi_q(0.5).unwrap()).unwrap();
        let v = serde_json::to_value(r).unwrap();
        assert_eq!(v["method"], "NumericalMin");
        assert_eq!(v["settings_used"]["theta_rad"], 0.0);
    }
}
