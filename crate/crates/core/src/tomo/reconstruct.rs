use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::qcore::density::DensityMatrix;
use crate::qcore::eigen::hermitian_eigen;
use crate::qcore::matrix::ComplexMatrix;
use crate::qcore::pauli::{all_strings, Pauli, PauliString};
use crate::tomo::counts::{born_probabilities, CountsTable};
use crate::tomo::settings::{pauli_settings, MeasurementSetting};

/// `project_psd` accepts inputs whose trace is within this of one.
pub const PROJECTION_TRACE_WINDOW: f64 = 0.2;

/// Outcome weights for one setting: raw counts or exact probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct SettingData {
    pub setting: MeasurementSetting,
    pub weights: Vec<f64>,
}

impl From<&CountsTable> for SettingData {
    fn from(t: &CountsTable) -> Self {
        SettingData {
            setting: t.setting.clone(),
            weights: t.counts.iter().map(|&c| c as f64).collect(),
        }
    }
}

/// Infinite-exposure data: Born probabilities for every setting.
pub fn exact_data(
    rho: &DensityMatrix,
    settings: &[MeasurementSetting],
) -> Result<Vec<SettingData>> {
    settings
        .iter()
        .map(|s| {
            Ok(SettingData {
                setting: s.clone(),
                weights: born_probabilities(rho, s)?,
            })
        })
        .collect()
}

fn check_complete(data: &[SettingData]) -> Result<usize> {
    let n = data
        .first()
        .map(|d| d.setting.n_qubits())
        .ok_or_else(|| Error::IncompleteSettings("no settings".into()))?;
    if data.iter().any(|d| d.setting.n_qubits() != n) {
        return Err(Error::IncompleteSettings("mixed qubit counts".into()));
    }
    let present: BTreeSet<String> = data.iter().map(|d| d.setting.label()).collect();
    let missing: Vec<String> = pauli_settings(n)?
        .iter()
        .map(MeasurementSetting::label)
        .filter(|l| !present.contains(l))
        .collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteSettings(format!(
            "missing {}",
            missing.join(", ")
        )));
    }
    Ok(n)
}

/// Parity-weighted estimate of `<P>`, pooled over every setting whose axes
/// agree with `P` on its non-identity positions.
pub fn pauli_expectation(data: &[SettingData], ops: &[Pauli]) -> Result<f64> {
    if ops.iter().all(|&p| p == Pauli::I) {
        return Ok(1.0);
    }
    let mut num = 0.0;
    let mut den = 0.0;
    let mut compatible = false;
    for d in data {
        let axes = d.setting.axes();
        if axes.len() != ops.len() || ops.iter().zip(axes).any(|(&p, &a)| p != Pauli::I && p != a) {
            continue;
        }
        compatible = true;
        for (o, &w) in d.weights.iter().enumerate() {
            let parity: f64 = ops
                .iter()
                .enumerate()
                .filter(|(_, &p)| p != Pauli::I)
                .map(|(k, _)| d.setting.sign(o, k))
                .product();
            num += w * parity;
            den += w;
        }
    }
    if !compatible {
        let label: String = ops.iter().map(|p| p.as_char()).collect();
        return Err(Error::IncompleteSettings(format!(
            "no setting measures {label}"
        )));
    }
    Ok(if den > 0.0 { num / den } else { 0.0 })
}

/// `(1/2^n) Σ_P <P> P` before any positivity correction.
pub fn linear_inversion(data: &[SettingData]) -> Result<ComplexMatrix> {
    let n = check_complete(data)?;
    let dim = 1usize << n;
    let mut h = ComplexMatrix::zeros(dim, dim);
    for ops in all_strings(n) {
        let e = pauli_expectation(data, &ops)?;
        if e != 0.0 {
            h = &h + &PauliString::new(ops, e / dim as f64).weighted();
        }
    }
    Ok(h.hermitian_part())
}

/// Linear inversion followed by [`project_psd`].
pub fn reconstruct_from(data: &[SettingData]) -> Result<DensityMatrix> {
    project_psd(&linear_inversion(data)?)
}

pub fn reconstruct(counts: &[CountsTable]) -> Result<DensityMatrix> {
    let data: Vec<SettingData> = counts.iter().map(SettingData::from).collect();
    reconstruct_from(&data)
}

/// Nearest-spectrum density matrix: repeatedly zero the most negative
/// eigenvalue and spread its deficit evenly over the remaining positive
/// ones, then rescale to unit trace.
pub fn project_psd(h: &ComplexMatrix) -> Result<DensityMatrix> {
    let n = h.require_square()?;
    let tr = h.trace();
    if (tr.re - 1.0).abs() > PROJECTION_TRACE_WINDOW || tr.im.abs() > PROJECTION_TRACE_WINDOW {
        return Err(Error::InvalidState(format!(
            "trace {tr} outside the projection window"
        )));
    }
    let eig = hermitian_eigen(h)?;
    let mut vals = eig.values.clone();
    if vals.iter().all(|&v| v <= 0.0) {
        return Err(Error::InvalidState(
            "spectrum has no positive eigenvalue".into(),
        ));
    }
    loop {
        let (worst, &min) = vals
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty spectrum");
        if min >= 0.0 {
            break;
        }
        vals[worst] = 0.0;
        let positive: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 0.0).collect();
        let share = min / positive.len() as f64;
        for i in positive {
            vals[i] += share;
        }
    }
    let total: f64 = vals.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidState("projection removed all weight".into()));
    }
    for v in vals.iter_mut() {
        *v /= total;
    }
    let m = eig.rebuild(&vals).hermitian_part();
    if n.is_power_of_two() && n >= 2 {
        DensityMatrix::qubits(m)
    } else {
        DensityMatrix::new(m, vec![n])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::C64;
    use crate::qcore::states::chi_q;
    use crate::tomo::counts::simulate_counts;

    #[test]
    fn projection_examples() {
        let r = project_psd(&ComplexMatrix::from_real_diag(&[1.1, -0.1])).unwrap();
        assert!(
            r.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, 0.0]))
                < 1e-15
        );
        let r = project_psd(&ComplexMatrix::from_real_diag(&[0.6, 0.6, -0.2])).unwrap();
        assert!(
            r.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diag(&[0.5, 0.5, 0.0]))
                < 1e-15
        );
        assert_eq!(r.dims(), [3]);
        let valid = chi_q(0.3).unwrap();
        let r = project_psd(valid.matrix()).unwrap();
        assert!(r.matrix().max_abs_diff(valid.matrix()) < 1e-12);
    }

    #[test]
    fn projection_errors() {
        assert!(project_psd(&ComplexMatrix::from_real_diag(&[0.5, 0.1])).is_err());
        let m = ComplexMatrix::from_rows(&[
            vec![C64::new(0.5, 0.0), C64::new(1.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(0.5, 0.0)],
        ])
        .unwrap();
        assert!(project_psd(&m).is_err());
    }

    #[test]
    fn exact_inversion_identity() {
        let rho = chi_q(0.5).unwrap();
        let data = exact_data(&rho, &pauli_settings(2).unwrap()).unwrap();
        let back = reconstruct_from(&data).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-9);
    }

    #[test]
    fn incomplete_settings_rejected() {
        let rho = chi_q(0.5).unwrap();
        let mut data = exact_data(&rho, &pauli_settings(2).unwrap()).unwrap();
        data.pop();
        assert!(matches!(
            reconstruct_from(&data),
            Err(Error::IncompleteSettings(_))
        ));
        assert!(reconstruct_from(&[]).is_err());
    }

    #[test]
    fn maximally_mixed_statistics() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2, 2]).unwrap();
        let counts = simulate_counts(&rho, &pauli_settings(3).unwrap(), 1e5, 5).unwrap();
        let r = reconstruct(&counts).unwrap();
        assert!((r.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(r.matrix().max_abs_diff(rho.matrix()) < 0.02);
    }
}
