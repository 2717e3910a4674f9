//! Entanglement witnesses: a bipartite one on `A|B` and a GHZ-type one on
//! `A|B|M`. The Pauli decompositions are the stored definitions; the
//! projector forms are kept alongside for comparison.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::density::{partial_transpose_op, DensityMatrix};
use crate::qcore::matrix::{ComplexMatrix, C64};
use crate::qcore::pauli::{pauli_sum, PauliString};
use crate::qcore::states::{bell_state, BellKind};
use crate::tomo::counts::simulate_counts;
use crate::tomo::reconstruct::{pauli_expectation, SettingData};
use crate::tomo::settings::pauli_settings;

/// The two evaluation routes of [`expect`] must agree this closely.
pub const ROUTE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessLabel {
    W2,
    W3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessOperator {
    pub label: WitnessLabel,
    pub matrix: ComplexMatrix,
    pub pauli_terms: Vec<PauliString>,
}

impl WitnessOperator {
    fn from_terms(label: WitnessLabel, terms: &[(&str, f64)]) -> Self {
        let pauli_terms: Vec<PauliString> = terms
            .iter()
            .map(|&(l, c)| PauliString::parse(l, c).expect("static label"))
            .collect();
        let matrix = pauli_sum(&pauli_terms).expect("uniform terms");
        Self {
            label,
            matrix,
            pauli_terms,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.pauli_terms[0].n_qubits()
    }

    /// Max entrywise gap between the stored operator and its projector form.
    pub fn projector_residual(&self) -> f64 {
        self.matrix.max_abs_diff(&projector_form(self.label))
    }
}

/// `(II − XX − YY + ZZ)/4`
pub fn w2() -> WitnessOperator {
    WitnessOperator::from_terms(
        WitnessLabel::W2,
        &[("II", 0.25), ("XX", -0.25), ("YY", -0.25), ("ZZ", 0.25)],
    )
}

/// `(3III − IZZ + XXX − XYY + YIZ + YZI − ZXY − ZYX)/8`
pub fn w3() -> WitnessOperator {
    WitnessOperator::from_terms(
        WitnessLabel::W3,
        &[
            ("III", 0.375),
            ("IZZ", -0.125),
            ("XXX", 0.125),
            ("XYY", -0.125),
            ("YIZ", 0.125),
            ("YZI", 0.125),
            ("ZXY", -0.125),
            ("ZYX", -0.125),
        ],
    )
}

pub fn witness(label: WitnessLabel) -> WitnessOperator {
    match label {
        WitnessLabel::W2 => w2(),
        WitnessLabel::W3 => w3(),
    }
}

/// `½(−|000> − i|011> + i|100> + |111>)`, a locally rotated GHZ state.
pub fn ghz_tilde_ket() -> [C64; 8] {
    let mut k = [C64::new(0.0, 0.0); 8];
    k[0b000] = C64::new(-0.5, 0.0);
    k[0b011] = C64::new(0.0, -0.5);
    k[0b100] = C64::new(0.0, 0.5);
    k[0b111] = C64::new(0.5, 0.0);
    k
}

/// `I/2 − (|Φ−><Φ−|)^Γ` for W2 and `I/2 − |G̃HZ><G̃HZ|` for W3.
pub fn projector_form(label: WitnessLabel) -> ComplexMatrix {
    match label {
        WitnessLabel::W2 => {
            let phi = bell_state(BellKind::PhiMinus);
            let pt = partial_transpose_op(phi.matrix(), &[2, 2], &[1]).expect("two qubits");
            &ComplexMatrix::identity(4).scale_real(0.5) - &pt
        }
        WitnessLabel::W3 => {
            &ComplexMatrix::identity(8).scale_real(0.5)
                - &ComplexMatrix::projector(&ghz_tilde_ket())
        }
    }
}

fn check_dims(w: &WitnessOperator, rho: &DensityMatrix) -> Result<()> {
    if rho.dims().len() != w.n_qubits() || rho.dims().iter().any(|&d| d != 2) {
        return Err(Error::InvalidSubsystem(format!(
            "{:?} acts on {} qubits, state has dims {:?}",
            w.label,
            w.n_qubits(),
            rho.dims()
        )));
    }
    Ok(())
}

/// `Tr[W ρ]`, evaluated as a full trace and as `Σ c_P <P>`; the two must agree.
pub fn expect(w: &WitnessOperator, rho: &DensityMatrix) -> Result<f64> {
    check_dims(w, rho)?;
    let full = rho.expectation(&w.matrix);
    if full.im.abs() > ROUTE_TOL {
        return Err(Error::Numeric(format!("imaginary expectation {}", full.im)));
    }
    let by_terms: f64 = w
        .pauli_terms
        .iter()
        .map(|t| t.coefficient * rho.expectation(&t.operator()).re)
        .sum();
    if (full.re - by_terms).abs() > ROUTE_TOL {
        return Err(Error::Numeric(format!(
            "witness routes disagree: {} vs {}",
            full.re, by_terms
        )));
    }
    Ok(full.re)
}

/// `Σ c_P <P>` with each `<P>` estimated from simulated Poisson counts.
pub fn expect_noisy(
    w: &WitnessOperator,
    rho: &DensityMatrix,
    exposure: f64,
    seed: u64,
) -> Result<f64> {
    check_dims(w, rho)?;
    let counts = simulate_counts(rho, &pauli_settings(w.n_qubits())?, exposure, seed)?;
    let data: Vec<SettingData> = counts.iter().map(SettingData::from).collect();
    w.pauli_terms
        .iter()
        .map(|t| Ok(t.coefficient * pauli_expectation(&data, &t.ops)?))
        .sum()
}
