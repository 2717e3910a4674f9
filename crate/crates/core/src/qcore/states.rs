//! Canonical two-qubit states: Bell basis, the symmetric Bell-diagonal family,
//! Werner mixtures and quantum-classical (zero-discord) states.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::bloch::BlochVector;
use crate::qcore::density::DensityMatrix;
use crate::qcore::matrix::{ComplexMatrix, C64};

/// Bell states with `|H> = |0>`, `|V> = |1>`:
/// `|Ψ±> = (|01> ± |10>)/√2`, `|Φ±> = (|00> ± |11>)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellKind {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PsiMinus,
        BellKind::PsiPlus,
        BellKind::PhiMinus,
        BellKind::PhiPlus,
    ];
}

pub fn bell_ket(kind: BellKind) -> [C64; 4] {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let z = C64::new(0.0, 0.0);
    match kind {
        BellKind::PsiMinus => [z, h, -h, z],
        BellKind::PsiPlus => [z, h, h, z],
        BellKind::PhiMinus => [h, z, z, -h],
        BellKind::PhiPlus => [h, z, z, h],
    }
}

pub fn bell_state(kind: BellKind) -> DensityMatrix {
    DensityMatrix::pure(&bell_ket(kind), vec![2, 2]).expect("Bell state is valid")
}

fn unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            range: "[0, 1]",
        })
    }
}

/// `q|Ψ+><Ψ+| + (1-q)/2 (|Φ+><Φ+| + |Ψ-><Ψ-|)`
pub fn chi_q(q: f64) -> Result<DensityMatrix> {
    unit_interval("q", q)?;
    let m = &(&bell_state(BellKind::PsiPlus).matrix().scale_real(q)
        + &bell_state(BellKind::PhiPlus)
            .matrix()
            .scale_real((1.0 - q) / 2.0))
        + &bell_state(BellKind::PsiMinus)
            .matrix()
            .scale_real((1.0 - q) / 2.0);
    DensityMatrix::new(m, vec![2, 2])
}

/// `v|bell><bell| + (1-v) I/4`
pub fn werner_mix(kind: BellKind, v: f64) -> Result<DensityMatrix> {
    unit_interval("v", v)?;
    let mixed = DensityMatrix::maximally_mixed(vec![2, 2])?;
    bell_state(kind).mix(&mixed, v)
}

/// Visibility whose Werner mixture reaches the given purity, from
/// `purity = (3v² + 1)/4`.
pub fn werner_visibility_for_purity(purity: f64) -> Result<f64> {
    if !(0.25..=1.0).contains(&purity) {
        return Err(Error::OutOfRange {
            name: "purity",
            value: purity,
            range: "[1/4, 1]",
        });
    }
    Ok(((4.0 * purity - 1.0) / 3.0).sqrt())
}

/// State-preparation imperfection applied to every Bell component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "visibility", rename_all = "lowercase")]
pub enum PreparationNoise {
    Ideal,
    Werner(f64),
}

impl PreparationNoise {
    /// Bell-diagonal mixtures degrade to `v·χ + (1-v) I/4`.
    pub fn apply(&self, chi: &DensityMatrix) -> Result<DensityMatrix> {
        match *self {
            PreparationNoise::Ideal => Ok(chi.clone()),
            PreparationNoise::Werner(v) => {
                unit_interval("v", v)?;
                chi.mix(&DensityMatrix::maximally_mixed(chi.dims().to_vec())?, v)
            }
        }
    }

    pub fn chi_q(&self, q: f64) -> Result<DensityMatrix> {
        self.apply(&chi_q(q)?)
    }
}

/// `Σ_n p_n τ^n_A ⊗ |n><n|_B` with `|0> = |basis>`, `|1> = |basis⊥>`.
pub fn quantum_classical(
    ps: [f64; 2],
    taus: [&DensityMatrix; 2],
    basis: BlochVector,
) -> Result<DensityMatrix> {
    let sum = ps[0] + ps[1];
    if (sum - 1.0).abs() > 1e-10 || ps.iter().any(|&p| p < 0.0) {
        return Err(Error::ProbabilityMismatch { sum });
    }
    if let Some(bad) = taus.iter().find(|t| t.dims() != [2]) {
        return Err(Error::InvalidState(format!(
            "τ must be a single-qubit state, got dims {:?}",
            bad.dims()
        )));
    }
    let (up, down) = basis.kets();
    let pu = ComplexMatrix::projector(&up);
    let pd = ComplexMatrix::projector(&down);
    let m = &taus[0].matrix().scale_real(ps[0]).kron(&pu)
        + &taus[1].matrix().scale_real(ps[1]).kron(&pd);
    DensityMatrix::new(m, vec![2, 2])
}
