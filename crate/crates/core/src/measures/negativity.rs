use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::WaveplateSetting;
use crate::qcore::bloch::BlochVector;
use crate::qcore::density::{partial_transpose_op, DensityMatrix};
use crate::qcore::eigen::trace_norm;
use crate::qcore::matrix::{ComplexMatrix, C64};

/// Raw negativities below this are treated as a numeric failure.
pub const NEGATIVITY_FLOOR: f64 = -1e-12;

/// Two-group split of a register; `right` is the transposed side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    pub fn new(left: Vec<usize>, n_subsystems: usize) -> Result<Self> {
        let mut left = left;
        left.sort_unstable();
        left.dedup();
        if left.iter().any(|&s| s >= n_subsystems) {
            return Err(Error::InvalidSubsystem(format!(
                "cut {left:?} out of range for {n_subsystems} subsystems"
            )));
        }
        let right: Vec<usize> = (0..n_subsystems).filter(|s| !left.contains(s)).collect();
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidSubsystem(format!(
                "cut {left:?} leaves an empty side"
            )));
        }
        Ok(Self { left, right })
    }

    /// `A|B` on two qubits.
    pub fn a_b() -> Self {
        Self {
            left: vec![0],
            right: vec![1],
        }
    }

    /// `AB|M` on the premeasurement register.
    pub fn ab_m() -> Self {
        Self {
            left: vec![0, 1],
            right: vec![2],
        }
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    fn n_subsystems(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

/// `‖ρ^Γ‖₁ − 1` with Γ on the right side of the cut, clamped at zero.
pub fn negativity(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    if cut.n_subsystems() != rho.n_subsystems() {
        return Err(Error::InvalidSubsystem(format!(
            "cut over {} subsystems applied to a state with {}",
            cut.n_subsystems(),
            rho.n_subsystems()
        )));
    }
    let pt = partial_transpose_op(rho.matrix(), rho.dims(), cut.right())?;
    clamp_raw(trace_norm(&pt)? - 1.0)
}

fn clamp_raw(raw: f64) -> Result<f64> {
    if raw < NEGATIVITY_FLOOR {
        return Err(Error::Numeric(format!("negativity {raw:e} below floor")));
    }
    Ok(raw.max(0.0))
}

/// `<n|χ|n⊥>` as an operator on A.
pub fn offdiag_block(chi: &DensityMatrix, n: &BlochVector) -> Result<ComplexMatrix> {
    if chi.dims() != [2, 2] {
        return Err(Error::InvalidState(format!(
            "expected a two-qubit state, got dims {:?}",
            chi.dims()
        )));
    }
    let (up, down) = n.kets();
    let m = chi.matrix();
    let mut out = ComplexMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..2 {
                for l in 0..2 {
                    acc += up[k].conj() * m[(2 * i + k, 2 * j + l)] * down[l];
                }
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Premeasurement negativity across `AB|M` from the off-diagonal block alone:
/// `2 ‖<n|χ|n⊥>‖₁`.
pub fn negativity_offdiag(chi: &DensityMatrix, n: &BlochVector) -> Result<f64> {
    Ok(2.0 * trace_norm(&offdiag_block(chi, n)?)?)
}

/// Closed form for the symmetric Bell-diagonal family:
/// `√[((q−1)(3q−1)cos(4θ−8φ) + q(5q−4) + 1)/2]` below `q = 1/3`, `q` above.
pub fn negativity_theory(q: f64, s: &WaveplateSetting) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::OutOfRange {
            name: "q",
            value: q,
            range: "[0, 1]",
        });
    }
    if q >= 1.0 / 3.0 {
        return Ok(q);
    }
    let c = (4.0 * s.theta() - 8.0 * s.phi()).cos();
    let radicand = ((q - 1.0) * (3.0 * q - 1.0) * c + q * (5.0 * q - 4.0) + 1.0) / 2.0;
    Ok(radicand.max(0.0).sqrt())
}
