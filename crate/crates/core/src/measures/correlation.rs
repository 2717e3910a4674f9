use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::density::DensityMatrix;
use crate::qcore::eigen::eigenvalues;
use crate::qcore::matrix::{ComplexMatrix, C64};
use crate::qcore::pauli::Pauli;

/// Off-diagonal correlations and local Bloch components must stay below
/// this for a state to count as Bell-diagonal.
pub const BELL_DIAGONAL_TOL: f64 = 1e-8;

const AXES: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

/// `T_ij = Tr[χ (σ_i ⊗ σ_j)]` together with the local Bloch vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub entries: [[f64; 3]; 3],
    pub local_a: [f64; 3],
    pub local_b: [f64; 3],
}

impl CorrelationMatrix {
    pub fn of(chi: &DensityMatrix) -> Result<Self> {
        if chi.dims() != [2, 2] {
            return Err(Error::InvalidState(format!(
                "correlation matrix needs two qubits, got dims {:?}",
                chi.dims()
            )));
        }
        let id = Pauli::I.matrix();
        let mut entries = [[0.0; 3]; 3];
        let mut local_a = [0.0; 3];
        let mut local_b = [0.0; 3];
        for (i, a) in AXES.iter().enumerate() {
            let sa = a.matrix();
            local_a[i] = chi.expectation(&sa.kron(&id)).re;
            local_b[i] = chi.expectation(&id.kron(&sa)).re;
            for (j, b) in AXES.iter().enumerate() {
                entries[i][j] = chi.expectation(&sa.kron(&b.matrix())).re;
            }
        }
        Ok(Self {
            entries,
            local_a,
            local_b,
        })
    }

    pub fn diagonal(&self) -> [f64; 3] {
        [self.entries[0][0], self.entries[1][1], self.entries[2][2]]
    }

    /// Largest off-diagonal correlation or local Bloch component.
    pub fn bell_diagonal_residual(&self) -> f64 {
        let mut r = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    r = r.max(self.entries[i][j].abs());
                }
            }
            r = r.max(self.local_a[i].abs()).max(self.local_b[i].abs());
        }
        r
    }

    pub fn is_bell_diagonal(&self) -> bool {
        self.bell_diagonal_residual() < BELL_DIAGONAL_TOL
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> [f64; 3] {
        let mut gram = ComplexMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let s: f64 = (0..3)
                    .map(|k| self.entries[k][i] * self.entries[k][j])
                    .sum();
                gram[(i, j)] = C64::new(s, 0.0);
            }
        }
        let vals = eigenvalues(&gram).expect("symmetric Gram matrix");
        [
            vals[2].max(0.0).sqrt(),
            vals[1].max(0.0).sqrt(),
            vals[0].max(0.0).sqrt(),
        ]
    }
}

pub fn correlation_matrix(chi: &DensityMatrix) -> Result<CorrelationMatrix> {
    CorrelationMatrix::of(chi)
}

/// Trace-distance discord of a Bell-diagonal state: the middle of the three
/// `|T_ii|`.
pub fn discord_bell_diagonal(chi: &DensityMatrix) -> Result<f64> {
    let t = CorrelationMatrix::of(chi)?;
    let residual = t.bell_diagonal_residual();
    if residual >= BELL_DIAGONAL_TOL {
        return Err(Error::NotBellDiagonal { residual });
    }
    let mut d = t.diagonal().map(f64::abs);
    d.sort_by(f64::total_cmp);
    Ok(d[1])
}
