//! Validated density matrices over a tensor product of subsystems.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::eigen::{hermitian_eigen, sqrt_psd};
use crate::qcore::matrix::{ComplexMatrix, C64};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = -1e-9;

/// Hermitian, unit-trace, PSD operator with its subsystem dimensions.
/// Subsystem 0 is the most significant tensor factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityJson", into = "DensityJson")]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DensityJson {
    dims: Vec<usize>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl TryFrom<DensityJson> for DensityMatrix {
    type Error = Error;

    fn try_from(raw: DensityJson) -> Result<Self> {
        DensityMatrix::new(ComplexMatrix::from_parts(&raw.re, &raw.im)?, raw.dims)
    }
}

impl From<DensityMatrix> for DensityJson {
    fn from(rho: DensityMatrix) -> Self {
        DensityJson {
            re: rho.matrix.real_rows(),
            im: rho.matrix.imag_rows(),
            dims: rho.dims,
        }
    }
}

fn check_dims(dims: &[usize], size: usize) -> Result<()> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::InvalidState(format!(
            "subsystem dimensions must each be >= 2, got {dims:?}"
        )));
    }
    let product: usize = dims.iter().product();
    if product != size {
        return Err(Error::InvalidState(format!(
            "dims {dims:?} multiply to {product}, matrix is {size}x{size}"
        )));
    }
    Ok(())
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let n = matrix.require_square()?;
        check_dims(&dims, n)?;
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {deviation:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min_eig = hermitian_eigen(&matrix)?.values[0];
        if min_eig < PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { matrix, dims })
    }

    /// Convenience for `n` qubits.
    pub fn qubits(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.require_square()?;
        if !n.is_power_of_two() || n < 2 {
            return Err(Error::InvalidState(format!(
                "{n} is not a qubit register size"
            )));
        }
        Self::new(matrix, vec![2; n.trailing_zeros() as usize])
    }

    pub fn pure(ket: &[C64], dims: Vec<usize>) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero ket".into()));
        }
        let normalized: Vec<C64> = ket.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::projector(&normalized), dims)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        Self::new(ComplexMatrix::identity(n).scale_real(1.0 / n as f64), dims)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// `Tr[O ρ]`
    pub fn expectation(&self, op: &ComplexMatrix) -> C64 {
        op.trace_product(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix)
            .expect("validated density matrix is Hermitian")
            .values
    }

    /// Tensor product, subsystem lists concatenated.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let dims = self.dims.iter().chain(&other.dims).copied().collect();
        DensityMatrix::new(self.matrix.kron(&other.matrix), dims)
    }

    /// `U ρ U†` for a unitary on the full space.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix.conjugate_by(u), self.dims.clone())
    }

    /// Convex combination `w·self + (1-w)·other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if self.dims != other.dims {
            return Err(Error::InvalidSubsystem(
                "dimension mismatch in mixture".into(),
            ));
        }
        let m = &self.matrix.scale_real(w) + &other.matrix.scale_real(1.0 - w);
        DensityMatrix::new(m, self.dims.clone())
    }

    pub fn partial_transpose(&self, subsystem: usize) -> Result<ComplexMatrix> {
        partial_transpose_op(&self.matrix, &self.dims, &[subsystem])
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, keep)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("density matrix serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidState(e.to_string()))
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

fn digit(index: usize, stride: usize, dim: usize) -> usize {
    (index / stride) % dim
}

/// Partial transpose of an operator over the listed subsystems.
pub fn partial_transpose_op(
    m: &ComplexMatrix,
    dims: &[usize],
    subsystems: &[usize],
) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    check_dims(dims, n).map_err(|e| Error::InvalidSubsystem(e.to_string()))?;
    if let Some(&bad) = subsystems.iter().find(|&&s| s >= dims.len()) {
        return Err(Error::InvalidSubsystem(format!(
            "subsystem {bad} out of range for {} subsystems",
            dims.len()
        )));
    }
    let st = strides(dims);
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (mut r, mut c) = (i, j);
            for &s in subsystems {
                let (di, dj) = (digit(i, st[s], dims[s]), digit(j, st[s], dims[s]));
                r = r - di * st[s] + dj * st[s];
                c = c - dj * st[s] + di * st[s];
            }
            out[(i, j)] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Partial transpose on one subsystem.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<ComplexMatrix> {
    rho.partial_transpose(subsystem)
}

/// Reduced state on the kept subsystems (in ascending order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::InvalidSubsystem("keep set is empty".into()));
    }
    let dims = rho.dims();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&s| s >= dims.len()) {
        return Err(Error::InvalidSubsystem(format!(
            "subsystem {bad} out of range"
        )));
    }
    if kept.len() == dims.len() {
        return Ok(rho.clone());
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|s| !kept.contains(s)).collect();
    let st = strides(dims);
    let out_dims: Vec<usize> = kept.iter().map(|&s| dims[s]).collect();
    let out_st = strides(&out_dims);
    let n_out: usize = out_dims.iter().product();
    let reduced_index = |i: usize| -> usize {
        kept.iter()
            .zip(&out_st)
            .map(|(&s, &os)| digit(i, st[s], dims[s]) * os)
            .sum()
    };
    let n = rho.dim();
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(n_out, n_out);
    for i in 0..n {
        for j in 0..n {
            if traced
                .iter()
                .all(|&s| digit(i, st[s], dims[s]) == digit(j, st[s], dims[s]))
            {
                out[(reduced_index(i), reduced_index(j))] += m[(i, j)];
            }
        }
    }
    DensityMatrix::new(out, out_dims)
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::InvalidSubsystem(format!(
            "fidelity between dims {:?} and {:?}",
            rho.dims(),
            sigma.dims()
        )));
    }
    let s = sqrt_psd(rho.matrix())?;
    let inner = (&(&s * sigma.matrix()) * &s).hermitian_part();
    let root_trace: f64 = hermitian_eigen(&inner)?
        .values
        .iter()
        .map(|&x| if x > 1e-15 { x.sqrt() } else { 0.0 })
        .sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}
