//! Linear-algebra and state primitives for small qubit registers.

pub mod bloch;
pub mod density;
pub mod eigen;
pub mod matrix;
pub mod pauli;
pub mod states;

pub use bloch::BlochVector;
pub use density::{
    fidelity, partial_trace, partial_transpose, partial_transpose_op, DensityMatrix,
};
pub use eigen::{hermitian_eigen, trace_norm, Eigen};
pub use matrix::{tensor, ComplexMatrix, C64};
pub use pauli::{pauli_decompose, pauli_sum, Pauli, PauliString};
pub use states::{bell_state, chi_q, quantum_classical, werner_mix, BellKind, PreparationNoise};
