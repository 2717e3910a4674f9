use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::matrix::{tensor_all, ComplexMatrix, C64, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let rows = match self {
            Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
            Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
            Pauli::Y => [[ZERO, -I], [I, ZERO]],
            Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
        };
        ComplexMatrix::from_vec(2, 2, rows.concat()).expect("finite pauli")
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidSubsystem(format!("unknown Pauli `{other}`"))),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Weighted tensor product of single-qubit Paulis, qubit 0 most significant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliString {
    pub ops: Vec<Pauli>,
    pub coefficient: f64,
}

impl PauliString {
    pub fn new(ops: Vec<Pauli>, coefficient: f64) -> Self {
        Self { ops, coefficient }
    }

    /// `"XYZ"` style labels.
    pub fn parse(label: &str, coefficient: f64) -> Result<Self> {
        let ops = label.chars().map(Pauli::from_char).collect::<Result<_>>()?;
        Ok(Self { ops, coefficient })
    }

    pub fn n_qubits(&self) -> usize {
        self.ops.len()
    }

    pub fn label(&self) -> String {
        self.ops.iter().map(|p| p.as_char()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.ops.iter().all(|&p| p == Pauli::I)
    }

    /// The bare operator, coefficient not applied.
    pub fn operator(&self) -> ComplexMatrix {
        let mats: Vec<ComplexMatrix> = self.ops.iter().map(|p| p.matrix()).collect();
        tensor_all(&mats)
    }

    pub fn weighted(&self) -> ComplexMatrix {
        self.operator().scale_real(self.coefficient)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}·{}", self.coefficient, self.label())
    }
}

pub fn pauli_sum(terms: &[PauliString]) -> Result<ComplexMatrix> {
    let n = terms
        .first()
        .map(PauliString::n_qubits)
        .ok_or(Error::Empty("pauli terms"))?;
    if terms.iter().any(|t| t.n_qubits() != n) {
        return Err(Error::Shape {
            expected: format!("{n}-qubit terms"),
            got: "mixed qubit counts".into(),
        });
    }
    let dim = 1 << n;
    Ok(terms.iter().fold(ComplexMatrix::zeros(dim, dim), |acc, t| {
        &acc + &t.weighted()
    }))
}

/// Every `n`-qubit Pauli label in lexicographic I < X < Y < Z order.
pub fn all_strings(n: usize) -> Vec<Vec<Pauli>> {
    (0..4usize.pow(n as u32))
        .map(|mut idx| {
            let mut ops = vec![Pauli::I; n];
            for slot in ops.iter_mut().rev() {
                *slot = Pauli::ALL[idx % 4];
                idx /= 4;
            }
            ops
        })
        .collect()
}

/// Expands a Hermitian `2^n × 2^n` operator as `Σ c_P P` with `c_P = Tr[P M]/2^n`,
/// dropping coefficients below `1e-14`.
pub fn pauli_decompose(m: &ComplexMatrix) -> Result<Vec<PauliString>> {
    let dim = m.require_square()?;
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::Shape {
            expected: "2^n square matrix".into(),
            got: format!("{dim}x{dim}"),
        });
    }
    let deviation = m.hermitian_deviation();
    if deviation > 1e-10 {
        return Err(Error::NotHermitian { deviation });
    }
    let n = dim.trailing_zeros() as usize;
    let mut out = Vec::new();
    for ops in all_strings(n) {
        let p = PauliString::new(ops, 1.0);
        let c: C64 = p.operator().trace_product(m) / dim as f64;
        if c.re.abs() > 1e-14 {
            out.push(PauliString::new(p.ops, c.re));
        }
    }
    Ok(out)
}
