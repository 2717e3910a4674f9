//! The activation circuit: a basis-selecting unitary on B followed by a
//! C-NOT from B onto the apparatus qubit M, which starts in `|0>`.
//!
//! Qubit order is (A, B, M) with A most significant.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::bloch::BlochVector;
use crate::qcore::density::DensityMatrix;
use crate::qcore::matrix::{ComplexMatrix, C64, ONE, ZERO};

pub const THETA_PERIOD: f64 = FRAC_PI_2;
pub const PHI_PERIOD: f64 = FRAC_PI_4;

/// Waveplate angles `(θ, φ)` in radians, held in `[0, π/2] × [0, π/4]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SettingJson", into = "SettingJson")]
pub struct WaveplateSetting {
    theta: f64,
    phi: f64,
}

#[derive(Serialize, Deserialize)]
struct SettingJson {
    theta_rad: f64,
    phi_rad: f64,
}

impl TryFrom<SettingJson> for WaveplateSetting {
    type Error = Error;

    fn try_from(raw: SettingJson) -> Result<Self> {
        WaveplateSetting::new(raw.theta_rad, raw.phi_rad)
    }
}

impl From<WaveplateSetting> for SettingJson {
    fn from(s: WaveplateSetting) -> Self {
        SettingJson {
            theta_rad: s.theta,
            phi_rad: s.phi,
        }
    }
}

fn reduce(angle: f64, period: f64) -> f64 {
    if (0.0..=period).contains(&angle) {
        angle
    } else {
        angle.rem_euclid(period)
    }
}

impl WaveplateSetting {
    /// Angles outside the closed ranges are reduced modulo `π/2` and `π/4`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            theta: reduce(theta, THETA_PERIOD),
            phi: reduce(phi, PHI_PERIOD),
        })
    }

    /// `θ = jπ/12`, `φ = kπ/12`.
    pub fn from_twelfths(j: u32, k: u32) -> Result<Self> {
        Self::new(j as f64 * PI / 12.0, k as f64 * PI / 12.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn parse(theta: &str, phi: &str) -> Result<Self> {
        Self::new(parse_angle(theta)?, parse_angle(phi)?)
    }
}

impl fmt::Display for WaveplateSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(θ={:.6}, φ={:.6})", self.theta, self.phi)
    }
}

/// Parses an angle to radians.
///
/// Accepted forms: `"15"` or `"15deg"` (degrees), `"0.26rad"`,
/// `"j/12 pi"`, `"j/12pi"`, `"jpi/12"`, `"pi/4"`, `"pi"`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let bad = || Error::AngleParse(text.to_string());
    let s: String = text
        .trim()
        .to_ascii_lowercase()
        .split_whitespace()
        .collect();
    if s.is_empty() {
        return Err(bad());
    }
    let number = |t: &str| -> Result<f64> {
        if t.is_empty() {
            return Ok(1.0);
        }
        t.parse::<f64>().map_err(|_| bad())
    };
    let value = if let Some(rest) = s.strip_suffix("rad") {
        number(rest)?
    } else if let Some(rest) = s.strip_suffix("deg") {
        number(rest)?.to_radians()
    } else if s.contains("pi") {
        let (before, after) = s.split_once("pi").ok_or_else(bad)?;
        // "a/b pi" or "a pi / b"
        let lead = match before.split_once('/') {
            Some((num, den)) => number(num)? / number(den)?,
            None => number(before)?,
        };
        let trail = match after.strip_prefix('/') {
            Some(den) => 1.0 / number(den)?,
            None if after.is_empty() => 1.0,
            None => return Err(bad()),
        };
        lead * trail * PI
    } else {
        number(&s)?.to_radians()
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// `n = (−cos a sin 2θ, −sin a, cos a cos 2θ)` with `a = 2(θ − 2φ)`.
pub fn bloch_vector(s: &WaveplateSetting) -> BlochVector {
    let a = 2.0 * (s.theta - 2.0 * s.phi);
    let t = 2.0 * s.theta;
    BlochVector::unchecked(-a.cos() * t.sin(), -a.sin(), a.cos() * t.cos())
}

/// Basis-selecting unitary with `u_b |n> ∝ |0>` and `u_b |n⊥> ∝ |1>`.
///
/// Built as `diag(1, −i) · exp(i(θ−2φ)σx) · exp(−iθσy)`, which is smooth in
/// `(θ, φ)` over the whole range.
pub fn u_b(s: &WaveplateSetting) -> ComplexMatrix {
    let kappa = s.theta - 2.0 * s.phi;
    let (ck, sk) = (kappa.cos(), kappa.sin());
    let (ct, st) = (s.theta.cos(), s.theta.sin());
    let rx = ComplexMatrix::from_vec(
        2,
        2,
        vec![
            C64::new(ck, 0.0),
            C64::new(0.0, sk),
            C64::new(0.0, sk),
            C64::new(ck, 0.0),
        ],
    )
    .expect("finite rotation");
    let ry = ComplexMatrix::from_vec(
        2,
        2,
        vec![
            C64::new(ct, 0.0),
            C64::new(-st, 0.0),
            C64::new(st, 0.0),
            C64::new(ct, 0.0),
        ],
    )
    .expect("finite rotation");
    let phase = ComplexMatrix::from_vec(2, 2, vec![ONE, ZERO, ZERO, C64::new(0.0, -1.0)])
        .expect("finite phase");
    &(&phase * &rx) * &ry
}

/// Unitary whose rows are `<n|` and `<n⊥|` from [`BlochVector::kets`].
pub fn basis_unitary(n: &BlochVector) -> ComplexMatrix {
    let (up, down) = n.kets();
    ComplexMatrix::from_vec(
        2,
        2,
        vec![up[0].conj(), up[1].conj(), down[0].conj(), down[1].conj()],
    )
    .expect("finite kets")
}

/// C-NOT with B as control and M as target, on the (B, M) pair.
pub fn cnot_bm() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

fn require_two_qubits(chi: &DensityMatrix) -> Result<()> {
    if chi.dims() != [2, 2] {
        return Err(Error::InvalidState(format!(
            "expected a two-qubit state, got dims {:?}",
            chi.dims()
        )));
    }
    Ok(())
}

/// `(I_A ⊗ V)(χ ⊗ |0><0|_M)(I_A ⊗ V)†` with `V = CNOT_BM (u ⊗ I_M)`.
pub fn premeasurement_with_unitary(
    chi: &DensityMatrix,
    u: &ComplexMatrix,
) -> Result<DensityMatrix> {
    require_two_qubits(chi)?;
    if u.nrows() != 2 || u.ncols() != 2 {
        return Err(Error::Shape {
            expected: "2x2".into(),
            got: format!("{}x{}", u.nrows(), u.ncols()),
        });
    }
    let v = &cnot_bm() * &u.kron(&ComplexMatrix::identity(2));
    let full = ComplexMatrix::identity(2).kron(&v);
    let apparatus = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
    let input = chi.matrix().kron(&apparatus);
    DensityMatrix::new(input.conjugate_by(&full).hermitian_part(), vec![2, 2, 2])
}

/// Premeasurement state for waveplate setting `s`.
pub fn premeasurement(chi: &DensityMatrix, s: &WaveplateSetting) -> Result<DensityMatrix> {
    premeasurement_with_unitary(chi, &u_b(s))
}

/// Premeasurement state in the basis `±n`, independent of waveplate angles.
pub fn premeasurement_in_basis(chi: &DensityMatrix, n: &BlochVector) -> Result<DensityMatrix> {
    premeasurement_with_unitary(chi, &basis_unitary(n))
}
