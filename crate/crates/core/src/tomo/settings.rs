use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::matrix::{kron_vec, ComplexMatrix, C64, ONE, ZERO};
use crate::qcore::pauli::Pauli;

/// Product-basis measurement: one Pauli axis per qubit, qubit 0 most
/// significant. Outcome `o` has bit `k` (counting from the most significant)
/// set when qubit `k` landed in the `−1` eigenstate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MeasurementSetting {
    axes: Vec<Pauli>,
    projectors: Vec<ComplexMatrix>,
}

fn eigenket(axis: Pauli, minus: bool) -> Result<[C64; 2]> {
    let h = FRAC_1_SQRT_2;
    let sign = if minus { -1.0 } else { 1.0 };
    match axis {
        Pauli::Z if minus => Ok([ZERO, ONE]),
        Pauli::Z => Ok([ONE, ZERO]),
        Pauli::X => Ok([C64::new(h, 0.0), C64::new(sign * h, 0.0)]),
        Pauli::Y => Ok([C64::new(h, 0.0), C64::new(0.0, sign * h)]),
        Pauli::I => Err(Error::InvalidSubsystem(
            "identity is not a measurement axis".into(),
        )),
    }
}

impl MeasurementSetting {
    pub fn new(axes: Vec<Pauli>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Empty("measurement axes"));
        }
        let n = axes.len();
        let mut projectors = Vec::with_capacity(1 << n);
        for outcome in 0..(1usize << n) {
            let mut ket = vec![ONE];
            for (k, &axis) in axes.iter().enumerate() {
                let minus = (outcome >> (n - 1 - k)) & 1 == 1;
                ket = kron_vec(&ket, &eigenket(axis, minus)?);
            }
            projectors.push(ComplexMatrix::projector(&ket));
        }
        Ok(Self { axes, projectors })
    }

    pub fn parse(label: &str) -> Result<Self> {
        Self::new(label.chars().map(Pauli::from_char).collect::<Result<_>>()?)
    }

    pub fn axes(&self) -> &[Pauli] {
        &self.axes
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn n_qubits(&self) -> usize {
        self.axes.len()
    }

    pub fn n_outcomes(&self) -> usize {
        self.projectors.len()
    }

    pub fn label(&self) -> String {
        self.axes.iter().map(|p| p.as_char()).collect()
    }

    /// `±1` eigenvalue of qubit `k` in outcome `o`.
    pub fn sign(&self, outcome: usize, qubit: usize) -> f64 {
        if (outcome >> (self.n_qubits() - 1 - qubit)) & 1 == 1 {
            -1.0
        } else {
            1.0
        }
    }
}

impl TryFrom<String> for MeasurementSetting {
    type Error = Error;

    fn try_from(label: String) -> Result<Self> {
        MeasurementSetting::parse(&label)
    }
}

impl From<MeasurementSetting> for String {
    fn from(s: MeasurementSetting) -> Self {
        s.label()
    }
}

/// All `3^n` axis combinations in X < Y < Z lexicographic order.
pub fn pauli_settings(n_qubits: usize) -> Result<Vec<MeasurementSetting>> {
    if !(2..=3).contains(&n_qubits) {
        return Err(Error::UnsupportedQubits(n_qubits));
    }
    const AXES: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
    (0..3usize.pow(n_qubits as u32))
        .map(|mut idx| {
            let mut axes = vec![Pauli::X; n_qubits];
            for slot in axes.iter_mut().rev() {
                *slot = AXES[idx % 3];
                idx /= 3;
            }
            MeasurementSetting::new(axes)
        })
        .collect()
}

/// One row of the waveplate schedule for measuring polarization (B) and
/// path (M) of the second photon. Angles in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveplateScheduleRow {
    pub set_label: String,
    pub state_label: String,
    pub qwp_a: f64,
    pub hwp_a: f64,
    pub qwp_b: f64,
    pub hwp_b: f64,
    pub qwp_c: f64,
    pub hwp_c: f64,
    pub qwp_d: f64,
    pub hwp_d: f64,
    pub detector: u8,
}

struct SetSpec {
    label: &'static str,
    angles: [f64; 8],
    states: [&'static str; 4],
    detectors: [u8; 4],
}

const SCHEDULE: [SetSpec; 9] = [
    SetSpec {
        label: "I",
        angles: [0.0, 0.0, 0.0, 45.0, 0.0, 0.0, 0.0, 0.0],
        states: ["H,a", "H,b", "V,a", "V,b"],
        detectors: [1, 2, 3, 4],
    },
    SetSpec {
        label: "II",
        angles: [45.0, 22.5, 45.0, -22.5, 0.0, 0.0, 0.0, 0.0],
        states: ["+,a", "+,b", "-,a", "-,b"],
        detectors: [1, 2, 3, 4],
    },
    SetSpec {
        label: "III",
        angles: [0.0, 22.5, 0.0, -22.5, 0.0, 0.0, 0.0, 0.0],
        states: ["R,a", "R,b", "L,a", "L,b"],
        detectors: [1, 2, 3, 4],
    },
    SetSpec {
        label: "IV",
        angles: [0.0, 0.0, 0.0, 45.0, 45.0, 22.5, 45.0, 22.5],
        states: ["H,+", "H,-", "V,+", "V,-"],
        detectors: [1, 2, 4, 3],
    },
    SetSpec {
        label: "V",
        angles: [45.0, 22.5, 45.0, -22.5, 45.0, 22.5, 45.0, 22.5],
        states: ["+,+", "+,-", "-,+", "-,-"],
        detectors: [1, 2, 4, 3],
    },
    SetSpec {
        label: "VI",
        angles: [0.0, 22.5, 0.0, -22.5, 45.0, 22.5, 45.0, 22.5],
        states: ["R,+", "R,-", "L,+", "L,-"],
        detectors: [1, 2, 4, 3],
    },
    SetSpec {
        label: "VII",
        angles: [0.0, 0.0, 0.0, 45.0, 0.0, 22.5, 0.0, 22.5],
        states: ["H,r", "H,l", "V,r", "V,l"],
        detectors: [1, 2, 3, 4],
    },
    SetSpec {
        label: "VIII",
        angles: [45.0, 22.5, 45.0, -22.5, 0.0, 22.5, 0.0, 22.5],
        states: ["+,r", "+,l", "-,r", "-,l"],
        detectors: [1, 2, 4, 3],
    },
    SetSpec {
        label: "IX",
        angles: [0.0, 22.5, 0.0, -22.5, 0.0, 22.5, 0.0, 22.5],
        states: ["R,r", "R,l", "L,r", "L,l"],
        detectors: [1, 2, 4, 3],
    },
];

/// The 36-row laboratory schedule, sets I–IX with four orthogonal states
/// each. Carried as documentation data; simulations use [`pauli_settings`].
pub fn table1_schedule() -> Vec<WaveplateScheduleRow> {
    SCHEDULE
        .iter()
        .flat_map(|set| {
            set.states
                .iter()
                .zip(set.detectors)
                .map(move |(state, detector)| {
                    let a = set.angles;
                    WaveplateScheduleRow {
                        set_label: set.label.to_string(),
                        state_label: format!("|{state}>"),
                        qwp_a: a[0],
                        hwp_a: a[1],
                        qwp_b: a[2],
                        hwp_b: a[3],
                        qwp_c: a[4],
                        hwp_c: a[5],
                        qwp_d: a[6],
                        hwp_d: a[7],
                        detector,
                    }
                })
        })
        .collect()
}

/// Pauli axes `(B, M)` a schedule set measures: polarization H/V, +/−, R/L
/// and path a/b, ±, r/l map to Z, X, Y respectively.
pub fn table1_axes(set_label: &str) -> Result<[Pauli; 2]> {
    let idx = SCHEDULE
        .iter()
        .position(|s| s.label == set_label)
        .ok_or_else(|| Error::InvalidSubsystem(format!("no schedule set `{set_label}`")))?;
    const POL: [Pauli; 3] = [Pauli::Z, Pauli::X, Pauli::Y];
    Ok([POL[idx % 3], POL[idx / 3]])
}
