//! Python module `pyqactivation`.

use std::f64::consts::PI;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use qactivation::epsnet::{self, default_net};
use qactivation::measures::{self, Bipartition};
use qactivation::protocol;
use qactivation::qcore::{self, PreparationNoise};
use qactivation::tomo::{self, Functional};
use qactivation::witnesses::{self, WitnessLabel};

fn py_err(e: qactivation::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for qactivation::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn noise(visibility: Option<f64>) -> PreparationNoise {
    visibility.map_or(PreparationNoise::Ideal, PreparationNoise::Werner)
}

fn cut_for(rho: &qcore::DensityMatrix, cut: Option<&str>) -> PyResult<Bipartition> {
    match cut.map(str::trim) {
        None => Ok(if rho.n_subsystems() == 3 {
            Bipartition::ab_m()
        } else {
            Bipartition::a_b()
        }),
        Some("A|B") => Ok(Bipartition::a_b()),
        Some("AB|M") => Ok(Bipartition::ab_m()),
        Some(other) => Err(PyValueError::new_err(format!(
            "unknown cut `{other}`, expected `A|B` or `AB|M`"
        ))),
    }
}

/// Density matrix of qubits, qubit 0 most significant.
#[pyclass(
    name = "DensityMatrix",
    module = "pyqactivation",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
pub struct PyDensityMatrix {
    pub inner: qcore::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    /// Build from nested lists of real and imaginary parts.
    #[new]
    #[pyo3(signature = (real, imag=None))]
    fn new(real: Vec<Vec<f64>>, imag: Option<Vec<Vec<f64>>>) -> PyResult<Self> {
        let imag = imag.unwrap_or_else(|| real.iter().map(|r| vec![0.0; r.len()]).collect());
        let m = qcore::ComplexMatrix::from_parts(&real, &imag).py()?;
        Ok(Self {
            inner: qcore::DensityMatrix::qubits(m).py()?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: qcore::DensityMatrix::from_json(text).py()?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    #[getter]
    fn real(&self) -> Vec<Vec<f64>> {
        self.inner.matrix().real_rows()
    }

    #[getter]
    fn imag(&self) -> Vec<Vec<f64>> {
        self.inner.matrix().imag_rows()
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues()
    }

    fn partial_trace(&self, keep: Vec<usize>) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.partial_trace(&keep).py()?,
        })
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dims={:?})", self.inner.dims())
    }
}

/// Waveplate angles in radians; reduced into `[0, π/2] × [0, π/4]`.
#[pyclass(
    name = "WaveplateSetting",
    module = "pyqactivation",
    frozen,
    skip_from_py_object
)]
#[derive(Clone, Copy)]
pub struct PyWaveplateSetting {
    pub inner: protocol::WaveplateSetting,
}

#[pymethods]
impl PyWaveplateSetting {
    #[new]
    fn new(theta: f64, phi: f64) -> PyResult<Self> {
        Ok(Self {
            inner: protocol::WaveplateSetting::new(theta, phi).py()?,
        })
    }

    /// `θ = jπ/12`, `φ = kπ/12`.
    #[staticmethod]
    fn from_twelfths(j: u32, k: u32) -> PyResult<Self> {
        Ok(Self {
            inner: protocol::WaveplateSetting::from_twelfths(j, k).py()?,
        })
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.theta()
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.inner.phi()
    }

    fn bloch_vector(&self) -> (f64, f64, f64) {
        let [x, y, z] = protocol::bloch_vector(&self.inner).components();
        (x, y, z)
    }

    fn __repr__(&self) -> String {
        format!(
            "WaveplateSetting(theta={}, phi={})",
            self.inner.theta(),
            self.inner.phi()
        )
    }
}

/// `χ^(q)`, optionally mixed with white noise at the given visibility.
#[pyfunction]
#[pyo3(signature = (q, visibility=None))]
fn chi_q(q: f64, visibility: Option<f64>) -> PyResult<PyDensityMatrix> {
    Ok(PyDensityMatrix {
        inner: noise(visibility).chi_q(q).py()?,
    })
}

#[pyfunction]
fn premeasurement(
    chi: &PyDensityMatrix,
    setting: &PyWaveplateSetting,
) -> PyResult<PyDensityMatrix> {
    Ok(PyDensityMatrix {
        inner: protocol::premeasurement(&chi.inner, &setting.inner).py()?,
    })
}

/// Cut defaults to `AB|M` for three qubits and `A|B` for two.
#[pyfunction]
#[pyo3(signature = (rho, cut=None))]
fn negativity(rho: &PyDensityMatrix, cut: Option<&str>) -> PyResult<f64> {
    measures::negativity(&rho.inner, &cut_for(&rho.inner, cut)?).py()
}

#[pyfunction]
fn negativity_theory(q: f64, setting: &PyWaveplateSetting) -> PyResult<f64> {
    measures::negativity_theory(q, &setting.inner).py()
}

#[pyfunction]
fn discord_bell_diagonal(chi: &PyDensityMatrix) -> PyResult<f64> {
    measures::discord_bell_diagonal(&chi.inner).py()
}

#[pyfunction]
#[pyo3(signature = (chi, seed=0))]
fn discord_numeric(py: Python<'_>, chi: &PyDensityMatrix, seed: u64) -> PyResult<f64> {
    let chi = chi.inner.clone();
    py.detach(move || measures::discord_numeric(&chi, seed))
        .py()
}

/// Returns `(value, setting)` of the least entangling premeasurement.
#[pyfunction]
fn negativity_of_quantumness(chi: &PyDensityMatrix) -> PyResult<(f64, Option<PyWaveplateSetting>)> {
    let r = measures::negativity_of_quantumness(&chi.inner).py()?;
    Ok((
        r.value,
        r.settings_used.map(|inner| PyWaveplateSetting { inner }),
    ))
}

/// `Tr[W ρ]` for `label` in {"W2", "W3"}.
#[pyfunction]
fn witness_expect(label: &str, rho: &PyDensityMatrix) -> PyResult<f64> {
    let label = match label {
        "W2" => WitnessLabel::W2,
        "W3" => WitnessLabel::W3,
        other => return Err(PyValueError::new_err(format!("unknown witness `{other}`"))),
    };
    witnesses::expect(&witnesses::witness(label), &rho.inner).py()
}

#[pyfunction]
fn cap_radius(epsilon: f64) -> PyResult<f64> {
    epsnet::cap_radius(epsilon).py()
}

/// Covering and packing checks of the default net.
#[pyfunction]
#[pyo3(signature = (epsilon=0.5, resolution=epsnet::DEFAULT_COVERING_RESOLUTION))]
fn verify_net<'py>(
    py: Python<'py>,
    epsilon: f64,
    resolution: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let net = default_net();
    let cover = epsnet::verify_covering(&net, epsilon, resolution).py()?;
    let pack = epsnet::verify_packing(&net, epsilon).py()?;
    let d = PyDict::new(py);
    d.set_item("covered", cover.covered)?;
    d.set_item("worst_gap", cover.worst_gap)?;
    d.set_item("packed", pack.packed)?;
    d.set_item("min_distance", pack.min_distance)?;
    d.set_item("distinct_bases", pack.distinct_bases)?;
    Ok(d)
}

/// Certified lower bound over the sphere for `χ^(q)` with the default net.
#[pyfunction]
#[pyo3(signature = (q, grid_step=PI / 180.0, visibility=None))]
fn sphere_scan<'py>(
    py: Python<'py>,
    q: f64,
    grid_step: f64,
    visibility: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let scan = py
        .detach(|| epsnet::sphere_scan_with(q, &default_net(), grid_step, noise(visibility)))
        .py()?;
    let d = PyDict::new(py);
    d.set_item("min_low", scan.min_low)?;
    d.set_item("argmin", PyWaveplateSetting { inner: scan.argmin })?;
    d.set_item("certified", scan.certified())?;
    d.set_item("points", scan.rows.len())?;
    Ok(d)
}

/// Simulated counts and reconstruction of `rho`; returns the estimate.
#[pyfunction]
#[pyo3(signature = (rho, exposure=1e4, seed=0))]
fn tomography(rho: &PyDensityMatrix, exposure: f64, seed: u64) -> PyResult<PyDensityMatrix> {
    let settings = tomo::pauli_settings(rho.inner.n_subsystems()).py()?;
    let counts = tomo::simulate_counts(&rho.inner, &settings, exposure, seed).py()?;
    Ok(PyDensityMatrix {
        inner: tomo::reconstruct(&counts).py()?,
    })
}

#[pyfunction]
fn fidelity(rho: &PyDensityMatrix, sigma: &PyDensityMatrix) -> PyResult<f64> {
    qcore::fidelity(&rho.inner, &sigma.inner).py()
}

/// Monte Carlo mean and standard deviation of a functional of reconstructed
/// states: "negativity", "witness", "discord" or "fidelity".
#[pyfunction]
#[pyo3(signature = (rho, functional, exposure=1e4, reps=100, seed=0))]
fn mc_errorbar(
    py: Python<'_>,
    rho: &PyDensityMatrix,
    functional: &str,
    exposure: f64,
    reps: usize,
    seed: u64,
) -> PyResult<(f64, f64)> {
    let functional = match functional {
        "negativity" => Functional::Negativity,
        "witness" => Functional::WitnessExpect,
        "discord" => Functional::Discord,
        "fidelity" => Functional::Fidelity,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown functional `{other}`"
            )))
        }
    };
    let rho = rho.inner.clone();
    let s = py
        .detach(move || tomo::mc_errorbar(&rho, exposure, reps, seed, functional))
        .py()?;
    Ok((s.mean, s.std))
}

#[pymodule]
pub fn pyqactivation(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyWaveplateSetting>()?;
    m.add_function(wrap_pyfunction!(chi_q, m)?)?;
    m.add_function(wrap_pyfunction!(premeasurement, m)?)?;
    m.add_function(wrap_pyfunction!(negativity, m)?)?;
    m.add_function(wrap_pyfunction!(negativity_theory, m)?)?;
    m.add_function(wrap_pyfunction!(discord_bell_diagonal, m)?)?;
    m.add_function(wrap_pyfunction!(discord_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(negativity_of_quantumness, m)?)?;
    m.add_function(wrap_pyfunction!(witness_expect, m)?)?;
    m.add_function(wrap_pyfunction!(cap_radius, m)?)?;
    m.add_function(wrap_pyfunction!(verify_net, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_scan, m)?)?;
    m.add_function(wrap_pyfunction!(tomography, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(mc_errorbar, m)?)?;
    Ok(())
}
