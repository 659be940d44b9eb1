//! Python bindings for the single-rail photonic logic simulator.
//!
//! Exposes the core types — Fock states, qubit amplitude containers, the
//! heralded gates, and the fringe experiment — as Python classes and
//! functions. All simulator errors surface as `ValueError`.
//!
//! Usage from Python:
//!
//! ```text
//! import singlerail_py as sr
//! out = sr.cs_gate(sr.QubitPair(0, 0, 0, 1))
//! assert abs(out.herald_probability - 2 / 27) < 1e-12
//! ```

use std::collections::HashMap;
use std::path::PathBuf;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use singlerail::{DetectorResolution, ResourcePolicy};

fn to_py_err(e: singlerail::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A sparse multimode photon-number state.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct FockState {
    inner: singlerail::PureState,
}

#[pymethods]
impl FockState {
    /// The vacuum on `mode_count` modes.
    #[staticmethod]
    #[pyo3(signature = (mode_count, cutoff = 6))]
    fn vacuum(mode_count: usize, cutoff: u32) -> Self {
        FockState {
            inner: singlerail::PureState::vacuum(mode_count, cutoff),
        }
    }

    /// The number state with the given photon counts per mode.
    #[staticmethod]
    #[pyo3(signature = (counts, cutoff = 6))]
    fn basis(counts: Vec<u32>, cutoff: u32) -> PyResult<Self> {
        Ok(FockState {
            inner: singlerail::PureState::basis(counts.as_slice(), cutoff).map_err(to_py_err)?,
        })
    }

    /// Amplitude of one photon-count tuple.
    fn amplitude(&self, counts: Vec<u32>) -> Complex64 {
        self.inner.amplitude(counts.as_slice())
    }

    /// Sum of squared amplitude magnitudes.
    fn norm_squared(&self) -> f64 {
        self.inner.norm_squared()
    }

    /// Squared overlap with another state, both sides normalized.
    fn fidelity(&self, other: &FockState) -> PyResult<f64> {
        self.inner.fidelity(&other.inner).map_err(to_py_err)
    }

    /// This state scaled to unit norm.
    fn normalized(&self) -> PyResult<Self> {
        Ok(FockState {
            inner: self.inner.normalized().map_err(to_py_err)?,
        })
    }

    /// All stored terms as `(counts, amplitude)` pairs.
    fn terms(&self) -> Vec<(Vec<u32>, Complex64)> {
        self.inner
            .iter()
            .map(|(occupation, amplitude)| (occupation.counts().to_vec(), *amplitude))
            .collect()
    }

    #[getter]
    fn mode_count(&self) -> usize {
        self.inner.mode_count()
    }

    #[getter]
    fn max_total(&self) -> u32 {
        self.inner.max_total()
    }

    fn __repr__(&self) -> String {
        format!(
            "FockState(modes={}, terms={}, norm_squared={:.6})",
            self.inner.mode_count(),
            self.inner.term_count(),
            self.inner.norm_squared()
        )
    }
}

/// Amplitudes of one single-rail qubit: `alpha`|0⟩ + `beta`|1⟩.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Qubit {
    inner: singlerail::QubitAmplitudes,
}

#[pymethods]
impl Qubit {
    #[new]
    fn new(alpha: Complex64, beta: Complex64) -> Self {
        Qubit {
            inner: singlerail::QubitAmplitudes::new(alpha, beta),
        }
    }

    /// Logical zero: the vacuum.
    #[staticmethod]
    fn zero() -> Self {
        Qubit {
            inner: singlerail::QubitAmplitudes::logical_zero(),
        }
    }

    /// Logical one: a single photon.
    #[staticmethod]
    fn one() -> Self {
        Qubit {
            inner: singlerail::QubitAmplitudes::logical_one(),
        }
    }

    /// (|0⟩ + |1⟩)/√2.
    #[staticmethod]
    fn plus() -> Self {
        Qubit {
            inner: singlerail::QubitAmplitudes::plus(),
        }
    }

    /// (|0⟩ − |1⟩)/√2.
    #[staticmethod]
    fn minus() -> Self {
        Qubit {
            inner: singlerail::QubitAmplitudes::minus(),
        }
    }

    #[getter]
    fn alpha(&self) -> Complex64 {
        self.inner.alpha
    }

    #[getter]
    fn beta(&self) -> Complex64 {
        self.inner.beta
    }

    fn norm_squared(&self) -> f64 {
        self.inner.norm_squared()
    }

    /// The qubit as a one-mode Fock state.
    #[pyo3(signature = (cutoff = 6))]
    fn state(&self, cutoff: u32) -> PyResult<FockState> {
        Ok(FockState {
            inner: self.inner.state(cutoff).map_err(to_py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Qubit(alpha={}, beta={})", self.inner.alpha, self.inner.beta)
    }
}

/// Amplitudes of a qubit pair in the |00⟩, |10⟩, |01⟩, |11⟩ basis.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct QubitPair {
    inner: singlerail::TwoQubitAmplitudes,
}

#[pymethods]
impl QubitPair {
    #[new]
    fn new(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> Self {
        QubitPair {
            inner: singlerail::TwoQubitAmplitudes::new(alpha, beta, gamma, delta),
        }
    }

    #[getter]
    fn alpha(&self) -> Complex64 {
        self.inner.alpha
    }

    #[getter]
    fn beta(&self) -> Complex64 {
        self.inner.beta
    }

    #[getter]
    fn gamma(&self) -> Complex64 {
        self.inner.gamma
    }

    #[getter]
    fn delta(&self) -> Complex64 {
        self.inner.delta
    }

    fn norm_squared(&self) -> f64 {
        self.inner.norm_squared()
    }

    /// The pair as a two-mode Fock state (first rail = mode 0).
    #[pyo3(signature = (cutoff = 6))]
    fn state(&self, cutoff: u32) -> PyResult<FockState> {
        Ok(FockState {
            inner: self.inner.state(cutoff).map_err(to_py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "QubitPair(alpha={}, beta={}, gamma={}, delta={})",
            self.inner.alpha, self.inner.beta, self.inner.gamma, self.inner.delta
        )
    }
}

/// A heralded gate's conditioned output and success probability.
#[pyclass]
struct GateOutcome {
    /// Normalized output state, ancilla and detector modes removed.
    #[pyo3(get)]
    state: Py<FockState>,
    /// Probability of the heralding detector pattern.
    #[pyo3(get)]
    herald_probability: f64,
}

fn gate_outcome(
    py: Python<'_>,
    state: singlerail::PureState,
    herald_probability: f64,
) -> PyResult<GateOutcome> {
    let normalized = state.normalized().map_err(to_py_err)?;
    Ok(GateOutcome {
        state: Py::new(py, FockState { inner: normalized })?,
        herald_probability,
    })
}

/// The superposition producer's figures of merit at one drive amplitude.
#[pyclass]
struct WorkingPoint {
    /// Coherent drive amplitude.
    #[pyo3(get)]
    chi: f64,
    /// Beamsplitter reflectivity balancing the output amplitudes.
    #[pyo3(get)]
    eta: f64,
    /// Production success rate.
    #[pyo3(get)]
    herald_probability: f64,
    /// Two-photon contamination of the heralded output.
    #[pyo3(get)]
    second_order_ratio: f64,
}

#[pymethods]
impl WorkingPoint {
    fn __repr__(&self) -> String {
        format!(
            "WorkingPoint(chi={}, eta={:.6}, herald_probability={:.6}, second_order_ratio={:.6})",
            self.chi, self.eta, self.herald_probability, self.second_order_ratio
        )
    }
}

/// Verdict statistics of the superposition-basis measurement.
#[pyclass]
struct Measurement {
    /// Probability of the conclusive |+⟩ verdict.
    #[pyo3(get)]
    plus: f64,
    /// Probability of the conclusive |−⟩ verdict.
    #[pyo3(get)]
    minus: f64,
    /// Probability of an inconclusive detector reading.
    #[pyo3(get)]
    inconclusive: f64,
    /// Probability of each detector reading `(first, second)`.
    #[pyo3(get)]
    outcomes: HashMap<(u32, u32), f64>,
}

#[pymethods]
impl Measurement {
    fn __repr__(&self) -> String {
        format!(
            "Measurement(plus={:.6}, minus={:.6}, inconclusive={:.6})",
            self.plus, self.minus, self.inconclusive
        )
    }
}

/// Samples and visibility of one fringe sweep.
#[pyclass]
struct Sweep {
    /// Phase grid points.
    #[pyo3(get)]
    phis: Vec<f64>,
    /// Joint probability of all conditions plus the dark output port.
    #[pyo3(get)]
    p_joint: Vec<f64>,
    /// Dark-port probability given successful conditioning.
    #[pyo3(get)]
    p_normalized: Vec<f64>,
    /// (max − min)/(max + min) over the joint probabilities.
    #[pyo3(get)]
    visibility: f64,
}

#[pymethods]
impl Sweep {
    fn __repr__(&self) -> String {
        format!(
            "Sweep(points={}, visibility={:.6})",
            self.phis.len(),
            self.visibility
        )
    }
}

/// Beamsplitter reflectivity that balances the producer's output qubit.
#[pyfunction]
fn reflectivity_for_chi(chi: f64) -> f64 {
    singlerail::reflectivity_for_chi(chi)
}

/// Producer working point for a coherent drive amplitude.
#[pyfunction]
fn working_point(chi: f64) -> PyResult<WorkingPoint> {
    let point = singlerail::working_point(chi).map_err(to_py_err)?;
    Ok(WorkingPoint {
        chi: point.chi,
        eta: point.eta,
        herald_probability: point.herald_probability,
        second_order_ratio: point.second_order_ratio,
    })
}

/// Runs the conditional superposition producer with ideal detection.
#[pyfunction]
#[pyo3(signature = (chi, cutoff = 6))]
fn produce_superposition(py: Python<'_>, chi: f64, cutoff: u32) -> PyResult<GateOutcome> {
    let output = singlerail::superposition_producer(chi, 1.0, cutoff).map_err(to_py_err)?;
    let state = output.lossless_branch().map_err(to_py_err)?.state.clone();
    gate_outcome(py, state, output.herald_probability)
}

/// Applies the heralded controlled-sign gate with ideal detection.
#[pyfunction]
#[pyo3(signature = (pair, cutoff = 6))]
fn cs_gate(py: Python<'_>, pair: &QubitPair, cutoff: u32) -> PyResult<GateOutcome> {
    let result = singlerail::cs_gate_ideal(&pair.inner, cutoff).map_err(to_py_err)?;
    gate_outcome(py, result.state, result.herald_probability)
}

/// Applies the composite Hadamard gate with exact resource qubits.
#[pyfunction]
#[pyo3(signature = (qubit, cutoff = 6))]
fn hadamard(py: Python<'_>, qubit: &Qubit, cutoff: u32) -> PyResult<GateOutcome> {
    let ensemble = singlerail::hadamard_gate(
        &qubit.inner,
        1.0,
        &ResourcePolicy::Exact,
        cutoff,
    )
    .map_err(to_py_err)?;
    let state = ensemble.branches()[0].state.clone();
    gate_outcome(py, state, ensemble.probability)
}

/// Measures a one-mode state in the superposition basis.
#[pyfunction]
#[pyo3(signature = (qubit, efficiency = 1.0))]
fn measure_superposition(qubit: &Qubit, efficiency: f64) -> PyResult<Measurement> {
    let input = qubit.inner.state(4).map_err(to_py_err)?;
    let resource = singlerail::plus_state(4).map_err(to_py_err)?;
    let result =
        singlerail::superposition_measurement(&input, &resource, efficiency).map_err(to_py_err)?;
    let outcomes = result
        .outcomes
        .iter()
        .map(|(occupation, weight)| ((occupation.count(0), occupation.count(1)), *weight))
        .collect();
    Ok(Measurement {
        plus: result.plus,
        minus: result.minus,
        inconclusive: result.inconclusive,
        outcomes,
    })
}

/// Sweeps the interference test circuit over a phase grid.
#[pyfunction]
#[pyo3(signature = (chi = -0.33714, efficiency = 1.0, points = 64, cutoff = 6, resources = "producer", out = None))]
fn sweep(
    chi: f64,
    efficiency: f64,
    points: u32,
    cutoff: u32,
    resources: &str,
    out: Option<PathBuf>,
) -> PyResult<Sweep> {
    let resource_policy = match resources {
        "exact" => singlerail::ResourceKind::Exact,
        "producer" => singlerail::ResourceKind::Producer,
        other => {
            return Err(PyValueError::new_err(format!(
                "resources must be \"exact\" or \"producer\", got \"{other}\""
            )))
        }
    };
    let config = singlerail::ExperimentConfig {
        chi,
        efficiency,
        phase_points: points,
        cutoff,
        resource_policy,
        output_path: out,
        detector_resolution: DetectorResolution::Full,
        ..singlerail::ExperimentConfig::default()
    };
    let result = singlerail::run_phase_sweep(&config).map_err(to_py_err)?;
    Ok(Sweep {
        phis: result.samples.iter().map(|s| s.phi).collect(),
        p_joint: result.samples.iter().map(|s| s.p_joint).collect(),
        p_normalized: result.samples.iter().map(|s| s.p_normalized).collect(),
        visibility: result.visibility,
    })
}

/// Heralded single-rail photonic logic, driven from Python.
#[pymodule]
fn singlerail_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<FockState>()?;
    m.add_class::<Qubit>()?;
    m.add_class::<QubitPair>()?;
    m.add_class::<GateOutcome>()?;
    m.add_class::<WorkingPoint>()?;
    m.add_class::<Measurement>()?;
    m.add_class::<Sweep>()?;
    m.add_function(wrap_pyfunction!(reflectivity_for_chi, m)?)?;
    m.add_function(wrap_pyfunction!(working_point, m)?)?;
    m.add_function(wrap_pyfunction!(produce_superposition, m)?)?;
    m.add_function(wrap_pyfunction!(cs_gate, m)?)?;
    m.add_function(wrap_pyfunction!(hadamard, m)?)?;
    m.add_function(wrap_pyfunction!(measure_superposition, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
