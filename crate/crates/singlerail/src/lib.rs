//! Simulator for heralded single-rail photonic logic.
//!
//! Qubits live on one optical mode each: vacuum encodes logical 0 and a
//! single photon encodes logical 1. Gates are built from passive linear
//! optics plus photon counting, so they succeed only when ancilla detectors
//! fire with the right pattern; every operation here reports its herald
//! probability alongside the conditioned state.
//!
//! The crate is layered bottom-up:
//!
//! - [`fock`] — sparse multimode Fock states with a global photon-number
//!   cutoff, tensor products, inner products, and pruning.
//! - [`transforms`] — unitary mode transforms (beamsplitters, phase
//!   shifts, embeddings) applied through creation-operator substitution,
//!   plus the four-mode network behind the controlled-sign gate.
//! - [`detection`] — projective photon counting and lossy detectors
//!   modelled as binomial thinning, with branch ensembles that keep the
//!   unrecorded loss pattern explicit.
//! - [`gates`] — the controlled-sign gate, the conditional superposition
//!   producer driven by a weak coherent state, superposition-basis
//!   measurement, and the composite Hadamard built from all of the above.
//! - [`experiment`] — the phase-sweep test circuit that interferes a
//!   Hadamard pair around a phase shift and records fringe visibility as
//!   detector efficiency drops.
//! - [`verify`] — an executable checklist of the headline numbers, shared
//!   by the CLI and the acceptance tests.
//!
//! States are kept unnormalized wherever a norm carries probability
//! meaning; call sites decide when to renormalize. All arithmetic is
//! complex `f64` via [`num_complex::Complex64`].

pub mod detection;
pub mod error;
pub mod experiment;
pub mod fock;
pub mod gates;
pub mod transforms;
pub mod verify;

pub use detection::{
    condition, herald_with_detector_efficiencies, herald_with_losses, lossy_detect,
    outcome_distribution, reading_distribution, Branch, BranchEnsemble, DetectionPattern,
    DetectorResolution, HeraldedEnsemble, HeraldedResult,
};
pub use error::{Error, Result};
pub use experiment::{
    run_phase_sweep, run_test_circuit, visibility, ExperimentConfig, PhaseSample, ResourceKind,
    SweepResult,
};
pub use fock::{Complex64, Occupation, PureState};
pub use gates::{
    cs_gate, cs_gate_ideal, cs_ideal, cs_on_rails, hadamard_gate, hadamard_on_state, phase_gate,
    plus_state, reflectivity_for_chi, superposition_measurement, superposition_producer,
    verdict_for_counts, working_point, MeasurementDistribution, MeasurementVerdict,
    ProducerOutput, QubitAmplitudes, ResourcePolicy, SuperpositionWorkingPoint,
    TwoQubitAmplitudes,
};
pub use transforms::{cs_network, cs_network_cascade, ModeTransform};
pub use verify::{resolution_convention_difference, run_all_checks, CheckReport};

/// Amplitudes at or below this magnitude are dropped when states are pruned.
pub const EPS_PRUNE: f64 = 1e-14;

/// Tolerance for numerical identity checks (unitarity, cross-validation).
pub const EPS_NUM: f64 = 1e-10;

/// Magnitudes below this are treated as zero when classifying outcomes.
pub const EPS_ZERO: f64 = 1e-12;
