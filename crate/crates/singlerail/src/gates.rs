//! Heralded single-rail logic built from `transforms` + `detection`: the
//! controlled-sign gate, the conditional superposition producer, the
//! superposition-basis measurement, and the composite Hadamard gate.
//!
//! Every gate here is non-deterministic: it succeeds only when ancilla
//! detectors report a prescribed photon pattern, and the success probability
//! rides along with the conditioned state.

use std::collections::BTreeMap;

use crate::detection::{
    condition, herald_with_losses, Branch, BranchEnsemble, DetectionPattern, DetectorResolution,
    HeraldedEnsemble, HeraldedResult,
};
use crate::error::{Error, Result};
use crate::fock::{sqrt_factorial, Complex64, Occupation, PureState};
use crate::transforms::{cs_network, ModeTransform};

/// One single-rail qubit: complex amplitudes on vacuum and one photon.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitAmplitudes {
    /// Amplitude of logical 0 (vacuum).
    pub alpha: Complex64,
    /// Amplitude of logical 1 (a single photon).
    pub beta: Complex64,
}

impl QubitAmplitudes {
    /// Wraps the two logical amplitudes; normalization is the caller's
    /// business and is tracked through squared norms downstream.
    pub fn new(alpha: Complex64, beta: Complex64) -> Self {
        QubitAmplitudes { alpha, beta }
    }

    /// Logical 0.
    pub fn logical_zero() -> Self {
        QubitAmplitudes::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// Logical 1.
    pub fn logical_one() -> Self {
        QubitAmplitudes::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// The balanced superposition (|0⟩ + |1⟩)/√2.
    pub fn plus() -> Self {
        let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        QubitAmplitudes::new(half, half)
    }

    /// The balanced superposition (|0⟩ − |1⟩)/√2.
    pub fn minus() -> Self {
        let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        QubitAmplitudes::new(half, -half)
    }

    /// |α|² + |β|².
    pub fn norm_squared(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    /// The qubit as a one-mode Fock state.
    pub fn state(&self, cutoff: u32) -> Result<PureState> {
        PureState::from_amplitudes(1, cutoff, [([0u32], self.alpha), ([1u32], self.beta)])
    }
}

/// Two single-rail qubits: amplitudes on the four logical basis states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitAmplitudes {
    /// Amplitude of |00⟩ (both rails in vacuum).
    pub alpha: Complex64,
    /// Amplitude of |10⟩ (one photon on the first rail).
    pub beta: Complex64,
    /// Amplitude of |01⟩ (one photon on the second rail).
    pub gamma: Complex64,
    /// Amplitude of |11⟩ (one photon on each rail).
    pub delta: Complex64,
}

impl TwoQubitAmplitudes {
    /// Wraps the four logical amplitudes.
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> Self {
        TwoQubitAmplitudes {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    /// Product state of two one-qubit amplitude pairs (first ⊗ second).
    pub fn from_product(first: &QubitAmplitudes, second: &QubitAmplitudes) -> Self {
        TwoQubitAmplitudes::new(
            first.alpha * second.alpha,
            first.beta * second.alpha,
            first.alpha * second.beta,
            first.beta * second.beta,
        )
    }

    /// |α|² + |β|² + |γ|² + |δ|².
    pub fn norm_squared(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr() + self.gamma.norm_sqr()
            + self.delta.norm_sqr()
    }

    /// The qubit pair as a two-mode Fock state (first rail = mode 0).
    pub fn state(&self, cutoff: u32) -> Result<PureState> {
        PureState::from_amplitudes(
            2,
            cutoff,
            [
                ([0u32, 0], self.alpha),
                ([1u32, 0], self.beta),
                ([0u32, 1], self.gamma),
                ([1u32, 1], self.delta),
            ],
        )
    }
}

/// The ideal controlled-sign action on logical amplitudes: flip δ's sign.
pub fn cs_ideal(input: &TwoQubitAmplitudes) -> TwoQubitAmplitudes {
    TwoQubitAmplitudes::new(input.alpha, input.beta, input.gamma, -input.delta)
}

/// Herald pattern of the controlled-sign network: one photon in each of the
/// two ancilla modes appended after the rails.
fn cs_herald_pattern() -> DetectionPattern {
    DetectionPattern::new().with(2, 1).with(3, 1)
}

/// Feeds a two-mode rail state plus the |1,1⟩ ancilla pair through the
/// controlled-sign network.
fn cs_rails_evolved(rails: &PureState) -> Result<PureState> {
    if rails.mode_count() != 2 {
        return Err(Error::ModeMismatch {
            expected: 2,
            found: rails.mode_count(),
        });
    }
    let ancillas = PureState::basis([1, 1], rails.cutoff())?;
    cs_network().apply(&rails.tensor(&ancillas))
}

/// Runs the heralded controlled-sign step on an arbitrary two-mode state.
///
/// The two ancilla modes are appended internally and heralded on one photon
/// each at the given detector efficiency. Rail occupations whose total plus
/// the two ancilla photons exceeds the state's cutoff are truncated away;
/// keep two photons of headroom when exactness matters.
pub fn cs_on_rails(
    rails: &PureState,
    efficiency: f64,
    resolution: DetectorResolution,
) -> Result<HeraldedEnsemble> {
    let evolved = cs_rails_evolved(rails)?;
    herald_with_losses(&evolved, &cs_herald_pattern(), efficiency, resolution)
}

/// Applies the heralded controlled-sign gate to two logical qubits.
///
/// At unit efficiency the single surviving branch carries the unnormalized
/// output (α, β, γ, −δ)·√(2/27); below unit efficiency additional
/// false-herald branches appear.
pub fn cs_gate(
    input: &TwoQubitAmplitudes,
    efficiency: f64,
    cutoff: u32,
) -> Result<HeraldedEnsemble> {
    let rails = input.state(cutoff)?;
    require_headroom(&rails, 2)?;
    cs_on_rails(&rails, efficiency, DetectorResolution::Full)
}

/// Controlled-sign gate with ideal detectors, as a single heralded state.
pub fn cs_gate_ideal(input: &TwoQubitAmplitudes, cutoff: u32) -> Result<HeraldedResult> {
    let rails = input.state(cutoff)?;
    require_headroom(&rails, 2)?;
    let evolved = cs_rails_evolved(&rails)?;
    condition(&evolved, &cs_herald_pattern())
}

/// Errors unless `state.cutoff()` leaves room for `extra` more photons on
/// top of the state's own occupations.
fn require_headroom(state: &PureState, extra: u32) -> Result<()> {
    if state.cutoff() < state.max_total() + extra {
        return Err(Error::CutoffTooSmall {
            cutoff: state.cutoff(),
            needed: "rail photons plus ancilla photons must fit under the cutoff",
        });
    }
    Ok(())
}

/// Beamsplitter reflectivity that balances the producer's vacuum and
/// one-photon output amplitudes at drive amplitude `chi`.
///
/// This is the positive root of the balancing quadratic, rearranged into a
/// cancellation-free form; it tends to 1 − χ² as χ → 0 and returns exactly
/// 1 at χ = 0.
pub fn reflectivity_for_chi(chi: f64) -> f64 {
    let chi_sq = chi * chi;
    2.0 * (1.0 - chi_sq) / (1.0 - 4.0 * chi_sq + (1.0 + 8.0 * chi_sq).sqrt())
}

/// Order at which the producer's coherent drive expansion is truncated;
/// terms through |3⟩ are kept, so no relevant photon-number total ever
/// depends on the ambient cutoff.
pub const DRIVE_EXPANSION_ORDER: u32 = 3;

/// Everything the conditional superposition producer yields at one drive.
#[derive(Clone, Debug)]
pub struct ProducerOutput {
    /// Loss branches of the heralded output mode, with raw amplitudes
    /// relative to the unit-amplitude truncated drive.
    pub heralded: HeraldedEnsemble,
    /// Squared norm of the truncated coherent drive.
    pub drive_norm_squared: f64,
    /// Success rate of a production attempt: the squared magnitude of either
    /// logical amplitude of the heralded superposition — equivalently half
    /// the raw heralded weight at unit drive amplitude — which is how the
    /// quoted 1 % and 8 % production rates are booked.
    pub herald_probability: f64,
}

impl ProducerOutput {
    /// The zero-loss heralded branch, if the herald can fire at all.
    pub fn lossless_branch(&self) -> Result<&Branch> {
        self.heralded
            .branches()
            .iter()
            .find(|b| b.lost.total() == 0)
            .ok_or(Error::ZeroNorm)
    }

    /// Ratio of the m-photon to the one-photon coefficient of the lossless
    /// heralded branch, with the state written as a polynomial in the
    /// creation operator (coefficients are ket amplitudes over √(m!)).
    pub fn order_ratio(&self, order: u32) -> Result<f64> {
        let state = &self.lossless_branch()?.state;
        let one = state.amplitude([1]).norm();
        if one <= crate::EPS_ZERO {
            return Err(Error::ZeroNorm);
        }
        Ok(state.amplitude([order]).norm() / (sqrt_factorial(order) * one))
    }
}

/// Runs the conditional superposition producer at drive `chi`.
///
/// A truncated coherent state enters one beamsplitter port and a single
/// photon the other; the splitter reflectivity is
/// [`reflectivity_for_chi`], and a one-photon reading on the monitored
/// output heralds a balanced |0⟩/|1⟩ superposition (with small two- and
/// three-photon tails) on the remaining mode.
pub fn superposition_producer(
    chi: f64,
    efficiency: f64,
    cutoff: u32,
) -> Result<ProducerOutput> {
    if cutoff < DRIVE_EXPANSION_ORDER + 1 {
        return Err(Error::CutoffTooSmall {
            cutoff,
            needed: "drive expansion plus the catalysis photon must fit",
        });
    }
    let drive = PureState::coherent(chi, DRIVE_EXPANSION_ORDER);
    let drive_norm_squared = drive.norm_squared();
    let joint = drive.tensor(&PureState::basis([1], cutoff)?);
    let split = ModeTransform::beamsplitter(reflectivity_for_chi(chi))?.apply(&joint)?;
    let heralded = herald_with_losses(
        &split,
        &DetectionPattern::single(0, 1),
        efficiency,
        DetectorResolution::Full,
    )?;
    let herald_probability = heralded.probability * drive_norm_squared / 2.0;
    Ok(ProducerOutput {
        heralded,
        drive_norm_squared,
        herald_probability,
    })
}

/// The producer's operating parameters and output quality at one drive.
#[derive(Clone, Copy, Debug)]
pub struct SuperpositionWorkingPoint {
    /// Coherent drive amplitude.
    pub chi: f64,
    /// Beamsplitter reflectivity balancing the output amplitudes.
    pub eta: f64,
    /// Production success rate (see [`ProducerOutput::herald_probability`]).
    pub herald_probability: f64,
    /// Two-photon contamination: |2⟩-to-|1⟩ creation-operator coefficient
    /// ratio of the heralded output.
    pub second_order_ratio: f64,
}

/// Characterizes the producer at drive `chi` with ideal detection.
pub fn working_point(chi: f64) -> Result<SuperpositionWorkingPoint> {
    let output = superposition_producer(chi, 1.0, DRIVE_EXPANSION_ORDER + 1)?;
    Ok(SuperpositionWorkingPoint {
        chi,
        eta: reflectivity_for_chi(chi),
        herald_probability: output.herald_probability,
        second_order_ratio: output.order_ratio(2)?,
    })
}

/// Verdict of a superposition-basis measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasurementVerdict {
    /// The unknown state projected onto (|0⟩ + |1⟩)/√2.
    Plus,
    /// The unknown state projected onto (|0⟩ − |1⟩)/√2.
    Minus,
    /// Any other reading; no decision can be made.
    Inconclusive {
        /// Photons reported at the resource port.
        first: u32,
        /// Photons reported at the unknown port.
        second: u32,
    },
}

/// Maps reported counts (resource port, unknown port) to a verdict: one
/// photon in the first mode and none in the second means positive phase,
/// the reverse means negative phase.
pub fn verdict_for_counts(first: u32, second: u32) -> MeasurementVerdict {
    match (first, second) {
        (1, 0) => MeasurementVerdict::Plus,
        (0, 1) => MeasurementVerdict::Minus,
        _ => MeasurementVerdict::Inconclusive { first, second },
    }
}

/// Verdict probabilities of one superposition-basis measurement.
#[derive(Clone, Debug)]
pub struct MeasurementDistribution {
    /// Probability of the positive-phase verdict.
    pub plus: f64,
    /// Probability of the negative-phase verdict.
    pub minus: f64,
    /// Probability that no decision can be made.
    pub inconclusive: f64,
    /// Raw reported-count probabilities keyed (resource port, unknown port).
    pub outcomes: BTreeMap<Occupation, f64>,
}

/// Measures `unknown` in the superposition basis against `resource`.
///
/// The resource enters the first port of a 50:50 beamsplitter and the
/// unknown state the second; both outputs are counted at the given detector
/// efficiency and the counts are mapped through [`verdict_for_counts`].
pub fn superposition_measurement(
    unknown: &PureState,
    resource: &PureState,
    efficiency: f64,
) -> Result<MeasurementDistribution> {
    for state in [unknown, resource] {
        if state.mode_count() != 1 {
            return Err(Error::ModeMismatch {
                expected: 1,
                found: state.mode_count(),
            });
        }
    }
    if !(0.0..=1.0).contains(&efficiency) {
        return Err(Error::EfficiencyOutOfRange(efficiency));
    }
    let cutoff = unknown.cutoff().max(resource.cutoff());
    if unknown.max_total() + resource.max_total() > cutoff {
        return Err(Error::CutoffTooSmall {
            cutoff,
            needed: "combined resource and unknown photons must fit",
        });
    }
    let joint = resource.tensor(unknown);
    let norm = joint.norm_squared();
    if norm <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let mixed = ModeTransform::beamsplitter(0.5)?.apply(&joint)?;

    let mut outcomes: BTreeMap<Occupation, f64> = BTreeMap::new();
    for (occupation, amplitude) in mixed.iter() {
        let weight = amplitude.norm_sqr() / norm;
        let (present_first, present_second) = (occupation.count(0), occupation.count(1));
        for seen_first in 0..=present_first {
            let chance_first = crate::detection::thinning(present_first, seen_first, efficiency);
            if chance_first <= 0.0 {
                continue;
            }
            for seen_second in 0..=present_second {
                let chance_second =
                    crate::detection::thinning(present_second, seen_second, efficiency);
                if chance_second <= 0.0 {
                    continue;
                }
                *outcomes
                    .entry(Occupation::from([seen_first, seen_second]))
                    .or_insert(0.0) += weight * chance_first * chance_second;
            }
        }
    }

    let mut distribution = MeasurementDistribution {
        plus: 0.0,
        minus: 0.0,
        inconclusive: 0.0,
        outcomes,
    };
    for (reported, weight) in &distribution.outcomes {
        match verdict_for_counts(reported.count(0), reported.count(1)) {
            MeasurementVerdict::Plus => distribution.plus += weight,
            MeasurementVerdict::Minus => distribution.minus += weight,
            MeasurementVerdict::Inconclusive { .. } => distribution.inconclusive += weight,
        }
    }
    Ok(distribution)
}

/// Where the Hadamard gate's two resource superpositions come from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ResourcePolicy {
    /// Ideal (|0⟩ + |1⟩)/√2 resources.
    Exact,
    /// Resources heralded by the conditional producer at the given drive.
    Producer {
        /// Coherent drive amplitude of the producers.
        chi: f64,
    },
}

/// The ideal resource superposition (|0⟩ + |1⟩)/√2 as a one-mode state.
pub fn plus_state(cutoff: u32) -> Result<PureState> {
    QubitAmplitudes::plus().state(cutoff)
}

/// Applies the phase gate diag(1, e^{iφ}) to a one-mode state.
///
/// Deterministic: the only non-heralded gate in the set.
pub fn phase_gate(state: &PureState, phi: f64) -> Result<PureState> {
    if state.mode_count() != 1 {
        return Err(Error::ModeMismatch {
            expected: 1,
            found: state.mode_count(),
        });
    }
    ModeTransform::phase_shift(phi).apply(state)
}

/// Chains the controlled-sign step and the superposition measurement that
/// make up one Hadamard gate, on raw one-mode inputs.
///
/// `input` and the two resources may be unnormalized branch states; the
/// returned probability is normalized by the product of their squared
/// norms. Branch labels concatenate the CS ancilla record with the
/// measurement record: (ancilla c, ancilla d, measured rail, resource
/// port). The heralded output lives on the first resource's mode.
pub fn hadamard_on_state(
    input: &PureState,
    first_resource: &PureState,
    second_resource: &PureState,
    efficiency: f64,
    resolution: DetectorResolution,
) -> Result<HeraldedEnsemble> {
    for state in [input, first_resource, second_resource] {
        if state.mode_count() != 1 {
            return Err(Error::ModeMismatch {
                expected: 1,
                found: state.mode_count(),
            });
        }
    }
    let norm_product =
        input.norm_squared() * first_resource.norm_squared() * second_resource.norm_squared();
    if norm_product <= 0.0 {
        return Err(Error::ZeroNorm);
    }

    let cs_stage = cs_on_rails(&input.tensor(first_resource), efficiency, resolution)?;
    // After the CS herald the rails are modes (0: input, 1: resource); the
    // second resource joins as mode 2 and meets the input rail on a 50:50
    // splitter, resource port first.
    let measure_pattern = DetectionPattern::new().with(0, 0).with(2, 1);
    let mut branches = Vec::new();
    let mut total = 0.0;
    for cs_branch in cs_stage.branches() {
        let with_second = cs_branch.state.tensor(second_resource);
        let mixed = ModeTransform::beamsplitter(0.5)?
            .embed(&[2, 0], 3)?
            .apply(&with_second)?;
        let measured = herald_with_losses(&mixed, &measure_pattern, efficiency, resolution)?;
        for sb_branch in measured.branches() {
            let weight = sb_branch.state.norm_squared() / norm_product;
            if weight <= crate::EPS_PRUNE * crate::EPS_PRUNE {
                continue;
            }
            total += weight;
            branches.push(Branch {
                reported: concat_occupations(&[&cs_branch.reported, &sb_branch.reported]),
                lost: concat_occupations(&[&cs_branch.lost, &sb_branch.lost]),
                weight,
                state: sb_branch.state.clone(),
            });
        }
    }
    branches.sort_by(|a, b| (&a.reported, &a.lost).cmp(&(&b.reported, &b.lost)));
    Ok(HeraldedEnsemble {
        ensemble: BranchEnsemble {
            branches,
            states_normalized: false,
        },
        probability: total,
    })
}

/// Applies the composite heralded Hadamard to a logical qubit.
///
/// With [`ResourcePolicy::Producer`], both resources are taken from the
/// conditional producer at the shared detector efficiency, branch labels
/// gain the two producer monitor records up front, and the probability is
/// the joint chance of every conditioning detector reporting correctly for
/// normalized physical inputs.
pub fn hadamard_gate(
    q: &QubitAmplitudes,
    efficiency: f64,
    resource_source: &ResourcePolicy,
    cutoff: u32,
) -> Result<HeraldedEnsemble> {
    if cutoff < 4 {
        return Err(Error::CutoffTooSmall {
            cutoff,
            needed: "two rail photons plus two ancilla photons must fit",
        });
    }
    let input = q.state(cutoff)?;
    match resource_source {
        ResourcePolicy::Exact => {
            let resource = plus_state(cutoff)?;
            hadamard_on_state(
                &input,
                &resource,
                &resource,
                efficiency,
                DetectorResolution::Full,
            )
        }
        ResourcePolicy::Producer { chi } => {
            let produced = superposition_producer(*chi, efficiency, cutoff)?;
            let drive_sq = produced.drive_norm_squared;
            let mut branches = Vec::new();
            let mut total = 0.0;
            for first in produced.heralded.branches() {
                for second in produced.heralded.branches() {
                    let stage = hadamard_on_state(
                        &input,
                        &first.state,
                        &second.state,
                        efficiency,
                        DetectorResolution::Full,
                    )?;
                    // Rescale from branch-state norms to the physical
                    // normalization over the two coherent drives.
                    let scale = first.state.norm_squared() * second.state.norm_squared()
                        / (drive_sq * drive_sq);
                    for gate_branch in stage.branches() {
                        let weight = gate_branch.weight * scale;
                        if weight <= crate::EPS_PRUNE * crate::EPS_PRUNE {
                            continue;
                        }
                        total += weight;
                        branches.push(Branch {
                            reported: concat_occupations(&[
                                &first.reported,
                                &second.reported,
                                &gate_branch.reported,
                            ]),
                            lost: concat_occupations(&[
                                &first.lost,
                                &second.lost,
                                &gate_branch.lost,
                            ]),
                            weight,
                            state: gate_branch.state.clone(),
                        });
                    }
                }
            }
            branches.sort_by(|a, b| (&a.reported, &a.lost).cmp(&(&b.reported, &b.lost)));
            Ok(HeraldedEnsemble {
                ensemble: BranchEnsemble {
                    branches,
                    states_normalized: false,
                },
                probability: total,
            })
        }
    }
}

/// Concatenates occupation records in the given order.
fn concat_occupations(parts: &[&Occupation]) -> Occupation {
    let mut counts = Vec::new();
    for part in parts {
        counts.extend_from_slice(part.counts());
    }
    Occupation::new(counts)
}
