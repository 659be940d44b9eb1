//! Photon counting: ideal heralds, measurement statistics, and an
//! inefficiency model that tracks which photons escaped detection.
//!
//! Mixtures are never density matrices here. Every mixed state arises from a
//! counting event, so it is represented exactly as a [`BranchEnsemble`]: a
//! list of pure branches labelled by what the detectors reported and how
//! many photons each monitored mode lost. Branches with different loss
//! records leave orthogonal environment states behind, so they never
//! interfere and downstream probabilities add across branches.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{binomial, Complex64, Occupation, PureState};
use crate::EPS_PRUNE;

/// Exact detector readings demanded on a set of modes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DetectionPattern {
    readings: BTreeMap<usize, u32>,
}

impl DetectionPattern {
    /// Creates an empty pattern; add readings with [`DetectionPattern::with`].
    pub fn new() -> Self {
        DetectionPattern::default()
    }

    /// Returns the pattern extended so that `mode` must read `count` photons.
    ///
    /// Adding a mode twice keeps the later reading.
    pub fn with(mut self, mode: usize, count: u32) -> Self {
        self.readings.insert(mode, count);
        self
    }

    /// Single-mode pattern demanding `count` photons on `mode`.
    pub fn single(mode: usize, count: u32) -> Self {
        DetectionPattern::new().with(mode, count)
    }

    /// Number of constrained modes.
    pub fn len(&self) -> usize {
        self.readings.len()
    }

    /// True when no modes are constrained.
    pub fn is_empty(&self) -> bool {
        self.readings.is_empty()
    }

    /// Constrained modes in ascending order.
    pub fn modes(&self) -> Vec<usize> {
        self.readings.keys().copied().collect()
    }

    /// Demanded reading on `mode`, if constrained.
    pub fn reading(&self, mode: usize) -> Option<u32> {
        self.readings.get(&mode).copied()
    }

    /// Iterates over `(mode, reading)` pairs in ascending mode order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.readings.iter().map(|(&mode, &count)| (mode, count))
    }

    fn validate_for(&self, state: &PureState) -> Result<()> {
        if self.readings.is_empty() {
            return Err(Error::EmptyPattern);
        }
        for &mode in self.readings.keys() {
            if mode >= state.mode_count() {
                return Err(Error::ModeOutOfRange {
                    mode,
                    mode_count: state.mode_count(),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for DetectionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (mode, count)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{mode}: {count}")?;
        }
        write!(f, "}}")
    }
}

/// How finely a photon counter distinguishes photon numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectorResolution {
    /// Detected counts are reported exactly.
    #[default]
    Full,
    /// Detected counts of two or more all report as a reading of two.
    CappedAtTwo,
}

impl fmt::Display for DetectorResolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DetectorResolution::Full => write!(f, "full"),
            DetectorResolution::CappedAtTwo => write!(f, "capped-at-two"),
        }
    }
}

/// One pure branch of a counting event.
#[derive(Clone, Debug)]
pub struct Branch {
    /// Counts the detectors reported, over the measured modes in ascending
    /// mode order.
    pub reported: Occupation,
    /// Photons absorbed without being seen, in the same mode order.
    pub lost: Occupation,
    /// Probability of this branch relative to a normalized input.
    pub weight: f64,
    /// Conditional state on the remaining modes.
    pub state: PureState,
}

/// Labelled pure branches of a counting event.
#[derive(Clone, Debug)]
pub struct BranchEnsemble {
    /// Branches ordered by (reported, lost) label.
    pub branches: Vec<Branch>,
    /// True when every branch state is unit-norm; false when branch states
    /// carry raw conditioned amplitudes (squared norm = weight × input norm²).
    pub states_normalized: bool,
}

impl BranchEnsemble {
    /// Sum of branch weights.
    pub fn total_weight(&self) -> f64 {
        self.branches.iter().map(|b| b.weight).sum()
    }

    /// Weights grouped by reported counts — the reporting-boundary view that
    /// merges loss sectors a real detector cannot distinguish.
    pub fn reported_weights(&self) -> BTreeMap<Occupation, f64> {
        let mut grouped = BTreeMap::new();
        for branch in &self.branches {
            *grouped.entry(branch.reported.clone()).or_insert(0.0) += branch.weight;
        }
        grouped
    }
}

/// Unnormalized projection left by an ideal herald, with its probability.
#[derive(Clone, Debug)]
pub struct HeraldedResult {
    /// Post-herald state on the remaining modes, not renormalized.
    pub state: PureState,
    /// Probability of observing the herald pattern.
    pub herald_probability: f64,
}

/// Conditioned sub-ensemble kept by a herald, with the reading probability.
#[derive(Clone, Debug)]
pub struct HeraldedEnsemble {
    /// Loss branches compatible with the demanded reading (raw states).
    pub ensemble: BranchEnsemble,
    /// Probability of the reading, summed over branches; not normalized to
    /// any upstream conditioning.
    pub probability: f64,
}

impl HeraldedEnsemble {
    /// The compatible branches, ordered by (reported, lost) label.
    pub fn branches(&self) -> &[Branch] {
        &self.ensemble.branches
    }
}

/// Projects onto an exact photon-count pattern seen by ideal detectors.
///
/// The constrained modes are removed from the returned state, which keeps
/// the raw projection amplitudes; `herald_probability` is the squared norm
/// of the projection relative to the squared norm of the input. A pattern
/// no term matches yields a zero state with probability zero.
pub fn condition(state: &PureState, pattern: &DetectionPattern) -> Result<HeraldedResult> {
    pattern.validate_for(state)?;
    let input_norm = state.norm_squared();
    if input_norm <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let removed = pattern.modes();
    let mut kept = Vec::new();
    for (occupation, amplitude) in state.iter() {
        if pattern
            .iter()
            .all(|(mode, reading)| occupation.count(mode) == reading)
        {
            kept.push((occupation.without_modes(&removed), *amplitude));
        }
    }
    let projected =
        PureState::from_amplitudes(state.mode_count() - removed.len(), state.cutoff(), kept)?;
    let herald_probability = projected.norm_squared() / input_norm;
    Ok(HeraldedResult {
        state: projected,
        herald_probability,
    })
}

/// Born-rule measurement of the photon counts on the chosen modes.
///
/// Returns one branch per distinct count tuple with nonzero probability;
/// `reported` lists counts in the order the modes were given, `lost` is all
/// zeros, and each branch state is the normalized conditional remainder on
/// the unmeasured modes. Weights sum to one for any input.
pub fn outcome_distribution(state: &PureState, modes: &[usize]) -> Result<BranchEnsemble> {
    if modes.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let mut seen = std::collections::BTreeSet::new();
    for &mode in modes {
        if mode >= state.mode_count() {
            return Err(Error::ModeOutOfRange {
                mode,
                mode_count: state.mode_count(),
            });
        }
        if !seen.insert(mode) {
            return Err(Error::DuplicateTargetMode(mode));
        }
    }
    let input_norm = state.norm_squared();
    if input_norm <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let removed: Vec<usize> = seen.into_iter().collect();
    let mut groups: BTreeMap<Occupation, Vec<(Occupation, Complex64)>> = BTreeMap::new();
    for (occupation, amplitude) in state.iter() {
        let key = Occupation::new(modes.iter().map(|&m| occupation.count(m)).collect());
        groups
            .entry(key)
            .or_default()
            .push((occupation.without_modes(&removed), *amplitude));
    }
    let remaining = state.mode_count() - removed.len();
    let mut branches = Vec::new();
    for (reported, entries) in groups {
        let raw = PureState::from_amplitudes(remaining, state.cutoff(), entries)?;
        let weight = raw.norm_squared() / input_norm;
        if weight <= EPS_PRUNE * EPS_PRUNE {
            continue;
        }
        let lost = Occupation::new(vec![0; reported.mode_count()]);
        branches.push(Branch {
            reported,
            lost,
            weight,
            state: raw.normalized()?,
        });
    }
    Ok(BranchEnsemble {
        branches,
        states_normalized: true,
    })
}

/// Probability that `seen` of `present` photons register on a detector
/// that sees each photon independently with probability `efficiency`.
pub(crate) fn thinning(present: u32, seen: u32, efficiency: f64) -> f64 {
    if seen > present {
        return 0.0;
    }
    binomial(present, seen)
        * efficiency.powi(seen as i32)
        * (1.0 - efficiency).powi((present - seen) as i32)
}

/// Counts one mode through a detector of the given efficiency.
///
/// Each photon present is independently seen with probability `efficiency`.
/// The result has one branch per (reported, lost) pair with nonzero
/// probability, raw conditional states, and weights that sum to one.
/// Branches that report the same count but lost different photon numbers
/// have distinct conditional states, so they stay separate; use
/// [`BranchEnsemble::reported_weights`] for the detector's-eye view.
pub fn lossy_detect(state: &PureState, mode: usize, efficiency: f64) -> Result<BranchEnsemble> {
    if mode >= state.mode_count() {
        return Err(Error::ModeOutOfRange {
            mode,
            mode_count: state.mode_count(),
        });
    }
    if !(0.0..=1.0).contains(&efficiency) {
        return Err(Error::EfficiencyOutOfRange(efficiency));
    }
    let input_norm = state.norm_squared();
    if input_norm <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let mut groups: BTreeMap<(u32, u32), Vec<(Occupation, Complex64)>> = BTreeMap::new();
    for (occupation, amplitude) in state.iter() {
        let present = occupation.count(mode);
        for detected in 0..=present {
            let chance = thinning(present, detected, efficiency);
            if chance > 0.0 {
                groups
                    .entry((detected, present - detected))
                    .or_default()
                    .push((occupation.without_modes(&[mode]), amplitude * chance.sqrt()));
            }
        }
    }
    let remaining = state.mode_count() - 1;
    let mut branches = Vec::new();
    for ((detected, missed), entries) in groups {
        let branch_state = PureState::from_amplitudes(remaining, state.cutoff(), entries)?;
        let weight = branch_state.norm_squared() / input_norm;
        if weight <= EPS_PRUNE * EPS_PRUNE {
            continue;
        }
        branches.push(Branch {
            reported: Occupation::new(vec![detected]),
            lost: Occupation::new(vec![missed]),
            weight,
            state: branch_state,
        });
    }
    Ok(BranchEnsemble {
        branches,
        states_normalized: false,
    })
}

/// Conditions on detector readings taken with one shared efficiency.
///
/// See [`herald_with_detector_efficiencies`]; every constrained mode uses
/// `efficiency`.
pub fn herald_with_losses(
    state: &PureState,
    pattern: &DetectionPattern,
    efficiency: f64,
    resolution: DetectorResolution,
) -> Result<HeraldedEnsemble> {
    let efficiencies = pattern.modes().into_iter().map(|m| (m, efficiency)).collect();
    herald_with_detector_efficiencies(state, pattern, &efficiencies, resolution)
}

/// Conditions on detector readings with a per-detector efficiency map.
///
/// A reading of `k` on a mode is compatible with any occupation `k + j`
/// that lost `j` photons there; each distinct loss record across the
/// pattern's modes forms its own raw-state [`Branch`]. The returned
/// probability is the joint chance of the whole reading, not normalized to
/// any upstream conditioning. At unit efficiency this reduces to
/// [`condition`] with a single lossless branch. Under
/// [`DetectorResolution::CappedAtTwo`], a demanded reading of two accepts
/// any detected count of two or more.
pub fn herald_with_detector_efficiencies(
    state: &PureState,
    pattern: &DetectionPattern,
    efficiencies: &BTreeMap<usize, f64>,
    resolution: DetectorResolution,
) -> Result<HeraldedEnsemble> {
    pattern.validate_for(state)?;
    for (mode, _) in pattern.iter() {
        let efficiency = efficiencies
            .get(&mode)
            .ok_or_else(|| Error::InvalidConfig(format!("no efficiency given for mode {mode}")))?;
        if !(0.0..=1.0).contains(efficiency) {
            return Err(Error::EfficiencyOutOfRange(*efficiency));
        }
    }
    let input_norm = state.norm_squared();
    if input_norm <= 0.0 {
        return Err(Error::ZeroNorm);
    }

    let removed = pattern.modes();
    let mut groups: BTreeMap<(Occupation, Occupation), Vec<(Occupation, Complex64)>> =
        BTreeMap::new();
    for (occupation, amplitude) in state.iter() {
        // Options per constrained mode: (detected, lost, amplitude factor).
        let mut per_mode: Vec<Vec<(u32, u32, f64)>> = Vec::with_capacity(removed.len());
        let mut feasible = true;
        for (mode, reading) in pattern.iter() {
            let efficiency = efficiencies[&mode];
            let present = occupation.count(mode);
            let candidates: Vec<u32> = match resolution {
                DetectorResolution::CappedAtTwo if reading >= 2 => (2..=present).collect(),
                _ => vec![reading],
            };
            let options: Vec<(u32, u32, f64)> = candidates
                .into_iter()
                .filter(|&detected| detected <= present)
                .filter_map(|detected| {
                    let chance = thinning(present, detected, efficiency);
                    (chance > 0.0).then_some((detected, present - detected, chance.sqrt()))
                })
                .collect();
            if options.is_empty() {
                feasible = false;
                break;
            }
            per_mode.push(options);
        }
        if !feasible {
            continue;
        }
        let reduced = occupation.without_modes(&removed);
        expand_loss_options(
            &per_mode,
            0,
            &mut Vec::new(),
            &mut Vec::new(),
            1.0,
            &reduced,
            *amplitude,
            &mut groups,
        );
    }

    let remaining = state.mode_count() - removed.len();
    let mut branches = Vec::new();
    let mut total = 0.0;
    for ((reported, lost), entries) in groups {
        let branch_state = PureState::from_amplitudes(remaining, state.cutoff(), entries)?;
        let weight = branch_state.norm_squared() / input_norm;
        if weight <= EPS_PRUNE * EPS_PRUNE {
            continue;
        }
        total += weight;
        branches.push(Branch {
            reported,
            lost,
            weight,
            state: branch_state,
        });
    }
    Ok(HeraldedEnsemble {
        ensemble: BranchEnsemble {
            branches,
            states_normalized: false,
        },
        probability: total,
    })
}

/// Walks the cartesian product of per-mode loss options, accumulating each
/// combination's amplitude under its (reported, lost) record.
#[allow(clippy::too_many_arguments)]
fn expand_loss_options(
    per_mode: &[Vec<(u32, u32, f64)>],
    slot: usize,
    detected: &mut Vec<u32>,
    lost: &mut Vec<u32>,
    factor: f64,
    reduced: &Occupation,
    amplitude: Complex64,
    groups: &mut BTreeMap<(Occupation, Occupation), Vec<(Occupation, Complex64)>>,
) {
    if slot == per_mode.len() {
        groups
            .entry((
                Occupation::new(detected.clone()),
                Occupation::new(lost.clone()),
            ))
            .or_default()
            .push((reduced.clone(), amplitude * factor));
        return;
    }
    for &(seen, missed, scale) in &per_mode[slot] {
        detected.push(seen);
        lost.push(missed);
        expand_loss_options(
            per_mode,
            slot + 1,
            detected,
            lost,
            factor * scale,
            reduced,
            amplitude,
            groups,
        );
        detected.pop();
        lost.pop();
    }
}

/// Distribution of one inefficient detector's readings on a single mode.
pub fn reading_distribution(
    state: &PureState,
    mode: usize,
    efficiency: f64,
) -> Result<BTreeMap<u32, f64>> {
    let ensemble = lossy_detect(state, mode, efficiency)?;
    Ok(ensemble
        .reported_weights()
        .into_iter()
        .map(|(reported, weight)| (reported.count(0), weight))
        .collect())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_1_SQRT_2;

    use approx::assert_relative_eq;

    use super::*;
    use crate::transforms::ModeTransform;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn weight_for(ensemble: &BranchEnsemble, reported: impl Into<Occupation>) -> f64 {
        ensemble
            .reported_weights()
            .get(&reported.into())
            .copied()
            .unwrap_or(0.0)
    }

    #[test]
    fn conditioning_projects_and_reports_probability() {
        let state = PureState::from_amplitudes(
            2,
            2,
            [
                ([1u32, 0], c(FRAC_1_SQRT_2, 0.0)),
                ([0u32, 1], c(FRAC_1_SQRT_2, 0.0)),
            ],
        )
        .unwrap();
        let result = condition(&state, &DetectionPattern::single(0, 1)).unwrap();
        assert_relative_eq!(result.herald_probability, 0.5, max_relative = 1e-15);
        assert_eq!(result.state.mode_count(), 1);
        assert_relative_eq!(
            result.state.amplitude([0]).re,
            FRAC_1_SQRT_2,
            max_relative = 1e-15
        );
    }

    #[test]
    fn conditioning_on_every_mode_leaves_a_scalar() {
        let state = PureState::from_amplitudes(
            2,
            2,
            [([1u32, 1], c(0.6, 0.0)), ([0u32, 0], c(0.8, 0.0))],
        )
        .unwrap();
        let pattern = DetectionPattern::new().with(0, 1).with(1, 1);
        let result = condition(&state, &pattern).unwrap();
        assert_eq!(result.state.mode_count(), 0);
        assert_relative_eq!(result.herald_probability, 0.36, max_relative = 1e-15);
        assert_relative_eq!(
            result.state.amplitude(Occupation::new(Vec::new())).re,
            0.6,
            max_relative = 1e-15
        );
    }

    #[test]
    fn conditioning_validates_pattern() {
        let state = PureState::vacuum(2, 2);
        assert!(matches!(
            condition(&state, &DetectionPattern::new()),
            Err(Error::EmptyPattern)
        ));
        assert!(matches!(
            condition(&state, &DetectionPattern::single(2, 1)),
            Err(Error::ModeOutOfRange { mode: 2, .. })
        ));
    }

    #[test]
    fn impossible_reading_has_zero_probability() {
        let state = PureState::vacuum(2, 2);
        let result = condition(&state, &DetectionPattern::single(0, 1)).unwrap();
        assert_eq!(result.herald_probability, 0.0);
        assert_eq!(result.state.term_count(), 0);
    }

    #[test]
    fn outcome_distribution_matches_interfered_superposition_example() {
        // Two-mode state ½|00⟩ + √½|10⟩ + √⅛(|20⟩ − |02⟩): photon counting
        // must give {(1,0): ½, (0,0): ¼, (2,0): ⅛, (0,2): ⅛}.
        let state = PureState::from_amplitudes(
            2,
            2,
            [
                ([0u32, 0], c(0.5, 0.0)),
                ([1u32, 0], c(FRAC_1_SQRT_2, 0.0)),
                ([2u32, 0], c(0.125f64.sqrt(), 0.0)),
                ([0u32, 2], c(-(0.125f64.sqrt()), 0.0)),
            ],
        )
        .unwrap();
        let ensemble = outcome_distribution(&state, &[0, 1]).unwrap();
        assert!(ensemble.states_normalized);
        assert_eq!(ensemble.branches.len(), 4);
        assert_relative_eq!(weight_for(&ensemble, [1, 0]), 0.5, max_relative = 1e-14);
        assert_relative_eq!(weight_for(&ensemble, [0, 0]), 0.25, max_relative = 1e-14);
        assert_relative_eq!(weight_for(&ensemble, [2, 0]), 0.125, max_relative = 1e-14);
        assert_relative_eq!(weight_for(&ensemble, [0, 2]), 0.125, max_relative = 1e-14);
        assert_relative_eq!(ensemble.total_weight(), 1.0, max_relative = 1e-14);
        for branch in &ensemble.branches {
            assert_eq!(branch.state.mode_count(), 0);
            assert_relative_eq!(branch.state.norm_squared(), 1.0, max_relative = 1e-14);
            assert_eq!(branch.lost, Occupation::from([0, 0]));
        }
    }

    #[test]
    fn outcome_distribution_sees_photon_bunching() {
        // A 50:50 splitter on |11⟩ never yields coincident counts.
        let splitter = ModeTransform::beamsplitter(0.5).unwrap();
        let bunched = splitter.apply(&PureState::basis([1, 1], 2).unwrap()).unwrap();
        let ensemble = outcome_distribution(&bunched, &[0, 1]).unwrap();
        assert_eq!(ensemble.branches.len(), 2);
        assert_relative_eq!(weight_for(&ensemble, [2, 0]), 0.5, max_relative = 1e-14);
        assert_relative_eq!(weight_for(&ensemble, [0, 2]), 0.5, max_relative = 1e-14);
        assert_eq!(weight_for(&ensemble, [1, 1]), 0.0);
    }

    #[test]
    fn outcome_distribution_respects_requested_mode_order() {
        let state = PureState::basis([2, 1], 3).unwrap();
        let ensemble = outcome_distribution(&state, &[1, 0]).unwrap();
        assert_relative_eq!(weight_for(&ensemble, [1, 2]), 1.0, max_relative = 1e-15);
        assert!(matches!(
            outcome_distribution(&state, &[0, 0]),
            Err(Error::DuplicateTargetMode(0))
        ));
    }

    #[test]
    fn lossy_detect_blind_and_sharp_limits() {
        let one = PureState::basis([1], 2).unwrap();
        let blind = lossy_detect(&one, 0, 0.0).unwrap();
        assert_eq!(blind.branches.len(), 1);
        assert_eq!(blind.branches[0].reported, Occupation::from([0]));
        assert_eq!(blind.branches[0].lost, Occupation::from([1]));
        assert_relative_eq!(blind.branches[0].weight, 1.0, max_relative = 1e-15);

        let sharp = lossy_detect(&one, 0, 1.0).unwrap();
        assert_eq!(sharp.branches.len(), 1);
        assert_eq!(sharp.branches[0].reported, Occupation::from([1]));
        assert_eq!(sharp.branches[0].lost, Occupation::from([0]));
        assert_relative_eq!(sharp.branches[0].weight, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn lossy_detect_thins_binomially() {
        let one = PureState::basis([1], 2).unwrap();
        let readings = reading_distribution(&one, 0, 0.9).unwrap();
        assert_relative_eq!(readings[&1], 0.9, max_relative = 1e-15);
        assert_relative_eq!(readings[&0], 0.1, max_relative = 1e-12);

        let two = PureState::basis([2], 2).unwrap();
        let readings = reading_distribution(&two, 0, 0.8).unwrap();
        assert_relative_eq!(readings[&2], 0.64, max_relative = 1e-15);
        assert_relative_eq!(readings[&1], 0.32, max_relative = 1e-14);
        assert_relative_eq!(readings[&0], 0.04, max_relative = 1e-13);
    }

    #[test]
    fn lossy_detect_at_unit_efficiency_matches_outcome_distribution() {
        let state = PureState::from_amplitudes(
            2,
            3,
            [
                ([0u32, 1], c(0.6, 0.0)),
                ([1u32, 0], c(0.0, 0.48)),
                ([2u32, 1], c(0.64, 0.0)),
            ],
        )
        .unwrap();
        let lossless = lossy_detect(&state, 0, 1.0).unwrap();
        assert!(!lossless.states_normalized);
        let ideal = outcome_distribution(&state, &[0]).unwrap();
        assert_eq!(lossless.branches.len(), ideal.branches.len());
        for (lossy, exact) in lossless.branches.iter().zip(&ideal.branches) {
            assert_eq!(lossy.reported, exact.reported);
            assert_eq!(lossy.lost, Occupation::from([0]));
            assert_relative_eq!(lossy.weight, exact.weight, max_relative = 1e-14);
            assert_relative_eq!(
                lossy.state.fidelity(&exact.state).unwrap(),
                1.0,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn lossy_detect_books_every_photon() {
        let state = PureState::from_amplitudes(
            1,
            3,
            [
                ([1u32], c(0.5, 0.0)),
                ([2u32], c(0.5, 0.0)),
                ([3u32], c(FRAC_1_SQRT_2, 0.0)),
            ],
        )
        .unwrap();
        let ensemble = lossy_detect(&state, 0, 0.6).unwrap();
        assert_relative_eq!(ensemble.total_weight(), 1.0, max_relative = 1e-13);
        // Every branch splits one definite photon number into seen + unseen,
        // so the branch state is the pure remainder of that one component.
        for branch in &ensemble.branches {
            assert_eq!(branch.state.mode_count(), 0);
            let total = branch.reported.count(0) + branch.lost.count(0);
            assert!((1..=3).contains(&total));
        }
    }

    #[test]
    fn perfect_efficiency_reproduces_ideal_conditioning() {
        let state = PureState::from_amplitudes(
            2,
            3,
            [
                ([1u32, 0], c(0.6, 0.0)),
                ([1u32, 2], c(0.0, 0.48)),
                ([0u32, 1], c(0.64, 0.0)),
            ],
        )
        .unwrap();
        let pattern = DetectionPattern::single(0, 1);
        let ideal = condition(&state, &pattern).unwrap();
        let heralded =
            herald_with_losses(&state, &pattern, 1.0, DetectorResolution::Full).unwrap();
        assert_eq!(heralded.branches().len(), 1);
        let branch = &heralded.branches()[0];
        assert_eq!(branch.reported, Occupation::from([1]));
        assert_eq!(branch.lost, Occupation::from([0]));
        assert_eq!(branch.state, ideal.state);
        assert_relative_eq!(
            heralded.probability,
            ideal.herald_probability,
            max_relative = 1e-15
        );
    }

    #[test]
    fn loss_branches_stay_orthogonal_sectors() {
        // (|1⟩ + |2⟩)/√2 monitored for a reading of one at efficiency 0.7:
        // the |1⟩ term loses nothing, the |2⟩ term loses one photon, and the
        // two sectors add in probability, not amplitude.
        let state = PureState::from_amplitudes(
            1,
            2,
            [
                ([1u32], c(FRAC_1_SQRT_2, 0.0)),
                ([2u32], c(FRAC_1_SQRT_2, 0.0)),
            ],
        )
        .unwrap();
        let efficiency = 0.7;
        let heralded = herald_with_losses(
            &state,
            &DetectionPattern::single(0, 1),
            efficiency,
            DetectorResolution::Full,
        )
        .unwrap();
        assert_eq!(heralded.branches().len(), 2);
        let lossless = &heralded.branches()[0];
        assert_eq!(lossless.lost, Occupation::from([0]));
        assert_relative_eq!(lossless.weight, efficiency / 2.0, max_relative = 1e-15);
        let lossy = &heralded.branches()[1];
        assert_eq!(lossy.lost, Occupation::from([1]));
        assert_relative_eq!(
            lossy.weight,
            efficiency * (1.0 - efficiency),
            max_relative = 1e-14
        );
        let expected = reading_distribution(&state, 0, efficiency).unwrap()[&1];
        assert_relative_eq!(heralded.probability, expected, max_relative = 1e-14);
    }

    #[test]
    fn per_detector_efficiencies_are_honored() {
        let state = PureState::basis([1, 1], 2).unwrap();
        let pattern = DetectionPattern::new().with(0, 1).with(1, 1);
        let efficiencies = BTreeMap::from([(0, 1.0), (1, 0.5)]);
        let heralded = herald_with_detector_efficiencies(
            &state,
            &pattern,
            &efficiencies,
            DetectorResolution::Full,
        )
        .unwrap();
        assert_relative_eq!(heralded.probability, 0.5, max_relative = 1e-15);

        let missing = BTreeMap::from([(0, 1.0)]);
        assert!(matches!(
            herald_with_detector_efficiencies(
                &state,
                &pattern,
                &missing,
                DetectorResolution::Full
            ),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn capped_resolution_merges_high_counts() {
        let state = PureState::from_amplitudes(
            1,
            3,
            [([2u32], c(1.0, 0.0)), ([3u32], c(1.0, 0.0))],
        )
        .unwrap();
        let pattern = DetectionPattern::single(0, 2);
        let full =
            herald_with_losses(&state, &pattern, 1.0, DetectorResolution::Full).unwrap();
        assert_relative_eq!(full.probability, 0.5, max_relative = 1e-15);
        let capped =
            herald_with_losses(&state, &pattern, 1.0, DetectorResolution::CappedAtTwo).unwrap();
        assert_relative_eq!(capped.probability, 1.0, max_relative = 1e-15);
        assert_eq!(capped.branches().len(), 2);
    }

    #[test]
    fn capped_equals_full_for_zero_and_one_readings() {
        let state = PureState::from_amplitudes(
            3,
            4,
            [
                ([1u32, 0, 1], c(0.5, 0.0)),
                ([2u32, 0, 0], c(0.5, 0.0)),
                ([1u32, 1, 2], c(0.5, 0.0)),
                ([3u32, 0, 1], c(0.5, 0.0)),
            ],
        )
        .unwrap();
        let pattern = DetectionPattern::new().with(0, 1).with(1, 0);
        let full =
            herald_with_losses(&state, &pattern, 0.85, DetectorResolution::Full).unwrap();
        let capped =
            herald_with_losses(&state, &pattern, 0.85, DetectorResolution::CappedAtTwo).unwrap();
        assert_eq!(full.probability, capped.probability);
        assert_eq!(full.branches().len(), capped.branches().len());
        for (a, b) in full.branches().iter().zip(capped.branches()) {
            assert_eq!(a.reported, b.reported);
            assert_eq!(a.lost, b.lost);
            assert_eq!(a.state, b.state);
        }
    }

    #[test]
    fn herald_with_losses_validates_efficiency() {
        let state = PureState::basis([1], 2).unwrap();
        for bad in [-0.1, 1.5] {
            assert!(matches!(
                herald_with_losses(
                    &state,
                    &DetectionPattern::single(0, 1),
                    bad,
                    DetectorResolution::Full
                ),
                Err(Error::EfficiencyOutOfRange(_))
            ));
        }
    }
}
