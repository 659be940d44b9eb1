//! The single-qubit interference experiment: prepare a superposition, rotate
//! its phase, apply the heralded Hadamard, and demand vacuum on the output,
//! sweeping the phase to trace a fringe whose visibility measures how well
//! the whole heralded tool chain holds together.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::detection::{
    condition, herald_with_detector_efficiencies, DetectionPattern, DetectorResolution,
};
use crate::error::{Error, Result};
use crate::fock::PureState;
use crate::gates::{cs_on_rails, phase_gate, plus_state, superposition_producer};
use crate::transforms::ModeTransform;

/// Where the circuit's three superpositions (input and both Hadamard
/// resources) come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResourceKind {
    /// Ideal (|0⟩ + |1⟩)/√2 states.
    Exact,
    /// States heralded by the conditional producer at the configured drive.
    #[default]
    Producer,
}

impl std::fmt::Display for ResourceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ResourceKind::Exact => write!(f, "exact"),
            ResourceKind::Producer => write!(f, "producer"),
        }
    }
}

/// Full description of one phase-sweep run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Coherent drive amplitude of the producers.
    pub chi: f64,
    /// Shared efficiency of every detector in the circuit.
    pub efficiency: f64,
    /// Number of equally spaced phase samples.
    pub phase_points: u32,
    /// Swept interval; the lower end is sampled, the upper end is not.
    pub phase_range: [f64; 2],
    /// Source of the input and resource superpositions.
    pub resource_policy: ResourceKind,
    /// Global cap on the total photon number.
    pub cutoff: u32,
    /// Photon-number resolution of every detector.
    pub detector_resolution: DetectorResolution,
    /// Where to write the sweep CSV (plus a `.meta` sidecar); `None` keeps
    /// results in memory.
    pub output_path: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            chi: -0.33714,
            efficiency: 1.0,
            phase_points: 64,
            phase_range: [0.0, std::f64::consts::TAU],
            resource_policy: ResourceKind::Producer,
            cutoff: 6,
            detector_resolution: DetectorResolution::Full,
            output_path: None,
        }
    }
}

impl ExperimentConfig {
    /// Checks every cross-field invariant, returning the first violation.
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.efficiency) {
            return Err(Error::EfficiencyOutOfRange(self.efficiency));
        }
        if self.phase_points < 2 {
            return Err(Error::InvalidConfig(
                "a sweep needs at least two phase points".into(),
            ));
        }
        if !self.phase_range.iter().all(|v| v.is_finite())
            || self.phase_range[1] <= self.phase_range[0]
        {
            return Err(Error::InvalidConfig(
                "phase range must be a finite, increasing interval".into(),
            ));
        }
        if self.cutoff < 4 {
            return Err(Error::CutoffTooSmall {
                cutoff: self.cutoff,
                needed: "two rail photons plus two ancilla photons must fit",
            });
        }
        if self.resource_policy == ResourceKind::Producer {
            if self.chi == 0.0 {
                return Err(Error::InvalidConfig(
                    "producer resources need a nonzero drive amplitude".into(),
                ));
            }
            if !self.chi.is_finite() || self.chi.abs() >= 1.0 {
                return Err(Error::InvalidConfig(
                    "producer drive amplitude must lie strictly inside (-1, 1)".into(),
                ));
            }
        }
        Ok(())
    }

    /// Parses and validates a TOML description; unknown keys are rejected.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a TOML config file.
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    /// The swept phases: `phase_points` uniform samples from the lower
    /// range end (inclusive) to the upper end (exclusive).
    pub fn phase_values(&self) -> Vec<f64> {
        let [start, end] = self.phase_range;
        let step = (end - start) / f64::from(self.phase_points);
        (0..self.phase_points)
            .map(|k| start + f64::from(k) * step)
            .collect()
    }
}

/// One phase sample of the test circuit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSample {
    /// Phase applied between preparation and the Hadamard.
    pub phi: f64,
    /// Probability that every conditioning detector reports correctly and
    /// the final detector sees vacuum, per physical attempt.
    pub p_joint: f64,
    /// The fringe proper: `p_joint` divided by the probability of the
    /// conditioning alone.
    pub p_normalized: f64,
}

/// A completed sweep: samples in phase order plus the fringe visibility.
#[derive(Clone, Debug)]
pub struct SweepResult {
    /// One sample per swept phase, in sweep order.
    pub samples: Vec<PhaseSample>,
    /// Peak-to-trough contrast of the joint probabilities.
    pub visibility: f64,
    /// The configuration that produced the sweep.
    pub config: ExperimentConfig,
}

/// The circuit's superposition sources: branch states of one producer run,
/// or the single exact resource, plus the squared norm each role's physical
/// input carries.
fn source_branches(config: &ExperimentConfig) -> Result<(Vec<PureState>, f64)> {
    match config.resource_policy {
        ResourceKind::Exact => Ok((vec![plus_state(config.cutoff)?], 1.0)),
        ResourceKind::Producer => {
            let produced =
                superposition_producer(config.chi, config.efficiency, config.cutoff)?;
            let states = produced
                .heralded
                .branches()
                .iter()
                .map(|branch| branch.state.clone())
                .collect();
            Ok((states, produced.drive_norm_squared))
        }
    }
}

/// Runs the circuit at one phase: superposition in, phase shift, heralded
/// Hadamard, vacuum demanded on the output.
///
/// Detector model: every detector that must see photons — the producer
/// monitors, the two controlled-sign ancilla detectors, and the
/// photon-carrying measurement port — registers each photon independently
/// with probability `cfg.efficiency`, so false heralds from partially lost
/// occupations are counted. Detectors that must see nothing — the measured
/// rail after the mixing splitter and the final fringe detector — are exact
/// vacuum projections. Under [`ResourceKind::Producer`] the input and both
/// resources each come from an independent producer, and probabilities are
/// per attempt on the three coherent drives.
pub fn run_test_circuit(phi: f64, config: &ExperimentConfig) -> Result<PhaseSample> {
    config.validate()?;
    let (sources, source_norm) = source_branches(config)?;
    if sources.is_empty() {
        return Err(Error::ZeroNorm);
    }
    let normalization = source_norm.powi(3);
    // After the CS herald the rails are (0: input, 1: output resource); the
    // second resource joins as mode 2 and meets the input rail on a 50:50
    // splitter, resource port first.
    let mixer = ModeTransform::beamsplitter(0.5)?.embed(&[2, 0], 3)?;
    let measure_pattern = DetectionPattern::new().with(0, 0).with(2, 1);
    let measure_efficiencies: BTreeMap<usize, f64> =
        [(0, 1.0), (2, config.efficiency)].into();
    let final_pattern = DetectionPattern::single(0, 0);
    let mut p_conditioning = 0.0;
    let mut p_joint = 0.0;
    for input in &sources {
        let rotated = phase_gate(input, phi)?;
        for first in &sources {
            for second in &sources {
                let input_norm = rotated.norm_squared() * first.norm_squared()
                    * second.norm_squared();
                let scale = input_norm / normalization;
                let cs_stage = cs_on_rails(
                    &rotated.tensor(first),
                    config.efficiency,
                    config.detector_resolution,
                )?;
                for cs_branch in cs_stage.branches() {
                    let mixed = mixer.apply(&cs_branch.state.tensor(second))?;
                    let measured = herald_with_detector_efficiencies(
                        &mixed,
                        &measure_pattern,
                        &measure_efficiencies,
                        config.detector_resolution,
                    )?;
                    for branch in measured.branches() {
                        let weight = branch.state.norm_squared() / input_norm * scale;
                        if weight <= crate::EPS_PRUNE * crate::EPS_PRUNE {
                            continue;
                        }
                        p_conditioning += weight;
                        let closed = condition(&branch.state, &final_pattern)?;
                        p_joint += closed.herald_probability * weight;
                    }
                }
            }
        }
    }
    if p_conditioning <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(PhaseSample {
        phi,
        p_joint,
        p_normalized: p_joint / p_conditioning,
    })
}

/// Peak-to-trough contrast (max − min)/(max + min) of the joint
/// probabilities in `samples`.
pub fn visibility(samples: &[PhaseSample]) -> Result<f64> {
    let mut extremes: Option<(f64, f64)> = None;
    for sample in samples {
        let (min, max) = extremes.get_or_insert((sample.p_joint, sample.p_joint));
        *min = min.min(sample.p_joint);
        *max = max.max(sample.p_joint);
    }
    let (min, max) = extremes.ok_or(Error::VisibilityUndefined("no samples in the sweep"))?;
    if max + min <= 0.0 {
        return Err(Error::VisibilityUndefined(
            "every sample has zero probability",
        ));
    }
    Ok((max - min) / (max + min))
}

/// Sweeps the configured phases, computes the visibility, and writes the
/// CSV plus metadata sidecar when an output path is configured.
pub fn run_phase_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    let samples = config
        .phase_values()
        .into_iter()
        .map(|phi| run_test_circuit(phi, config))
        .collect::<Result<Vec<_>>>()?;
    let visibility = visibility(&samples)?;
    if let Some(path) = &config.output_path {
        write_samples_csv(path, &samples)?;
        fs::write(metadata_path(path), render_metadata(config, visibility))?;
    }
    Ok(SweepResult {
        samples,
        visibility,
        config: config.clone(),
    })
}

/// Writes samples as CSV with a `phi,p_joint,p_normalized` header; values
/// use the shortest digit strings that parse back to the same doubles.
pub fn write_samples_csv(path: &Path, samples: &[PhaseSample]) -> Result<()> {
    let mut text = String::from("phi,p_joint,p_normalized\n");
    for sample in samples {
        let _ = writeln!(
            text,
            "{},{},{}",
            sample.phi, sample.p_joint, sample.p_normalized
        );
    }
    fs::write(path, text)?;
    Ok(())
}

/// Sidecar path for a sweep output: the CSV path with `.meta` appended.
pub fn metadata_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}

/// Key-value metadata describing a finished sweep.
fn render_metadata(config: &ExperimentConfig, visibility: f64) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "chi = {}", config.chi);
    let _ = writeln!(text, "efficiency = {}", config.efficiency);
    let _ = writeln!(text, "phase_points = {}", config.phase_points);
    let _ = writeln!(text, "phase_start = {}", config.phase_range[0]);
    let _ = writeln!(text, "phase_end = {}", config.phase_range[1]);
    let _ = writeln!(text, "resource_policy = {}", config.resource_policy);
    let _ = writeln!(text, "cutoff = {}", config.cutoff);
    let _ = writeln!(
        text,
        "detector_resolution = {}",
        config.detector_resolution
    );
    let _ = writeln!(text, "visibility = {visibility}");
    text
}

#[cfg(test)]
mod tests {
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    use super::*;

    fn exact_config(points: u32) -> ExperimentConfig {
        ExperimentConfig {
            resource_policy: ResourceKind::Exact,
            phase_points: points,
            cutoff: 4,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn default_config_is_valid_with_uniform_phase_grid() {
        let config = ExperimentConfig::default();
        config.validate().unwrap();
        let phases = config.phase_values();
        assert_eq!(phases.len(), 64);
        assert_eq!(phases[0], 0.0);
        let step = std::f64::consts::TAU / 64.0;
        assert_relative_eq!(phases[1], step, max_relative = 1e-15);
        assert_relative_eq!(
            phases[63],
            std::f64::consts::TAU - step,
            max_relative = 1e-15
        );
    }

    #[test]
    fn config_validation_rejects_bad_fields() {
        let with = |patch: fn(&mut ExperimentConfig)| {
            let mut config = ExperimentConfig::default();
            patch(&mut config);
            config.validate()
        };
        assert!(matches!(
            with(|c| c.efficiency = 1.5),
            Err(Error::EfficiencyOutOfRange(_))
        ));
        assert!(matches!(
            with(|c| c.phase_points = 1),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            with(|c| c.cutoff = 3),
            Err(Error::CutoffTooSmall { .. })
        ));
        assert!(matches!(with(|c| c.chi = 0.0), Err(Error::InvalidConfig(_))));
        assert!(matches!(
            with(|c| c.phase_range = [1.0, 1.0]),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn toml_overrides_defaults_and_rejects_unknown_keys() {
        let config = ExperimentConfig::from_toml_str(
            "chi = -0.2\nefficiency = 0.9\nresource_policy = \"exact\"\n",
        )
        .unwrap();
        assert_eq!(config.chi, -0.2);
        assert_eq!(config.efficiency, 0.9);
        assert_eq!(config.resource_policy, ResourceKind::Exact);
        assert_eq!(config.phase_points, 64);
        assert_eq!(config.detector_resolution, DetectorResolution::Full);

        assert!(matches!(
            ExperimentConfig::from_toml_str("unknown_knob = 3\n"),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            ExperimentConfig::from_toml_str("efficiency = 1.5\n"),
            Err(Error::EfficiencyOutOfRange(_))
        ));
        let capped = ExperimentConfig::from_toml_str(
            "detector_resolution = \"capped-at-two\"\n",
        )
        .unwrap();
        assert_eq!(capped.detector_resolution, DetectorResolution::CappedAtTwo);
    }

    #[test]
    fn exact_resources_trace_the_ideal_fringe() {
        let config = exact_config(8);
        for phi in config.phase_values() {
            let sample = run_test_circuit(phi, &config).unwrap();
            let expected = (phi / 2.0).cos().powi(2);
            assert_abs_diff_eq!(sample.p_normalized, expected, epsilon = 1e-12);
            // Conditioning probability of the ideal gate is 1/54 at every
            // phase, so the joint fringe is just a rescaling.
            assert_abs_diff_eq!(sample.p_joint, expected / 54.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn exact_sweep_has_unit_visibility() {
        let result = run_phase_sweep(&exact_config(16)).unwrap();
        assert_abs_diff_eq!(result.visibility, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn producer_fringe_peaks_at_zero_phase_with_unit_visibility() {
        let config = ExperimentConfig {
            phase_points: 8,
            ..ExperimentConfig::default()
        };
        let result = run_phase_sweep(&config).unwrap();
        assert_abs_diff_eq!(result.visibility, 1.0, epsilon = 1e-9);
        let peak = result
            .samples
            .iter()
            .max_by(|a, b| a.p_joint.total_cmp(&b.p_joint))
            .unwrap();
        assert_eq!(peak.phi, 0.0);
        for sample in &result.samples {
            assert!(sample.p_joint <= sample.p_normalized);
        }
    }

    #[test]
    fn detector_losses_wash_out_the_producer_fringe() {
        let config = ExperimentConfig {
            phase_points: 4,
            efficiency: 0.8,
            ..ExperimentConfig::default()
        };
        let result = run_phase_sweep(&config).unwrap();
        assert!(result.visibility < 0.9);
        assert!(result.visibility > 0.3);
    }

    #[test]
    fn sweep_writes_csv_and_metadata() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("sweep.csv");
        let config = ExperimentConfig {
            output_path: Some(out.clone()),
            ..exact_config(4)
        };
        let result = run_phase_sweep(&config).unwrap();

        let csv = std::fs::read_to_string(&out).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("phi,p_joint,p_normalized"));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 4);
        let fields: Vec<f64> = rows[0]
            .split(',')
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(fields[0], result.samples[0].phi);
        assert_eq!(fields[1], result.samples[0].p_joint);
        assert_eq!(fields[2], result.samples[0].p_normalized);

        let meta = std::fs::read_to_string(metadata_path(&out)).unwrap();
        assert!(meta.contains("resource_policy = exact"));
        assert!(meta.contains(&format!("visibility = {}", result.visibility)));
    }

    #[test]
    fn visibility_needs_meaningful_samples() {
        assert!(matches!(
            visibility(&[]),
            Err(Error::VisibilityUndefined(_))
        ));
        let dead = [PhaseSample {
            phi: 0.0,
            p_joint: 0.0,
            p_normalized: 0.0,
        }];
        assert!(matches!(
            visibility(&dead),
            Err(Error::VisibilityUndefined(_))
        ));
    }
}
