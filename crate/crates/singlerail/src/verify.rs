//! End-to-end verification checks shared by the CLI `verify` subcommand and
//! the acceptance test target: one check per headline claim, each returning
//! a pass/fail verdict with human-readable detail.

use crate::detection::DetectorResolution;
use crate::error::Result;
use crate::experiment::{
    run_phase_sweep, run_test_circuit, ExperimentConfig, ResourceKind,
};
use crate::fock::{Complex64, PureState};
use crate::gates::{
    cs_gate_ideal, hadamard_on_state, plus_state, reflectivity_for_chi,
    superposition_measurement, superposition_producer, working_point, QubitAmplitudes,
    TwoQubitAmplitudes,
};
use crate::transforms::{cs_network, cs_network_cascade, ModeTransform};

/// Outcome of one verification check.
#[derive(Clone, Debug)]
pub struct CheckReport {
    /// Short stable identifier for the check.
    pub name: &'static str,
    /// Whether every assertion in the check held.
    pub passed: bool,
    /// Human-readable summary of the measured values.
    pub details: String,
}

impl CheckReport {
    fn new(name: &'static str, passed: bool, details: String) -> Self {
        CheckReport {
            name,
            passed,
            details,
        }
    }
}

/// Runs the whole verification suite in order.
pub fn run_all_checks() -> Vec<CheckReport> {
    vec![
        check_cs_truth_table(),
        check_network_decomposition(),
        check_reflectivity_values(),
        check_producer_working_points(),
        check_measurement_verdicts(),
        check_hadamard_semantics(),
        check_ideal_fringe(),
        check_fringe_visibilities(),
        check_truncation_insensitivity(),
        check_oracle_fixtures(),
    ]
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Basis-state truth table of the controlled-sign gate.
pub fn check_cs_truth_table() -> CheckReport {
    let herald = 2.0 / 27.0;
    let mut passed = true;
    let mut worst_herald: f64 = 0.0;
    let mut worst_state: f64 = 0.0;
    for bits in [(0u32, 0u32), (1, 0), (0, 1), (1, 1)] {
        let input = TwoQubitAmplitudes::new(
            c(f64::from(u32::from(bits == (0, 0))), 0.0),
            c(f64::from(u32::from(bits == (1, 0))), 0.0),
            c(f64::from(u32::from(bits == (0, 1))), 0.0),
            c(f64::from(u32::from(bits == (1, 1))), 0.0),
        );
        let result = match cs_gate_ideal(&input, 4) {
            Ok(r) => r,
            Err(e) => return CheckReport::new("cs-truth-table", false, e.to_string()),
        };
        worst_herald = worst_herald.max((result.herald_probability - herald).abs());
        let sign = if bits == (1, 1) { -1.0 } else { 1.0 };
        let deviation = (result.state.amplitude([bits.0, bits.1])
            - c(sign * herald.sqrt(), 0.0))
        .norm();
        worst_state = worst_state.max(deviation);
        passed &= result.herald_probability > 0.0;
    }
    passed &= worst_herald <= 1e-10 && worst_state <= 1e-10;
    CheckReport::new(
        "cs-truth-table",
        passed,
        format!(
            "herald 2/27 within {worst_herald:.2e}, output amplitudes within {worst_state:.2e}"
        ),
    )
}

/// Closed-form network is unitary and matches the four-splitter cascade.
pub fn check_network_decomposition() -> CheckReport {
    let network = cs_network();
    let cascade = cs_network_cascade();
    let unitarity = network.unitarity_deviation();
    let mut mismatch: f64 = 0.0;
    for row in 0..4 {
        for col in 0..4 {
            mismatch = mismatch.max((network.entry(row, col) - cascade.entry(row, col)).norm());
        }
    }
    let passed = unitarity <= 1e-10 && mismatch <= 1e-10;
    CheckReport::new(
        "network-decomposition",
        passed,
        format!("unitarity deviation {unitarity:.2e}, cascade mismatch {mismatch:.2e}"),
    )
}

/// Producer reflectivity at the two published drives.
pub fn check_reflectivity_values() -> CheckReport {
    let weak = reflectivity_for_chi(-0.10074);
    let strong = reflectivity_for_chi(-0.33714);
    let weak_err = (weak - 0.990244).abs();
    let strong_err = (strong - 0.91985).abs();
    let passed = weak_err <= 5e-6 && strong_err <= 5e-6;
    CheckReport::new(
        "reflectivity-values",
        passed,
        format!("eta(-0.10074) = {weak:.8}, eta(-0.33714) = {strong:.8}"),
    )
}

/// Producer herald rates and two-photon contamination at both drives.
pub fn check_producer_working_points() -> CheckReport {
    let weak = match working_point(-0.10074) {
        Ok(p) => p,
        Err(e) => return CheckReport::new("producer-working-points", false, e.to_string()),
    };
    let strong = match working_point(-0.33714) {
        Ok(p) => p,
        Err(e) => return CheckReport::new("producer-working-points", false, e.to_string()),
    };
    let passed = (weak.second_order_ratio - 0.01).abs() <= 5e-4
        && (weak.herald_probability - 0.01).abs() <= 2e-3
        && (strong.second_order_ratio - 0.1).abs() <= 5e-3
        && (strong.herald_probability - 0.08).abs() <= 1e-2;
    CheckReport::new(
        "producer-working-points",
        passed,
        format!(
            "weak: ratio {:.6}, herald {:.6}; strong: ratio {:.6}, herald {:.6}",
            weak.second_order_ratio,
            weak.herald_probability,
            strong.second_order_ratio,
            strong.herald_probability
        ),
    )
}

/// Superposition-basis verdict probabilities on exact |±⟩ inputs.
pub fn check_measurement_verdicts() -> CheckReport {
    let resource = match plus_state(4) {
        Ok(s) => s,
        Err(e) => return CheckReport::new("measurement-verdicts", false, e.to_string()),
    };
    let mut worst: f64 = 0.0;
    for (input, correct_plus) in [
        (QubitAmplitudes::plus(), true),
        (QubitAmplitudes::minus(), false),
    ] {
        let state = match input.state(4) {
            Ok(s) => s,
            Err(e) => return CheckReport::new("measurement-verdicts", false, e.to_string()),
        };
        let result = match superposition_measurement(&state, &resource, 1.0) {
            Ok(r) => r,
            Err(e) => return CheckReport::new("measurement-verdicts", false, e.to_string()),
        };
        let (correct, wrong) = if correct_plus {
            (result.plus, result.minus)
        } else {
            (result.minus, result.plus)
        };
        worst = worst
            .max((correct - 0.5).abs())
            .max(wrong)
            .max((result.inconclusive - 0.5).abs());
    }
    CheckReport::new(
        "measurement-verdicts",
        worst <= 1e-10,
        format!("verdict probabilities within {worst:.2e} of {{1/2, 0, 1/2}}"),
    )
}

/// Tiny deterministic generator for reproducible random qubits.
struct SplitMix(u64);

impl SplitMix {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        // Map to [-1, 1].
        (z >> 11) as f64 / (1u64 << 52) as f64 - 1.0
    }
}

/// Hadamard output formula and involution on 20 reproducible random qubits.
pub fn check_hadamard_semantics() -> CheckReport {
    let inner = || -> Result<(f64, f64)> {
        let resource = plus_state(4)?;
        let mut rng = SplitMix(0x5eed_cafe);
        let mut worst_map: f64 = 0.0;
        let mut worst_twice: f64 = 0.0;
        let mut produced = 0;
        while produced < 20 {
            let q = QubitAmplitudes::new(
                c(rng.next_f64(), rng.next_f64()),
                c(rng.next_f64(), rng.next_f64()),
            );
            if q.norm_squared() < 0.1 {
                continue;
            }
            produced += 1;
            let input = q.state(4)?;
            let once = hadamard_on_state(
                &input,
                &resource,
                &resource,
                1.0,
                DetectorResolution::Full,
            )?;
            let expected =
                QubitAmplitudes::new(q.alpha + q.beta, q.alpha - q.beta).state(4)?;
            worst_map =
                worst_map.max(1.0 - once.branches()[0].state.fidelity(&expected)?);
            let twice = hadamard_on_state(
                &once.branches()[0].state,
                &resource,
                &resource,
                1.0,
                DetectorResolution::Full,
            )?;
            worst_twice = worst_twice.max(1.0 - twice.branches()[0].state.fidelity(&input)?);
        }
        Ok((worst_map, worst_twice))
    };
    match inner() {
        Ok((worst_map, worst_twice)) => CheckReport::new(
            "hadamard-semantics",
            worst_map <= 1e-10 && worst_twice <= 1e-10,
            format!(
                "20 random qubits: map infidelity ≤ {worst_map:.2e}, double-application infidelity ≤ {worst_twice:.2e}"
            ),
        ),
        Err(e) => CheckReport::new("hadamard-semantics", false, e.to_string()),
    }
}

fn exact_ideal_config() -> ExperimentConfig {
    ExperimentConfig {
        resource_policy: ResourceKind::Exact,
        efficiency: 1.0,
        ..ExperimentConfig::default()
    }
}

/// Exact-resource fringe is cos²(φ/2) with unit visibility.
pub fn check_ideal_fringe() -> CheckReport {
    let result = match run_phase_sweep(&exact_ideal_config()) {
        Ok(r) => r,
        Err(e) => return CheckReport::new("ideal-fringe", false, e.to_string()),
    };
    let mut worst: f64 = 0.0;
    for sample in &result.samples {
        worst = worst.max((sample.p_normalized - (sample.phi / 2.0).cos().powi(2)).abs());
    }
    let vis_err = (result.visibility - 1.0).abs();
    CheckReport::new(
        "ideal-fringe",
        worst <= 1e-10 && vis_err <= 1e-9,
        format!(
            "max |p_normalized − cos²(φ/2)| = {worst:.2e} over {} points, visibility {:.12}",
            result.samples.len(),
            result.visibility
        ),
    )
}

/// Fringe visibilities with producer resources at the strong drive.
pub fn check_fringe_visibilities() -> CheckReport {
    let mut details = Vec::new();
    let mut passed = true;
    for (efficiency, low, high) in [(1.0, 0.995, 1.005), (0.9, 0.80, 0.92), (0.8, 0.64, 0.68)]
    {
        let config = ExperimentConfig {
            efficiency,
            ..ExperimentConfig::default()
        };
        match run_phase_sweep(&config) {
            Ok(result) => {
                passed &= result.visibility >= low && result.visibility <= high;
                details.push(format!("V({efficiency}) = {:.6}", result.visibility));
            }
            Err(e) => {
                return CheckReport::new("fringe-visibilities", false, e.to_string());
            }
        }
    }
    CheckReport::new("fringe-visibilities", passed, details.join(", "))
}

/// Doubling the cutoff headroom moves no fixture value by 1e-9 or more.
pub fn check_truncation_insensitivity() -> CheckReport {
    let inner = || -> Result<f64> {
        let mut worst: f64 = 0.0;

        for cutoff_pair in [(6u32, 8u32)] {
            let (narrow, wide) = cutoff_pair;
            // Producer output amplitudes.
            let a = superposition_producer(-0.33714, 1.0, narrow)?;
            let b = superposition_producer(-0.33714, 1.0, wide)?;
            for occupation in [[0u32], [1], [2], [3]] {
                worst = worst.max(
                    (a.heralded.branches()[0].state.amplitude(occupation)
                        - b.heralded.branches()[0].state.amplitude(occupation))
                    .norm(),
                );
            }
            worst = worst.max((a.herald_probability - b.herald_probability).abs());

            // Controlled-sign herald on a superposed input.
            let input = TwoQubitAmplitudes::new(
                c(0.5, 0.0),
                c(0.5, 0.0),
                c(0.5, 0.0),
                c(0.5, 0.0),
            );
            worst = worst.max(
                (cs_gate_ideal(&input, narrow)?.herald_probability
                    - cs_gate_ideal(&input, wide)?.herald_probability)
                    .abs(),
            );

            // Composite Hadamard herald with exact resources.
            let zero = QubitAmplitudes::logical_zero();
            let herald_at = |cutoff: u32| -> Result<f64> {
                let resource = plus_state(cutoff)?;
                Ok(hadamard_on_state(
                    &zero.state(cutoff)?,
                    &resource,
                    &resource,
                    1.0,
                    DetectorResolution::Full,
                )?
                .probability)
            };
            worst = worst.max((herald_at(narrow)? - herald_at(wide)?).abs());

            // Joint fringe probabilities with producer resources.
            for efficiency in [1.0, 0.9] {
                for phi in [0.0, 1.1, std::f64::consts::PI] {
                    let sample = |cutoff: u32| -> Result<f64> {
                        let config = ExperimentConfig {
                            efficiency,
                            cutoff,
                            ..ExperimentConfig::default()
                        };
                        Ok(run_test_circuit(phi, &config)?.p_joint)
                    };
                    worst = worst.max((sample(narrow)? - sample(wide)?).abs());
                }
            }

            // Visibility with ideal detectors, and one normalized fringe
            // point with exact resources. (Visibility at reduced
            // efficiency is deliberately not a fixture: as a ratio of two
            // near-extinction probabilities it amplifies the sub-1e-12
            // probability shifts by the inverse fringe scale.)
            let vis = |cutoff: u32| -> Result<f64> {
                let config = ExperimentConfig {
                    cutoff,
                    phase_points: 8,
                    ..ExperimentConfig::default()
                };
                Ok(run_phase_sweep(&config)?.visibility)
            };
            worst = worst.max((vis(narrow)? - vis(wide)?).abs());
            let exact_point = |cutoff: u32| -> Result<f64> {
                let config = ExperimentConfig {
                    resource_policy: ResourceKind::Exact,
                    cutoff,
                    ..ExperimentConfig::default()
                };
                Ok(run_test_circuit(1.1, &config)?.p_normalized)
            };
            worst = worst.max((exact_point(narrow)? - exact_point(wide)?).abs());
        }
        Ok(worst)
    };
    match inner() {
        Ok(worst) => CheckReport::new(
            "truncation-insensitivity",
            worst < 1e-9,
            format!("max fixture shift between cutoffs 6 and 8: {worst:.2e}"),
        ),
        Err(e) => CheckReport::new("truncation-insensitivity", false, e.to_string()),
    }
}

/// Hong-Ou-Mandel bunching and the frozen composite-Hadamard herald.
pub fn check_oracle_fixtures() -> CheckReport {
    let inner = || -> Result<(f64, f64, f64)> {
        let two_photons = PureState::basis([1, 1], 4)?;
        let mixed = ModeTransform::beamsplitter(0.5)?.apply(&two_photons)?;
        let coincidence = mixed.amplitude([1, 1]).norm();
        let bunched = (mixed.amplitude([2, 0]).norm() - std::f64::consts::FRAC_1_SQRT_2)
            .abs()
            .max((mixed.amplitude([0, 2]).norm() - std::f64::consts::FRAC_1_SQRT_2).abs());

        let resource = plus_state(4)?;
        let herald = hadamard_on_state(
            &QubitAmplitudes::logical_zero().state(4)?,
            &resource,
            &resource,
            1.0,
            DetectorResolution::Full,
        )?
        .probability;
        Ok((coincidence, bunched, herald))
    };
    match inner() {
        Ok((coincidence, bunched, herald)) => {
            // Frozen regression value: the composite gate heralds 1/54 of
            // the time on normalized inputs with exact resources.
            let herald_err = (herald - 1.0 / 54.0).abs();
            CheckReport::new(
                "oracle-fixtures",
                coincidence <= 1e-10 && bunched <= 1e-10 && herald_err <= 1e-10,
                format!(
                    "HOM coincidence {coincidence:.2e}, bunching deviation {bunched:.2e}, Hadamard herald {herald:.12} (frozen 1/54)"
                ),
            )
        }
        Err(e) => CheckReport::new("oracle-fixtures", false, e.to_string()),
    }
}

/// Maximum joint-probability difference between full and capped detector
/// resolutions over a coarse sweep at 90 % efficiency, reported for the
/// record (every demanded reading here is 0 or 1, so the conventions are
/// expected to coincide).
pub fn resolution_convention_difference() -> Result<f64> {
    let base = ExperimentConfig {
        efficiency: 0.9,
        phase_points: 8,
        ..ExperimentConfig::default()
    };
    let capped = ExperimentConfig {
        detector_resolution: DetectorResolution::CappedAtTwo,
        ..base.clone()
    };
    let full_sweep = run_phase_sweep(&base)?;
    let capped_sweep = run_phase_sweep(&capped)?;
    Ok(full_sweep
        .samples
        .iter()
        .zip(&capped_sweep.samples)
        .map(|(a, b)| (a.p_joint - b.p_joint).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        for report in run_all_checks() {
            assert!(report.passed, "{}: {}", report.name, report.details);
        }
    }

    #[test]
    fn resolution_conventions_agree_here() {
        assert_eq!(resolution_convention_difference().unwrap(), 0.0);
    }
}
