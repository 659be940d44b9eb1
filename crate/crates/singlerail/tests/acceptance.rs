//! Acceptance suite: one test per headline requirement, each printing a
//! single pass/fail line in the test report. The shared check
//! implementations live in `singlerail::verify` so the CLI `verify`
//! subcommand runs exactly the same assertions.

use approx::{assert_abs_diff_eq, assert_relative_eq};
use singlerail::verify::{
    check_cs_truth_table, check_fringe_visibilities, check_hadamard_semantics,
    check_ideal_fringe, check_measurement_verdicts, check_network_decomposition,
    check_oracle_fixtures, check_producer_working_points, check_reflectivity_values,
    check_truncation_insensitivity, resolution_convention_difference,
};
use singlerail::{
    condition, cs_network, herald_with_losses, lossy_detect, outcome_distribution,
    run_phase_sweep, Complex64, DetectionPattern, DetectorResolution, ExperimentConfig,
    ModeTransform, PureState, ResourceKind,
};

fn assert_check(report: singlerail::CheckReport) {
    assert!(report.passed, "{}: {}", report.name, report.details);
    println!("{}: {}", report.name, report.details);
}

#[test]
fn acceptance_01_controlled_sign_truth_table() {
    assert_check(check_cs_truth_table());
}

#[test]
fn acceptance_02_network_matches_cascade() {
    assert_check(check_network_decomposition());
}

#[test]
fn acceptance_03_producer_reflectivities() {
    assert_check(check_reflectivity_values());
}

#[test]
fn acceptance_04_producer_working_points() {
    assert_check(check_producer_working_points());
}

#[test]
fn acceptance_05_superposition_measurement_statistics() {
    assert_check(check_measurement_verdicts());
}

#[test]
fn acceptance_06_hadamard_on_random_qubits() {
    assert_check(check_hadamard_semantics());
}

#[test]
fn acceptance_07_ideal_fringe_shape() {
    assert_check(check_ideal_fringe());
}

#[test]
fn acceptance_08_lossy_fringe_visibilities() {
    let report = check_fringe_visibilities();
    assert!(report.passed, "{}: {}", report.name, report.details);
    // Freeze the computed mid-efficiency value for the record.
    let config = ExperimentConfig {
        efficiency: 0.9,
        ..ExperimentConfig::default()
    };
    let visibility = run_phase_sweep(&config).unwrap().visibility;
    println!("computed visibility at 90% efficiency: {visibility:.15}");
    assert_abs_diff_eq!(visibility, 0.801523520157211, epsilon = 1e-9);
}

#[test]
fn acceptance_09_invariants_and_truncation() {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let network = cs_network();

    // Unitarity.
    assert!(network.unitarity_deviation() <= 1e-10);
    assert!(ModeTransform::beamsplitter(0.3).unwrap().unitarity_deviation() <= 1e-10);

    // Norm preservation and photon-number conservation.
    let state = PureState::from_amplitudes(
        4,
        6,
        [
            ([2u32, 1, 0, 0], c(0.6, 0.1)),
            ([0, 0, 1, 2], c(-0.3, 0.4)),
            ([1, 1, 1, 0], c(0.2, -0.5)),
        ],
    )
    .unwrap();
    let moved = network.apply(&state).unwrap();
    assert_relative_eq!(moved.norm_squared(), state.norm_squared(), epsilon = 1e-10);
    for (occupation, _) in moved.iter() {
        assert_eq!(occupation.total(), 3);
    }

    // Linearity.
    let first = PureState::basis([2, 0, 1, 0], 6).unwrap();
    let second = PureState::basis([0, 1, 0, 2], 6).unwrap();
    let blend =
        PureState::superposition(&[(c(0.8, -0.2), &first), (c(0.1, 0.5), &second)]).unwrap();
    let mapped_blend = network.apply(&blend).unwrap();
    let blended_maps = PureState::superposition(&[
        (c(0.8, -0.2), &network.apply(&first).unwrap()),
        (c(0.1, 0.5), &network.apply(&second).unwrap()),
    ])
    .unwrap();
    assert_relative_eq!(mapped_blend.fidelity(&blended_maps).unwrap(), 1.0, epsilon = 1e-10);

    // Born-rule self-consistency: projective outcome weights sum to one.
    let normalized = moved.normalized().unwrap();
    let outcomes = outcome_distribution(&normalized, &[0, 1]).unwrap();
    assert_relative_eq!(outcomes.total_weight(), 1.0, epsilon = 1e-10);

    // Loss-channel weight normalization.
    let thinned = lossy_detect(&normalized, 2, 0.7).unwrap();
    assert_relative_eq!(thinned.total_weight(), 1.0, epsilon = 1e-10);

    // Efficiency 1 reproduces lossless conditioning.
    let pattern = DetectionPattern::new().with(2, 1).with(3, 0);
    let lossless = condition(&normalized, &pattern).unwrap();
    let unit_efficiency =
        herald_with_losses(&normalized, &pattern, 1.0, DetectorResolution::Full).unwrap();
    assert_relative_eq!(
        unit_efficiency.probability,
        lossless.herald_probability,
        epsilon = 1e-12
    );
    assert_eq!(unit_efficiency.branches().len(), 1);
    assert_relative_eq!(
        unit_efficiency.branches()[0]
            .state
            .fidelity(&lossless.state)
            .unwrap(),
        1.0,
        epsilon = 1e-12
    );

    // Fringe-level invariants on a coarse exact-resource grid.
    let config = ExperimentConfig {
        resource_policy: ResourceKind::Exact,
        efficiency: 0.9,
        phase_points: 8,
        ..ExperimentConfig::default()
    };
    let sweep = run_phase_sweep(&config).unwrap();
    for sample in &sweep.samples {
        assert!(sample.p_joint <= sample.p_normalized + 1e-15);
    }

    assert_check(check_truncation_insensitivity());
}

#[test]
fn acceptance_10_interference_oracles() {
    assert_check(check_oracle_fixtures());
    // The capped-at-two reading convention changes nothing here: every
    // conditioning detector is asked for zero or one photon.
    assert_eq!(resolution_convention_difference().unwrap(), 0.0);
}
