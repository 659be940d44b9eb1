//! Command-line front end: gate tables, producer working points,
//! measurement demos, fringe sweeps, and the verification suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use singlerail::{
    cs_gate_ideal, run_phase_sweep, superposition_measurement, superposition_producer,
    working_point, Complex64, ExperimentConfig, QubitAmplitudes, ResourceKind, Result,
    TwoQubitAmplitudes,
};

#[derive(Parser)]
#[command(
    name = "singlerail",
    version,
    about = "Simulator for heralded single-rail photonic logic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the controlled-sign truth table with herald probabilities.
    CsTable,
    /// Print the superposition producer's working point for a drive amplitude.
    Sp {
        /// Coherent drive amplitude (nonzero, |chi| < 1).
        #[arg(long, default_value_t = -0.33714, allow_negative_numbers = true)]
        chi: f64,
        /// Total photon-number cutoff.
        #[arg(long, default_value_t = 6)]
        cutoff: u32,
    },
    /// Print superposition-measurement statistics for |+> and |-> inputs.
    MeasureDemo {
        /// Detector efficiency in [0, 1].
        #[arg(long, default_value_t = 1.0)]
        efficiency: f64,
    },
    /// Run a phase sweep of the test circuit and report fringe visibility.
    Sweep(SweepArgs),
    /// Run the full verification suite and report pass/fail per check.
    Verify,
}

#[derive(Args)]
struct SweepArgs {
    /// Config file (TOML, fields as in the default config); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Coherent drive amplitude for producer resources.
    #[arg(long, allow_negative_numbers = true)]
    chi: Option<f64>,
    /// Detector efficiency in [0, 1].
    #[arg(long)]
    efficiency: Option<f64>,
    /// Number of phase grid points over [0, 2π).
    #[arg(long)]
    points: Option<u32>,
    /// Total photon-number cutoff.
    #[arg(long)]
    cutoff: Option<u32>,
    /// Where the resource qubits come from.
    #[arg(long, value_enum)]
    resources: Option<ResourceArg>,
    /// Write fringe samples to this CSV file (plus a .meta sidecar).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ResourceArg {
    /// Ideal (|0> + |1>)/sqrt(2) resource states.
    Exact,
    /// Resources heralded by the conditional producer.
    Producer,
}

impl From<ResourceArg> for ResourceKind {
    fn from(arg: ResourceArg) -> Self {
        match arg {
            ResourceArg::Exact => ResourceKind::Exact,
            ResourceArg::Producer => ResourceKind::Producer,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::CsTable => cs_table(),
        Command::Sp { chi, cutoff } => producer_report(chi, cutoff),
        Command::MeasureDemo { efficiency } => measure_demo(efficiency),
        Command::Sweep(args) => sweep(&args),
        Command::Verify => return verify(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn cs_table() -> Result<()> {
    println!("input    output      herald");
    for bits in [(0u32, 0u32), (1, 0), (0, 1), (1, 1)] {
        let one = |on: bool| Complex64::new(f64::from(u32::from(on)), 0.0);
        let input = TwoQubitAmplitudes::new(
            one(bits == (0, 0)),
            one(bits == (1, 0)),
            one(bits == (0, 1)),
            one(bits == (1, 1)),
        );
        let result = cs_gate_ideal(&input, 4)?;
        let amplitude = result.state.amplitude([bits.0, bits.1]);
        let sign = if amplitude.re < 0.0 { "-" } else { "+" };
        println!(
            "|{}{}>     {}|{}{}>       {:.6}",
            bits.0, bits.1, sign, bits.0, bits.1, result.herald_probability
        );
    }
    Ok(())
}

fn producer_report(chi: f64, cutoff: u32) -> Result<()> {
    let point = working_point(chi)?;
    let output = superposition_producer(chi, 1.0, cutoff)?;
    println!("chi                  {chi}");
    println!("reflectivity         {:.12}", point.eta);
    println!("herald probability   {:.12}", point.herald_probability);
    println!("second-order ratio   {:.12}", point.second_order_ratio);
    println!("third-order ratio    {:.12}", output.order_ratio(3)?);
    Ok(())
}

fn measure_demo(efficiency: f64) -> Result<()> {
    let resource = singlerail::plus_state(4)?;
    for (label, input) in [("|+>", QubitAmplitudes::plus()), ("|->", QubitAmplitudes::minus())] {
        let result = superposition_measurement(&input.state(4)?, &resource, efficiency)?;
        println!("input {label} at detector efficiency {efficiency}:");
        println!("  plus          {:.6}", result.plus);
        println!("  minus         {:.6}", result.minus);
        println!("  inconclusive  {:.6}", result.inconclusive);
        println!("  readings:");
        for (occupation, probability) in &result.outcomes {
            println!("    {occupation}  {probability:.6}");
        }
    }
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_toml_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(chi) = args.chi {
        config.chi = chi;
    }
    if let Some(efficiency) = args.efficiency {
        config.efficiency = efficiency;
    }
    if let Some(points) = args.points {
        config.phase_points = points;
    }
    if let Some(cutoff) = args.cutoff {
        config.cutoff = cutoff;
    }
    if let Some(resources) = args.resources {
        config.resource_policy = resources.into();
    }
    if let Some(out) = &args.out {
        config.output_path = Some(out.clone());
    }
    let result = run_phase_sweep(&config)?;
    println!(
        "swept {} phases with {} resources at efficiency {}",
        result.samples.len(),
        config.resource_policy,
        config.efficiency
    );
    println!("visibility {:.6}", result.visibility);
    if let Some(path) = &config.output_path {
        println!("samples written to {}", path.display());
    }
    Ok(())
}

fn verify() -> ExitCode {
    let reports = singlerail::run_all_checks();
    let mut all_passed = true;
    for report in &reports {
        let status = if report.passed { "PASS" } else { "FAIL" };
        all_passed &= report.passed;
        println!("{status}  {:<26} {}", report.name, report.details);
    }
    match singlerail::resolution_convention_difference() {
        Ok(difference) => println!(
            "info  {:<26} full vs capped-at-two readings at 90% efficiency differ by {difference:.2e}",
            "detector-resolution"
        ),
        Err(e) => {
            println!("FAIL  detector-resolution       {e}");
            all_passed = false;
        }
    }
    if all_passed {
        println!("all checks passed");
        ExitCode::SUCCESS
    } else {
        println!("some checks failed");
        ExitCode::FAILURE
    }
}
