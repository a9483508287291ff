//! Command-line front end: runs feedback-loop scenarios from JSON configs,
//! single protocol rounds, cloner fidelity estimates, and the recognizer.
//!
//! Exit codes: 0 success, 1 configuration error (bad flags, unreadable or
//! invalid config), 2 runtime error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use qfc_core::{
    gate_signal, monte_carlo_copy_fidelity, optimal_copy_fidelity, teleport, trajectory,
    AmplitudePair, ClassicalChannel, ExportFormat, LoopConfig, PureState, RecognitionMode,
    RngStream, Scenario, TeleportReport,
};

/// Seed fallback read when neither the flag nor the config provides one.
const SEED_ENV_VAR: &str = "QFEEDBACK_SEED";

#[derive(Parser)]
#[command(
    name = "qfc",
    version,
    about = "Quantum feedback-control loop simulator",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a teleportation feedback loop from a JSON config.
    TeleportLoop(LoopArgs),
    /// Run a cloning feedback loop from a JSON config.
    CloneLoop(LoopArgs),
    /// Teleport a single qubit state once and print the report.
    TeleportOnce {
        /// Real part of the up amplitude.
        #[arg(long, allow_hyphen_values = true)]
        alpha_re: f64,
        /// Imaginary part of the up amplitude.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha_im: f64,
        /// Real part of the down amplitude.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta_re: f64,
        /// Imaginary part of the down amplitude.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta_im: f64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Monte-Carlo estimate of the per-copy cloning fidelity.
    CloneFidelity {
        /// Total number of copies K (2..=8).
        #[arg(long)]
        k: usize,
        /// Haar-random input samples.
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the state recognizer over a JSON list of single-qubit states.
    Recognize {
        /// Path to a JSON array of {"alpha": {...}, "beta": {...}} states.
        #[arg(long)]
        states: PathBuf,
        /// State-distance threshold.
        #[arg(long)]
        d0: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Oracle)]
        mode: ModeArg,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(clap::Args)]
struct LoopArgs {
    /// Path to the scenario config.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the trajectory here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for ExportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => ExportFormat::Csv,
            FormatArg::Json => ExportFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Oracle,
    Measured,
}

impl From<ModeArg> for RecognitionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Oracle => RecognitionMode::Oracle,
            ModeArg::Measured => RecognitionMode::Measured,
        }
    }
}

enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Runtime(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::TeleportLoop(args) => run_loop(Scenario::Teleport, args),
        Command::CloneLoop(args) => run_loop(Scenario::Clone, args),
        Command::TeleportOnce {
            alpha_re,
            alpha_im,
            beta_re,
            beta_im,
            seed,
        } => teleport_once(
            Complex64::new(alpha_re, alpha_im),
            Complex64::new(beta_re, beta_im),
            resolve_seed(seed, None),
        ),
        Command::CloneFidelity { k, samples, seed } => {
            clone_fidelity(k, samples, resolve_seed(seed, None))
        }
        Command::Recognize {
            states,
            d0,
            mode,
            seed,
        } => recognize_states(&states, d0, mode.into(), resolve_seed(seed, None)),
    }
}

/// Seed precedence: flag, then config, then QFEEDBACK_SEED, then 0.
fn resolve_seed(flag: Option<u64>, config: Option<u64>) -> u64 {
    flag.or(config)
        .or_else(|| {
            std::env::var(SEED_ENV_VAR)
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0)
}

fn run_loop(expected: Scenario, args: LoopArgs) -> Result<(), CliError> {
    let mut config = LoopConfig::from_file(&args.config)
        .map_err(|e| CliError::Config(format!("{}: {e}", args.config.display())))?;
    if config.scenario != expected {
        return Err(CliError::Config(format!(
            "config declares scenario '{}' but the subcommand runs '{}'",
            config.scenario, expected
        )));
    }
    config.seed = Some(resolve_seed(args.seed, config.seed));

    let records = qfc_core::run_scenario(&config)
        .map_err(|e| CliError::Runtime(e.to_string()))?;

    let format: ExportFormat = args.format.into();
    match &args.out {
        Some(path) => trajectory::export_trajectory(&records, format, path)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display()))),
        None => {
            let rendered = match format {
                ExportFormat::Csv => trajectory::render_csv(&records),
                ExportFormat::Json => trajectory::render_json(&records),
            }
            .map_err(|e| CliError::Runtime(e.to_string()))?;
            print!("{rendered}");
            Ok(())
        }
    }
}

fn teleport_once(alpha: Complex64, beta: Complex64, seed: u64) -> Result<(), CliError> {
    let psi = PureState::single_qubit(alpha, beta)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let mut channel = ClassicalChannel::ideal();
    let mut rng = RngStream::from_seed(seed);
    let report = teleport(&psi, &mut channel, &mut rng)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    print_teleport_report(&report);
    Ok(())
}

fn print_teleport_report(report: &TeleportReport) {
    let amp = |c: Complex64| {
        format!(
            "({} {} {}i)",
            trajectory::format_sig9(c.re),
            if c.im < 0.0 { "-" } else { "+" },
            trajectory::format_sig9(c.im.abs())
        )
    };
    println!("outcome: {}", report.outcome);
    println!(
        "outcome probability: {}",
        trajectory::format_sig9(report.outcome_probability)
    );
    println!(
        "bob state: {}|up> + {}|down>",
        amp(report.bob_state.amplitude(0)),
        amp(report.bob_state.amplitude(1))
    );
    println!(
        "fidelity to input: {}",
        trajectory::format_sig9(report.fidelity_to_input)
    );
    println!("correction applied: {}", report.correction_applied);
}

fn clone_fidelity(k: usize, samples: usize, seed: u64) -> Result<(), CliError> {
    if !(2..=qfc_core::cloner::MAX_CLONE_QUBITS).contains(&k) {
        return Err(CliError::Config(format!(
            "copy count {k} out of range (2..={})",
            qfc_core::cloner::MAX_CLONE_QUBITS
        )));
    }
    if samples == 0 {
        return Err(CliError::Config("sample count must be positive".into()));
    }
    let measured = monte_carlo_copy_fidelity(k, samples, seed)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    println!("copies: {k}");
    println!("samples: {samples}");
    println!(
        "measured mean copy fidelity: {}",
        trajectory::format_sig9(measured)
    );
    println!(
        "analytic optimum (2K+1)/(3K): {}",
        trajectory::format_sig9(optimal_copy_fidelity(k))
    );
    Ok(())
}

fn recognize_states(
    path: &Path,
    d0: f64,
    mode: RecognitionMode,
    seed: u64,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let pairs: Vec<AmplitudePair> = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let copies: Vec<PureState> = pairs
        .iter()
        .map(|p| p.to_state())
        .collect::<qfc_core::Result<_>>()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let mut rng = RngStream::from_seed(seed);
    let report = gate_signal(&copies, d0, mode, &mut rng)
        .map_err(|e| CliError::Config(e.to_string()))?;

    println!("copies: {}", report.distances.len());
    println!("threshold d0: {}", trajectory::format_sig9(report.threshold));
    let distances: Vec<String> = report
        .distances
        .iter()
        .map(|&d| trajectory::format_sig9(d))
        .collect();
    println!("distances: {}", distances.join(", "));
    println!(
        "max distance: {}",
        trajectory::format_sig9(report.max_distance)
    );
    println!("signal: {}", report.signal);
    Ok(())
}
