use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dqc1::config::{load_config, Experiment, ExperimentConfig, Format};
use dqc1::results::{render, write_results};
use dqc1::runner::{run_experiment, verify_rows};
use dqc1::spec::UnitarySpec;
use dqc1::{CliError, Result};
use dqc1_core::circuit::{ControlQubit, Dqc1Instance};
use dqc1_core::entpower::{entpower_alpha, entpower_standard};
use dqc1_core::measurement::estimate_trace;
use dqc1_core::numerics::SeededRng;

#[derive(Parser)]
#[command(name = "dqc1", version, about = "One-clean-qubit circuit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when neither this nor the config sets one.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Replace the shots grid with a single count.
        #[arg(long)]
        shots: Option<u64>,
    },
    /// Estimate the normalized trace from simulated control-qubit shots.
    EstimateTrace {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value = "haar")]
        unitary: String,
        #[arg(long)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Closed-form entangling power for a polarized control.
    Entpower {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value = "haar")]
        unitary: String,
        /// Seed for `haar` unitaries.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check a theorem numerically against its closed form.
    Verify {
        theorem: Theorem,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the rows.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Theorem1,
    Theorem2,
    Theorem3,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run {
            config,
            seed,
            out,
            format,
            n,
            alpha,
            shots,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(n) = n {
                cfg.n = n;
            }
            if let Some(alpha) = alpha {
                cfg.alpha = Some(alpha);
                cfg.bloch = None;
                if !cfg.alphas.is_empty() {
                    cfg.alphas = vec![alpha];
                }
            }
            if let Some(shots) = shots {
                cfg.shots = vec![shots];
            }
            if let Some(format) = format {
                cfg.format = format;
            }
            if out.is_some() {
                cfg.output = out;
            }
            let rows = run_experiment(&cfg)?;
            emit(&rows, cfg.output.as_deref(), cfg.format)
        }
        Command::EstimateTrace {
            n,
            alpha,
            unitary,
            shots,
            seed,
        } => {
            let inst = instance(n, alpha, &unitary, seed)?;
            let est = estimate_trace(&inst, shots, &mut SeededRng::new(seed, 1)).map_err(core_error)?;
            let t = inst.weighted_trace();
            let (se_re, se_im) = est.trace_stderr();
            let report = serde_json::json!({
                "n": n,
                "alpha": alpha,
                "unitary": unitary,
                "shots": shots,
                "seed": seed,
                "estimate": {"re": est.trace_estimate.re, "im": est.trace_estimate.im},
                "stderr": {"re": se_re, "im": se_im},
                "exact": {"re": t.re, "im": t.im},
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("finite values"));
            Ok(())
        }
        Command::Entpower { n, alpha, unitary, seed } => {
            let inst = instance(n, alpha, &unitary, seed)?;
            let u = inst.unitary();
            let report = serde_json::json!({
                "n": n,
                "alpha": alpha,
                "unitary": unitary,
                "standard": entpower_standard(u),
                "entpower": entpower_alpha(u, alpha).map_err(core_error)?,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("finite values"));
            Ok(())
        }
        Command::Verify {
            theorem,
            n,
            samples,
            seed,
            out,
            format,
        } => {
            let experiment = match theorem {
                Theorem::Theorem1 => Experiment::VerifyTheorem1,
                Theorem::Theorem2 => Experiment::VerifyTheorem2,
                Theorem::Theorem3 => Experiment::VerifyTheorem3,
            };
            let mut cfg = ExperimentConfig::new(experiment, n);
            cfg.samples = Some(samples);
            cfg.seed = seed;
            match experiment {
                Experiment::VerifyTheorem2 => cfg.alphas = (1..=10).map(|k| k as f64 / 10.0).collect(),
                Experiment::VerifyTheorem3 => cfg.rho = "random".into(),
                _ => {}
            }
            let rows = run_experiment(&cfg)?;
            if let Some(path) = out {
                write_results(&rows, &path, format)?;
            }
            let summary = verify_rows(experiment, &rows).map_err(CliError::Verification)?;
            println!("{summary}");
            Ok(())
        }
    }
}

fn instance(n: usize, alpha: f64, unitary: &str, seed: u64) -> Result<Dqc1Instance> {
    if n == 0 || n > dqc1_core::tol::MAX_QUBITS {
        return Err(CliError::Validation(format!(
            "n = {n} is outside 1..={}",
            dqc1_core::tol::MAX_QUBITS
        )));
    }
    let control = ControlQubit::alpha(alpha).map_err(|e| CliError::Validation(e.to_string()))?;
    let spec: UnitarySpec = unitary.parse()?;
    let u = spec.build(n, &mut SeededRng::new(seed, 0))?;
    Dqc1Instance::new(u, control).map_err(core_error)
}

/// Input errors from the library map to exit code 2, the rest to 1.
fn core_error(e: dqc1_core::Error) -> CliError {
    CliError::core("input", e)
}

fn emit(rows: &[dqc1::ResultRow], out: Option<&std::path::Path>, format: Format) -> Result<()> {
    match out {
        Some(path) => write_results(rows, path, format),
        None => {
            let bytes = render(rows, format)?;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
