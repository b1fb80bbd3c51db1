use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rar::cli::sweep::CURVE_P0_VALUES;
use rar::cli::{
    cmd_reproduce, cmd_simulate, cmd_sweep, parse_run_file, CliError, ReproduceOptions, ReproduceTarget,
    SimulateOptions, SweepKind, SweepSettings, DEFAULT_REPS, EXIT_FAILURE, EXIT_OK,
};
use rar::trial::DEFAULT_SEED;

/// Simulate two-arm binary response-adaptive randomization designs.
#[derive(Parser)]
#[command(name = "rar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Worker threads (default: all cores).
    #[arg(long, env = "RAR_THREADS")]
    threads: Option<usize>,
    /// Master seed; decimal or 0x-prefixed hex.
    #[arg(long, value_parser = parse_seed)]
    seed: Option<u64>,
    /// Replications per scenario.
    #[arg(long)]
    reps: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenarios of a JSON run file.
    Simulate {
        run_file: PathBuf,
        /// Output CSV (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write per-replication CSVs into this directory.
        #[arg(long)]
        audit_dir: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Type-I error grids and allocation-proportion curves.
    Sweep {
        kind: SweepKind,
        /// Output CSV (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Grid spacing (defaults: 0.02 diagonal, 0.1 full, 0.01 curves).
        #[arg(long)]
        step: Option<f64>,
        /// Sample size of the simulated trials.
        #[arg(long, default_value_t = 50)]
        n: usize,
        /// Burn-in patients per arm.
        #[arg(long, default_value_t = 2)]
        burn_in_per_arm: usize,
        /// Control success rates for the proportion curves.
        #[arg(long, value_delimiter = ',', default_values_t = CURVE_P0_VALUES)]
        p0: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Rerun a published table and compare against the embedded values.
    Reproduce {
        target: ReproduceTarget,
        /// Directory for the result and report CSVs.
        #[arg(long, default_value = "results")]
        out_dir: PathBuf,
        /// Run the large trial redesign at 10^4 replications instead of 2000.
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn output(path: Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(path) => Box::new(BufWriter::new(File::create(&path).map_err(|e| CliError::Io { path, source: e })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Simulate {
            run_file,
            out,
            audit_dir,
            common,
        } => {
            let scenarios = parse_run_file(run_file)?;
            let options = SimulateOptions {
                threads: common.threads,
                seed: common.seed,
                reps: common.reps,
                audit_dir,
            };
            cmd_simulate(&scenarios, output(out)?, &options)?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            kind,
            out,
            step,
            n,
            burn_in_per_arm,
            p0,
            common,
        } => {
            let settings = SweepSettings {
                n,
                burn_in_per_arm,
                step,
                reps: common.reps.unwrap_or(DEFAULT_REPS),
                seed: common.seed.unwrap_or(DEFAULT_SEED),
                threads: common.threads,
                p0_values: p0,
            };
            cmd_sweep(kind, &settings, output(out)?)?;
            Ok(EXIT_OK)
        }
        Command::Reproduce {
            target,
            out_dir,
            full,
            common,
        } => {
            let options = ReproduceOptions {
                out_dir,
                full,
                simulate: SimulateOptions {
                    threads: common.threads,
                    seed: common.seed,
                    reps: common.reps,
                    audit_dir: None,
                },
            };
            let report = cmd_reproduce(target, &options)?;
            for row in report.failures() {
                eprintln!(
                    "FAIL {} {}: published {}, simulated {:.4}, tolerance {}",
                    row.reference.label,
                    row.reference.metric.as_str(),
                    row.reference.value,
                    row.simulated,
                    row.reference.tolerance.unwrap_or_default(),
                );
            }
            let gated = report.gated().count();
            let failed = report.failures().count();
            println!(
                "{}: {} of {gated} gated cells within tolerance, {} cells compared; results in {}",
                target.as_str(),
                gated - failed,
                report.rows.len(),
                options.out_dir.display(),
            );
            Ok(if report.passed() { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("rar: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
