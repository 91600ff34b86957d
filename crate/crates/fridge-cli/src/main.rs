//! `fridge` — three-qubit refrigerator simulator.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 verification
//! failure, 3 numerical divergence.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "fridge",
    about = "Three-qubit self-contained quantum refrigerator: exact steady state, \
             master-equation dynamics, heat currents, and Carnot benchmarking",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form stationary report (coefficients, state, currents,
    /// efficiency, Carnot reference, stationarity residual) as JSON.
    Steady {
        /// Parameter file: flat JSON with exactly E1, E3, g, p1, p2, p3, Tc, Tr, Th.
        #[arg(long)]
        config: PathBuf,
        /// Also write the report to this path.
        #[arg(long = "json-out")]
        json_out: Option<PathBuf>,
    },
    /// Integrate the master equation from the thermal product state and write
    /// the sampled trajectory as CSV.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        /// Integration horizon.
        #[arg(long = "t-end")]
        t_end: f64,
        /// Sampling interval (default: t_end / 1000).
        #[arg(long = "sample-every")]
        sample_every: Option<f64>,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate the stationary quantities along a one-parameter grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Which parameter to vary: E1, E3, g, p1, p2, p3, Tc, Tr, Th.
        #[arg(long)]
        vary: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        /// Number of grid points (>= 2).
        #[arg(long)]
        steps: usize,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the randomized cross-check battery (analytic vs null space,
    /// stationarity residual, thermodynamic laws, efficiency identity).
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Number of random parameter sets (default 100).
        #[arg(long)]
        samples: Option<usize>,
        /// Seed for the ChaCha8 parameter stream (default 42).
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Process failure carrying its exit code.
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn verification(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn divergence(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap would exit 2 on usage errors; the contract reserves 2 for
            // verification failures, so usage problems map to 1 here.
            let rendered = err.render();
            if err.use_stderr() {
                eprint!("{rendered}");
            } else {
                print!("{rendered}");
            }
            return if err.exit_code() == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };

    let result = match cli.command {
        Command::Steady { config, json_out } => commands::steady(&config, json_out.as_deref()),
        Command::Evolve {
            config,
            t_end,
            sample_every,
            out,
        } => commands::evolve(&config, t_end, sample_every, &out),
        Command::Sweep {
            config,
            vary,
            from,
            to,
            steps,
            out,
        } => commands::sweep(&config, &vary, from, to, steps, &out),
        Command::Verify {
            config,
            samples,
            seed,
        } => commands::verify(&config, samples.unwrap_or(100), seed.unwrap_or(42)),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("fridge: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
