//! Command-line front end for the self-similar solution toolkit.
//!
//! Subcommands:
//!
//! * `profile`      — solve the auxiliary profile problem, emit CSV + JSON
//! * `calibrate`    — find the amplitude giving a unit-mass profile
//! * `similarity`   — evaluate u(t,x) slices and delta diagnostics
//! * `validate-pde` — time-step the full nonlocal PDE against the
//!   closed-form similarity evolution
//! * `check-bounds` — verify the analytic inequalities over a sweep
//!
//! Every run writes its data files plus a `manifest.json` recording the
//! exact inputs and outcomes. Data payloads are deterministic: identical
//! configurations produce byte-identical CSV/JSON (the manifest carries
//! the only timestamp).
//!
//! Exit codes: 0 success, 2 usage error, 3 parameter validation error,
//! 4 numerical failure.

mod commands;
mod manifest;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "selfsim", version, about = "Self-similar solutions of a nonlocal replicator-dynamics equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    /// Drift coefficient of the payoff operator (a > 0).
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Local relative error tolerance.
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,
    /// Local absolute error tolerance.
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    /// Truncation abscissa.
    #[arg(long)]
    s_max: Option<f64>,
    /// Tail floor as a fraction of the amplitude.
    #[arg(long, default_value_t = 1e-12)]
    q_floor_frac: f64,
    /// Step attempt budget.
    #[arg(long, default_value_t = 10_000_000)]
    max_steps: usize,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    /// Output directory (falls back to $SELFSIM_OUT_DIR, then ".").
    #[arg(long)]
    out_dir: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the auxiliary profile problem q(s; a, mu, A).
    Profile {
        #[command(flatten)]
        solver: SolverArgs,
        /// Parameter mu (must exceed 1/3).
        #[arg(long)]
        mu: f64,
        /// Initial amplitude q(0).
        #[arg(long, value_name = "A", default_value_t = 1.0)]
        amplitude: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Find A_beta with K + (a/2)Λ = beta; the profile then has unit mass.
    Calibrate {
        #[command(flatten)]
        solver: SolverArgs,
        /// Calibration target beta > 0.
        #[arg(long)]
        beta: f64,
        /// Relative tolerance on |Q(A) - beta| / beta.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate the self-similar solution at the requested times.
    Similarity {
        #[command(flatten)]
        solver: SolverArgs,
        /// Calibration target beta > 0.
        #[arg(long)]
        beta: f64,
        /// Comma-separated list of times, all positive.
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        /// Half-width of the sampling window in x.
        #[arg(long, default_value_t = 30.0)]
        x_max: f64,
        /// Sample count per slice (odd).
        #[arg(long, default_value_t = 1201)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evolve the full nonlocal PDE from the similarity state and compare.
    ValidatePde {
        #[command(flatten)]
        solver: SolverArgs,
        /// Calibration target beta > 0.
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        /// Start time of the validation window.
        #[arg(long, default_value_t = 1.0)]
        t0: f64,
        /// End time of the validation window.
        #[arg(long, default_value_t = 1.5)]
        t_end: f64,
        /// Node count (odd).
        #[arg(long, default_value_t = 2001)]
        n: usize,
        /// Half-width of the spatial domain.
        #[arg(long, default_value_t = 30.0)]
        x_max: f64,
        /// Safety factor on the stability step bound.
        #[arg(long, default_value_t = 0.9)]
        cfl: f64,
        /// Optional comma-separated times at which to dump u snapshots.
        #[arg(long, value_delimiter = ',')]
        snapshot_t: Vec<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check the analytic inequalities over a parameter sweep.
    CheckBounds {
        #[command(flatten)]
        solver: SolverArgs,
        /// Comma-separated drift coefficients.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0])]
        a_list: Vec<f64>,
        /// Comma-separated mu values.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 3.0])]
        mu_list: Vec<f64>,
        /// Comma-separated amplitudes.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 1.0, 10.0])]
        amplitude_list: Vec<f64>,
        /// Envelope samples per solve.
        #[arg(long, default_value_t = 50)]
        envelope_samples: usize,
        /// Also sweep amplitudes at (a, mu) = (1, 1) for the limit trends.
        #[arg(long)]
        with_limits: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match commands::run(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                commands::CliError::Solver(e) if e.is_validation() => 3,
                commands::CliError::Solver(_) => 4,
                commands::CliError::Io(_) => 4,
            }
        }
    };
    std::process::exit(code);
}
