//! Command-line front end for the witness toolkit.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bewit::cli::{self, OutputFormat, RunConfig};
use bewit::io as bewit_io;
use bewit::states::StateId;

#[derive(Parser)]
#[command(
    name = "bewit",
    about = "Correlation witnesses for four-dimensional quantum messages: \
             state catalog, entanglement criteria, protocol simulation, and \
             see-saw bounds"
)]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// RNG seed for randomized searches.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Number of see-saw restarts.
    #[arg(long, global = true, default_value_t = 200)]
    restarts: usize,

    /// Relative convergence tolerance of the see-saw objective.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Iteration cap per see-saw restart.
    #[arg(long, global = true, default_value_t = 2000)]
    max_iter: usize,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format where a command supports both.
    #[arg(long, global = true, default_value = "csv")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Dump a catalog state (or the whole catalog) as JSON.
    States {
        /// me | werner-as | werner-loc | r6 | r8 | bpd | sentis | rho3x3 | asym:<v>
        #[arg(long)]
        state: Option<String>,
    },
    /// Entanglement-criteria report.
    Criteria {
        #[arg(long)]
        state: Option<String>,
    },
    /// Generate witness coefficients as CSV.
    WitnessGen {
        /// canonical, or a state name to tailor the witness to.
        #[arg(long, default_value = "canonical")]
        witness: String,
    },
    /// Simulate all 4096 protocol correlators for a state.
    Simulate {
        #[arg(long)]
        state: String,
    },
    /// See-saw optimization of a witness over message strategies.
    Seesaw {
        /// canonical, a state name, or a path to a coefficient CSV.
        #[arg(long, default_value = "canonical")]
        witness: String,
        /// Restrict to classical messages (basis preparations, diagonal
        /// observables).
        #[arg(long)]
        classical: bool,
    },
    /// Negativity, CCNR and visibility thresholds for the catalog.
    Table2,
    /// Closed-form versus direct criteria for high-dimensional noise.
    Highdim {
        /// Comma-separated visibilities, or n:<count> for a uniform grid.
        #[arg(long, default_value = "n:21")]
        v_grid: String,
        /// Comma-separated dimensions; `inf` adds the limit rows.
        #[arg(long, default_value = "4,5,6,inf")]
        dims: String,
    },
}

fn run(args: &Args) -> bewit::Result<String> {
    let format: OutputFormat = args.format.parse()?;
    let config = RunConfig {
        seed: args.seed,
        restarts: args.restarts,
        tol: args.tol,
        max_iter: args.max_iter,
        format,
    };
    let parse_state = |s: &Option<String>| -> bewit::Result<Option<StateId>> {
        s.as_deref().map(str::parse).transpose()
    };
    match &args.command {
        Command::States { state } => cli::cmd_states(parse_state(state)?),
        Command::Criteria { state } => cli::cmd_criteria(parse_state(state)?, config.format),
        Command::WitnessGen { witness } => cli::cmd_witness_gen(witness),
        Command::Simulate { state } => cli::cmd_simulate(state.parse()?),
        Command::Seesaw { witness, classical } => {
            let coefficients = if std::path::Path::new(witness).exists() {
                bewit_io::witness_from_csv(&std::fs::read_to_string(witness)?)?
            } else {
                cli::builtin_witness(witness)?
            };
            cli::cmd_seesaw(&config, &coefficients, *classical)
        }
        Command::Table2 => cli::cmd_table2(config.format),
        Command::Highdim { v_grid, dims } => {
            cli::cmd_highdim(&cli::parse_v_grid(v_grid)?, &cli::parse_dims(dims)?)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();

    // BEWIT_THREADS caps the worker pool; restarts reduce deterministically
    // so the thread count never changes results.
    if let Ok(threads) = std::env::var("BEWIT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }

    match run(&args) {
        Ok(output) => {
            let write_result = match &args.out {
                Some(path) => std::fs::write(path, output.as_bytes()),
                None => std::io::stdout().write_all(output.as_bytes()),
            };
            if let Err(e) = write_result {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
