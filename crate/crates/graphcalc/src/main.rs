use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use graphcalc::commands::{self, CheckArgs, Outcome};
use graphcalc::suites::Suite;
use graphcalc_core::cycles::DEFAULT_CYCLE_LIMIT;
use graphcalc_core::VertexId;

/// Vector calculus on finite simple graphs.
///
/// Exit codes: 0 success, 1 invalid input, 2 verification failure,
/// 3 cycle limit exceeded.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Directed edges of the graph and their adjacency.
    Tangent {
        #[arg(long)]
        graph: PathBuf,
        /// Also write the tangent graph as DOT to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Boundary vertices, edges and inward normal of a subgraph.
    Boundary {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        subgraph: PathBuf,
        /// Also write the graph with the subgraph highlighted as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Gradient, curl and harmonic parts of a vector field.
    Decompose {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        field: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CYCLE_LIMIT)]
        cycle_limit: usize,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Simple cycles and the circulation system.
    Cycles {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CYCLE_LIMIT)]
        cycle_limit: usize,
    },
    /// Green's functions, for one pole or all of them.
    Greens {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pole: Option<VertexId>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Randomized identity checks.
    Check {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_CYCLE_LIMIT)]
        cycle_limit: usize,
    },
    /// Integrate Maxwell's equations; prints JSON lines.
    Maxwell {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CYCLE_LIMIT)]
        cycle_limit: usize,
    },
}

fn run(cmd: Command) -> graphcalc::Result<Outcome> {
    match cmd {
        Command::Tangent { graph, dot } => commands::tangent(&graph, dot.as_deref()),
        Command::Boundary { graph, subgraph, dot } => commands::boundary(&graph, &subgraph, dot.as_deref()),
        Command::Decompose { graph, field, cycle_limit, tolerance } => {
            commands::decompose(&graph, &field, cycle_limit, tolerance)
        }
        Command::Cycles { graph, cycle_limit } => commands::cycles(&graph, cycle_limit),
        Command::Greens { graph, pole, tolerance } => commands::greens(&graph, pole, tolerance),
        Command::Check { graph, suite, trials, seed, tolerance, cycle_limit } => {
            commands::check(&graph, &CheckArgs { suite, trials, seed, tolerance, cycle_limit })
        }
        Command::Maxwell { scenario, cycle_limit } => commands::maxwell(&scenario, cycle_limit),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit with 2, which is reserved for verification failures
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            println!("{}", out.payload);
            for line in &out.diagnostics {
                eprintln!("{line}");
            }
            if out.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
