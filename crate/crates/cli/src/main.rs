use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hs2_cli::commands::{self, Grid, Target, Window};
use hs2_cli::{print, tolerance, CliError};
use hs2_core::JOptions;

/// Conservative solutions of the two-component Hunter-Saxton system.
///
/// State files hold either an Eulerian state (`[u] [rho] [mu.density] [mu.atoms]`),
/// a Lagrangian state (`[y] [U] [H] [r]`) or a relabeling (`[f]`). Inputs are
/// validated with tolerance HS2_TOL (default 1e-9). Exit status is 0 on success,
/// 1 on validation failure and 2 on malformed input.
#[derive(Debug, Parser)]
#[command(name = "hs2", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolves a state to time t (T_t for Eulerian input, S_t for Lagrangian input).
    Evolve {
        state: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Output file (standard output if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Writes `t,x,u,rho,cdf` samples of the evolved state as CSV.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Plot grid `a,b,n`; defaults to the state's breakpoint span widened by 1.
        #[arg(long, requires = "plot", allow_hyphen_values = true)]
        grid: Option<Grid>,
    },
    /// Maps a state to Eulerian or Lagrangian coordinates.
    Transform {
        state: PathBuf,
        #[arg(long, value_enum)]
        to: Coordinates,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reports the wave-breaking times of a state.
    Breaking { state: PathBuf },
    /// Brackets the distance of two evolved states and checks the stability estimate.
    Metric {
        a: PathBuf,
        b: PathBuf,
        /// Comma-separated times.
        #[arg(long, value_delimiter = ',', default_value = "0", allow_hyphen_values = true)]
        t: Vec<f64>,
        /// Skips the coordinate-descent refinement of the upper bound.
        #[arg(long)]
        coarse: bool,
    },
    /// Writes a closed-form example (ex11, ex26, ex34, ex36, ex47) at time t.
    Example {
        name: String,
        /// Time, or the stretching parameter eps for ex47.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Checks every invariant of a state or relabeling.
    Validate { state: PathBuf },
    /// Weak-form residuals of the evolved state against three test functions.
    Residual {
        state: PathBuf,
        #[arg(long)]
        t_max: f64,
        /// Number of equispaced time nodes including 0 and t_max.
        #[arg(long, default_value_t = 65)]
        nodes: usize,
        /// Center of the test functions.
        #[arg(long, allow_hyphen_values = true, requires = "radius")]
        center: Option<f64>,
        /// Radius of the test functions.
        #[arg(long, requires = "center")]
        radius: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Coordinates {
    Eulerian,
    Lagrangian,
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|source| CliError::Write { path: path.to_owned(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let tol = tolerance(std::env::var("HS2_TOL").ok().as_deref())?;
    match cli.command {
        Command::Evolve { state, t, output, plot, grid } => {
            let s0 = commands::load_valid(&state, tol)?;
            let st = commands::evolve(&s0, t)?;
            if let Some(plot) = plot {
                let view = commands::eulerian_view(&st)?;
                let grid = grid.unwrap_or_else(|| Grid::around(&view));
                emit(Some(&plot), &commands::plot_csv(t, &view, &grid))?;
            }
            emit(output.as_deref(), &print(&st))
        }
        Command::Transform { state, to, output } => {
            let target = match to {
                Coordinates::Eulerian => Target::Eulerian,
                Coordinates::Lagrangian => Target::Lagrangian,
            };
            let s = commands::load_valid(&state, tol)?;
            emit(output.as_deref(), &print(&commands::transform(&s, target)?))
        }
        Command::Breaking { state } => {
            emit(None, &commands::breaking(&commands::load_valid(&state, tol)?)?)
        }
        Command::Metric { a, b, t, coarse } => {
            let (sa, sb) = (commands::load_valid(&a, tol)?, commands::load_valid(&b, tol)?);
            let opts = JOptions { refine: !coarse, ..JOptions::default() };
            let (rows, notes) = commands::metric(&sa, &sb, &t, &opts)?;
            for note in notes {
                eprintln!("note: {note}");
            }
            emit(None, &commands::metric_table(&rows))?;
            match rows.iter().find(|r| !r.satisfied) {
                Some(r) => Err(CliError::Check(format!(
                    "stability estimate fails at t = {}: {} > {}",
                    r.t, r.lower, r.bound
                ))),
                None => Ok(()),
            }
        }
        Command::Example { name, t, output } => {
            emit(output.as_deref(), &print(&commands::example(&name, t)?))
        }
        Command::Validate { state } => {
            let s = commands::load_valid(&state, tol)?;
            emit(None, &commands::summary(&s, tol))
        }
        Command::Residual { state, t_max, nodes, center, radius } => {
            let s = commands::load_valid(&state, tol)?;
            let window = center.zip(radius).map(|(center, radius)| Window { center, radius });
            emit(None, &commands::residual(&s, t_max, nodes, window)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            for line in e.diagnostics() {
                eprintln!("{line}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
