use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qmaxcut::generate::{random_graph, Model, Weights};
use qmaxcut::graph::parse_graph;
use qmaxcut::report::{
    render_reproduce_text, render_text, run_reproduce, run_solve, Algorithm, OracleMode,
    Reproduction, SolveOptions,
};

/// Quantum Max Cut approximation algorithms, bounds and exact checks.
///
/// Worker threads follow RAYON_NUM_THREADS.
#[derive(Parser)]
#[command(name = "qmaxcut", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run algorithms on an edge-list file and report values and bounds.
    Solve {
        path: PathBuf,
        /// Comma-separated subset; all when omitted.
        #[arg(long, value_delimiter = ',')]
        algorithms: Vec<Algorithm>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Rounding attempts for the hyperplane and rank-3 roundings.
        #[arg(long, default_value_t = 200)]
        attempts: usize,
        /// Grid size for the angle search on non-regular graphs.
        #[arg(long, default_value_t = 2048)]
        theta_grid: usize,
        #[arg(long, value_enum, default_value_t = OracleMode::Auto)]
        oracle: OracleMode,
        /// SDP embedding rank.
        #[arg(long)]
        rank: Option<usize>,
        /// Relative SDP stopping tolerance.
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
        /// Random starts for the product-state search.
        #[arg(long, default_value_t = 20)]
        starts: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a random instance as an edge list.
    Random {
        #[arg(long)]
        n: usize,
        /// gnp, regular-D, star or cycle.
        #[arg(long, value_parser = parse_model_name)]
        model: ModelName,
        /// Edge probability for gnp.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, value_enum, default_value_t = WeightKind::Uniform)]
        weights: WeightKind,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute numerical constants and batch checks.
    Reproduce {
        #[arg(value_enum)]
        which: Reproduction,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Instances for the batch check.
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy)]
enum ModelName {
    Gnp,
    Regular(usize),
    Star,
    Cycle,
}

fn parse_model_name(s: &str) -> Result<ModelName, String> {
    match s {
        "gnp" => Ok(ModelName::Gnp),
        "star" => Ok(ModelName::Star),
        "cycle" => Ok(ModelName::Cycle),
        _ => s
            .strip_prefix("regular-")
            .and_then(|d| d.parse().ok())
            .map(ModelName::Regular)
            .ok_or_else(|| format!("unknown model `{s}`; expected gnp, regular-D, star or cycle")),
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightKind {
    Uniform,
    Exp,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Solve {
            path,
            algorithms,
            seed,
            attempts,
            theta_grid,
            oracle,
            rank,
            tol,
            starts,
            format,
            out,
        } => {
            let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let g = parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            let opts = SolveOptions {
                algorithms: if algorithms.is_empty() {
                    Algorithm::ALL.to_vec()
                } else {
                    algorithms
                },
                seed,
                attempts,
                theta_grid,
                oracle,
                rank,
                tol,
                product_starts: starts,
            };
            let report = run_solve(&g, &opts).map_err(|e| e.to_string())?;
            let body = match format {
                Format::Json => {
                    serde_json::to_string_pretty(&report).map_err(|e| e.to_string())? + "\n"
                }
                Format::Text => render_text(&report),
            };
            emit(&body, out.as_ref())?;
            Ok(report.exit_code())
        }
        Command::Random {
            n,
            model,
            p,
            weights,
            seed,
            out,
        } => {
            let model = match model {
                ModelName::Gnp => Model::Gnp { p },
                ModelName::Regular(d) => Model::Regular { d },
                ModelName::Star => Model::Star,
                ModelName::Cycle => Model::Cycle,
            };
            let weights = match weights {
                WeightKind::Uniform => Weights::Uniform,
                WeightKind::Exp => Weights::Exp,
            };
            let g = random_graph(n, model, weights, seed).map_err(|e| e.to_string())?;
            emit(&g.to_edge_list(), out.as_ref())?;
            Ok(0)
        }
        Command::Reproduce {
            which,
            seed,
            count,
            format,
            out,
        } => {
            let report = run_reproduce(which, seed, count).map_err(|e| e.to_string())?;
            let body = match format {
                Format::Json => {
                    serde_json::to_string_pretty(&report).map_err(|e| e.to_string())? + "\n"
                }
                Format::Text => render_reproduce_text(&report),
            };
            emit(&body, out.as_ref())?;
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("qmaxcut: {msg}");
            ExitCode::from(1)
        }
    }
}
