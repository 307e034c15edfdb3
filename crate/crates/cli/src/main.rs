mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

#[derive(Parser)]
#[command(
    name = "weylarray",
    version,
    about = "Polaritonic bands, Weyl nodes and Fermi arcs of 3D atomic arrays"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Bands along a high-symmetry path.
    Bands(Common),
    /// Density of states on a uniform k-grid.
    Dos(Common),
    /// Equifrequency contours on a plane cut.
    Contours(Common),
    /// Weyl nodes with chirality and isolation.
    Weyl(Common),
    /// Isolation and light-cone status over a parameter grid.
    PhaseDiagram(Common),
    /// (100) slab bands and Fermi arcs.
    Slab(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Worker threads; overrides the config.
    #[arg(long)]
    workers: Option<usize>,
    /// Also write lattice-sum convergence reports.
    #[arg(long)]
    diagnostics: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Bands,
    Dos,
    Contours,
    Weyl,
    PhaseDiagram,
    Slab,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Bands => "bands",
            Command::Dos => "dos",
            Command::Contours => "contours",
            Command::Weyl => "weyl",
            Command::PhaseDiagram => "phase-diagram",
            Command::Slab => "slab",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Numerical(#[from] weylarray_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    command: &'a str,
    message: String,
}

fn run(command: Command, args: &Common) -> Result<Vec<PathBuf>, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let config = RunConfig::parse(&text).map_err(CliError::Config)?;
    config.validate(command).map_err(CliError::Config)?;
    let workers = args.workers.or(config.workers);
    if workers == Some(0) {
        return Err(CliError::Config("workers must be at least 1".into()));
    }
    let sha = format!("{:x}", Sha256::digest(text.as_bytes()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    let files = pool.install(|| commands::execute(command, &config, &sha, args.diagnostics))?;
    output::write_all(&config.output_dir, &files)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Sub::Bands(a) => (Command::Bands, a),
        Sub::Dos(a) => (Command::Dos, a),
        Sub::Contours(a) => (Command::Contours, a),
        Sub::Weyl(a) => (Command::Weyl, a),
        Sub::PhaseDiagram(a) => (Command::PhaseDiagram, a),
        Sub::Slab(a) => (Command::Slab, a),
    };
    match run(command, args) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let report = ErrorReport {
                error: ErrorBody {
                    kind: e.kind(),
                    command: command.name(),
                    message: e.to_string(),
                },
            };
            eprintln!(
                "{}",
                serde_json::to_string(&report).expect("error report serializes")
            );
            ExitCode::from(e.exit_code())
        }
    }
}
