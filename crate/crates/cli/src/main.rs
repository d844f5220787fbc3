//! Command-line front end for the elliptica library.

mod commands;
mod config;
mod cx;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use commands::MeshFormat;
use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Write(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Write(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Write(m) => write!(f, "write failure: {m}"),
        }
    }
}

impl From<elliptica::Error> for CliError {
    fn from(e: elliptica::Error) -> Self {
        use elliptica::Error::*;
        match e {
            InvalidLattice(_) | InvalidPolicy(_) | InvalidInput(_) | InvalidParameter(_) | InvalidMap(_)
            | UnsupportedShape(_) | ConstructionPrecondition(_) | NotSquare { .. } => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "elliptica", version, about = "Elliptic functions on symmetric tori and a doubly periodic minimal field")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write the JSON report to this file
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct MeshOut {
    /// Mesh output file (.obj or .ply)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Mesh format; inferred from the extension when omitted
    #[arg(long, value_enum)]
    format: Option<MeshFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate ℘ and ℘′ at points, optionally over a CSV grid
    Wp {
        #[command(flatten)]
        common: Common,
        /// Complex point such as 0.5+0.5i (repeatable)
        #[arg(long = "z", allow_hyphen_values = true)]
        z: Vec<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Grid points per side for --csv
        #[arg(long, default_value_t = 32)]
        grid: usize,
    },
    /// Evaluate the Gauss-map function and its identities
    Gamma {
        #[command(flatten)]
        common: Common,
        #[arg(long = "z", allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Certify the induced Möbius maps of the torus involutions
    Involutions {
        #[command(flatten)]
        common: Common,
    },
    /// Classify the torus and reduce points
    Torus {
        #[command(flatten)]
        common: Common,
        #[arg(long = "z", allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Solve the period problem of the field
    Periods {
        #[command(flatten)]
        common: Common,
    },
    /// Replicate the field and probe it for self-intersections
    Catenoid {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        mesh: MeshOut,
        /// End cutoff used for the embedding probe
        #[arg(long, default_value_t = 2.0)]
        probe_cutoff: f64,
    },
    /// Mesh the fundamental region
    Mesh {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        mesh: MeshOut,
        /// Export the symmetric piece instead of the fundamental region
        #[arg(long)]
        piece: bool,
    },
    /// Run every invariant suite
    VerifyAll {
        #[command(flatten)]
        common: Common,
    },
}

fn points(raw: &[String]) -> Result<Vec<Complex64>, CliError> {
    raw.iter()
        .map(|s| cx::parse_complex(s).map_err(|e| CliError::Validation(format!("bad complex number {s:?}: {e}"))))
        .collect()
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("ELLIPTICA_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("ELLIPTICA_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(e.to_string()))
}

fn run(cli: Cli) -> Result<(commands::Report, Option<PathBuf>), CliError> {
    threads()?;
    Ok(match cli.command {
        Command::Wp { common, z, csv, grid } => {
            let cfg = load(&common)?;
            (commands::wp(&cfg, &points(&z)?, csv.as_deref(), grid)?, common.report)
        }
        Command::Gamma { common, z } => (commands::gamma(&load(&common)?, &points(&z)?)?, common.report),
        Command::Involutions { common } => (commands::involutions(&load(&common)?)?, common.report),
        Command::Torus { common, z } => (commands::torus(&load(&common)?, &points(&z)?)?, common.report),
        Command::Periods { common } => (commands::periods(&load(&common)?)?, common.report),
        Command::Catenoid { common, mesh, probe_cutoff } => {
            let cfg = load(&common)?;
            (commands::catenoid(&cfg, mesh.out.as_deref(), mesh.format, probe_cutoff)?, common.report)
        }
        Command::Mesh { common, mesh, piece } => {
            let cfg = load(&common)?;
            (commands::mesh(&cfg, mesh.out.as_deref(), mesh.format, piece)?, common.report)
        }
        Command::VerifyAll { common } => (commands::verify_all(&load(&common)?)?, common.report),
    })
}

fn write_report(path: &Path, json: &str) -> Result<(), CliError> {
    std::fs::write(path, format!("{json}\n"))
        .map_err(|e| CliError::Write(format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(report, path)| {
        let mut out = std::io::stdout().lock();
        if let Err(e) = writeln!(out, "{}", report.json) {
            if e.kind() != std::io::ErrorKind::BrokenPipe {
                return Err(CliError::Write(format!("stdout: {e}")));
            }
        }
        if let Some(p) = path {
            write_report(&p, &report.json)?;
        }
        Ok(report.accepted)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("numerical acceptance failed; see the report");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
