//! `helmholtz6`: solves, refinement sweeps, wavenumber sweeps, matrix analysis
//! and pollution studies for the compact sixth-order Helmholtz schemes.
//!
//! Exit codes: 0 success, 1 solver failure, 2 configuration error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn message(&self) -> String {
        match self {
            CliError::Config(m) | CliError::Solver(m) => m.clone(),
            CliError::Io(e) => e.to_string(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<helmholtz6::Error> for CliError {
    fn from(e: helmholtz6::Error) -> Self {
        use helmholtz6::Error as E;
        match e {
            E::Breakdown { .. } | E::NotConverged { .. } | E::Singular { .. } => CliError::Solver(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "helmholtz6", version, about = "Compact sixth-order Helmholtz experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one problem on one grid and report the error norms.
    Run(Flags),
    /// Grid-refinement study: error norms and observed orders per grid.
    Sweep(Flags),
    /// Both schemes at a fixed grid over a list of wave numbers.
    Ksweep(Flags),
    /// Structural checks on the assembled matrix (JSON report).
    Analyze(Flags),
    /// Both schemes on grids scaled by the pollution rule N = C K^(7/6).
    Pollution(Flags),
}

/// Every flag mirrors a config-file key; flags win over the file.
#[derive(Args, Debug, Default)]
struct Flags {
    /// Config file of key=value lines (keys as the long flags, with '_' for '-').
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the resolved configuration as key=value and exit.
    #[arg(long)]
    print_config: bool,
    /// Problem: p1..p7, zero2 or zero3.
    #[arg(long)]
    problem: Option<String>,
    /// Odd integer l (p1, p2, p5) or x frequency (p4).
    #[arg(long, allow_hyphen_values = true)]
    l: Option<String>,
    /// y frequency m (p4).
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    /// Wave number K (p3, p4, p6, p7, zero2, zero3).
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    /// Plane-wave direction for p7 as three comma-separated numbers.
    #[arg(long, allow_hyphen_values = true)]
    zeta: Option<String>,
    /// new, baseline, or (sweep only) both.
    #[arg(long)]
    scheme: Option<String>,
    /// Cells along x (run, ksweep, analyze).
    #[arg(long)]
    n: Option<String>,
    /// Comma-separated cells along x (sweep).
    #[arg(long)]
    ns: Option<String>,
    /// Comma-separated wave numbers (ksweep, pollution).
    #[arg(long)]
    ks: Option<String>,
    /// Base grid of the pollution rule (default 20).
    #[arg(long)]
    base_n: Option<String>,
    /// Base wave number of the pollution rule (default 10).
    #[arg(long)]
    base_k: Option<String>,
    /// Linear solver: bicgstab2 (default) or direct.
    #[arg(long)]
    method: Option<String>,
    /// Absolute residual tolerance (default: the problem's).
    #[arg(long)]
    tol: Option<String>,
    /// Iteration cap for bicgstab2 (default 10 x unknowns).
    #[arg(long)]
    max_iter: Option<String>,
    /// Output format: csv, json or table.
    #[arg(long)]
    format: Option<String>,
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    output: Option<String>,
    /// Sweep only: write one file per (problem, scheme) into this directory.
    #[arg(long)]
    out_dir: Option<String>,
    /// Permit grids above 1024 cells per side in 2D or 128 in 3D.
    #[arg(long)]
    allow_large: bool,
    /// Report zero seconds so artifacts are byte-stable.
    #[arg(long)]
    no_timing: bool,
    /// Random loads per analysis check (default 100).
    #[arg(long)]
    trials: Option<String>,
    /// Seed of the analysis loads (default 1).
    #[arg(long)]
    seed: Option<String>,
}

impl Flags {
    fn to_config(&self) -> Result<RunConfig, CliError> {
        let mut c = RunConfig::default();
        let pairs = [
            ("problem", &self.problem),
            ("l", &self.l),
            ("m", &self.m),
            ("k", &self.k),
            ("zeta", &self.zeta),
            ("scheme", &self.scheme),
            ("n", &self.n),
            ("ns", &self.ns),
            ("ks", &self.ks),
            ("base_n", &self.base_n),
            ("base_k", &self.base_k),
            ("method", &self.method),
            ("tol", &self.tol),
            ("max_iter", &self.max_iter),
            ("format", &self.format),
            ("output", &self.output),
            ("out_dir", &self.out_dir),
            ("trials", &self.trials),
            ("seed", &self.seed),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                c.set(key, v)?;
            }
        }
        if self.allow_large {
            c.allow_large = Some(true);
        }
        if self.no_timing {
            c.no_timing = Some(true);
        }
        Ok(c)
    }

    fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                RunConfig::parse(&text)?
            }
            None => RunConfig::default(),
        };
        Ok(file.overlay(&self.to_config()?))
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let (name, flags) = match &cli.command {
        Command::Run(f) => ("run", f),
        Command::Sweep(f) => ("sweep", f),
        Command::Ksweep(f) => ("ksweep", f),
        Command::Analyze(f) => ("analyze", f),
        Command::Pollution(f) => ("pollution", f),
    };
    let config = flags.resolve()?;
    if flags.print_config {
        print!("{}", config.to_text());
        return Ok(());
    }
    commands::execute(name, &config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("helmholtz6: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
