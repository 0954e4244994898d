//! Batch front end for the `calderon2d` toolkit.

pub mod commands;
pub mod config;
pub mod expr;
pub mod output;

use calderon2d::ErrorClass;
use clap::{Parser, ValueEnum};
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone)]
pub struct CliError {
    pub class: ErrorClass,
    pub msg: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError { class: ErrorClass::Config, msg: msg.into() }
    }

    /// Process exit status: 1 config, 2 numeric guard, 3 solver.
    pub fn exit_code(&self) -> i32 {
        match self.class {
            ErrorClass::Config => 1,
            ErrorClass::Guard => 2,
            ErrorClass::Solver => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl std::error::Error for CliError {}

impl From<calderon2d::Error> for CliError {
    fn from(e: calderon2d::Error) -> Self {
        CliError { class: e.class(), msg: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Dirichlet problem with the configured boundary data.
    Forward,
    /// Dirichlet-to-Neumann matrix.
    Dtn,
    /// CGO solutions at one point for a list of h.
    CgoBuild,
    /// Carleman ratio over a list of h.
    CarlemanCheck,
    /// Grid reconstruction of V₁ - V₂.
    Reconstruct,
    /// CGO scaling slopes and one point recovery.
    Convergence,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Forward => "forward",
            Command::Dtn => "dtn",
            Command::CgoBuild => "cgo-build",
            Command::CarlemanCheck => "carleman-check",
            Command::Reconstruct => "reconstruct",
            Command::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "calderon2d", version, about = "Inverse Schrödinger experiments on planar conformal domains")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides `out` in the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Also write the mesh to this path.
    #[arg(long)]
    pub mesh_out: Option<PathBuf>,
    /// Also write the DtN matrix to this path.
    #[arg(long)]
    pub dtn_out: Option<PathBuf>,
    /// Nodal CSV `idx,value` replacing V₁.
    #[arg(long)]
    pub potential: Option<PathBuf>,
    /// `x,y`
    #[arg(long, allow_negative_numbers = true)]
    pub point: Option<String>,
    /// Comma-separated list of h.
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub sign: Option<i32>,
}

pub use commands::run;
