use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::files::SetKind;

/// Numerical ranges of rectangular complex matrices.
#[derive(Debug, Parser)]
#[command(name = "nrange", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a range and write it as a region file.
    Compute(ComputeArgs),
    /// Run a property suite and print a pass/fail table.
    Verify(VerifyArgs),
    /// Regenerate one of the bundled figures.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Matrix file (JSON or CSV).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub set: SetKind,
    /// Rank for `--set phik`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Isometry for `--set wl|wh`; defaults to the leading coordinate frame.
    #[arg(long = "H", value_name = "PATH")]
    pub h: Option<PathBuf>,
    /// Weight matrix for `--set wnorm`.
    #[arg(long = "B", value_name = "PATH")]
    pub b: Option<PathBuf>,
    #[arg(long, default_value_t = 720)]
    pub angles: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Accepted for uniformity; every computed set is deterministic.
    #[arg(long, env = "NRANGE_SEED")]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Prop1,
    Prop5,
    Prop7,
    Prop8,
    Prop9,
    Prop12,
    Prop13,
    Prop14,
    Prop16,
}

/// Closed-form radius to inflate by `1e-3` before checking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Perturb {
    W,
    Wnorm,
    Ellipse,
    Phik,
    Lambdak,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long, env = "NRANGE_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, value_enum, hide = true)]
    pub perturb: Option<Perturb>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Sec2Example,
    Sec3Example,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_enum)]
    pub figure: Figure,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, env = "NRANGE_SEED", default_value_t = 0)]
    pub seed: u64,
}
