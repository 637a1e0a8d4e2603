use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::grid::TimeGrid;
use crate::protocol::ProtocolSpec;

#[derive(Debug, Parser)]
#[command(
    name = "csdecay",
    version,
    about = "Quantum decay of a released Calogero-Sutherland gas"
)]
pub struct Cli {
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true, env = "CSDECAY_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Survival probability over a time grid for one or more lambda values
    Scan(ScanArgs),
    /// Split the survival probability at time t into classical, memory and interference parts
    Decompose(DecomposeArgs),
    /// Check closed forms against brute-force quadrature and Monte Carlo
    Verify(VerifyArgs),
    /// Non-escape probability and one-body count in a window [-a/2, a/2]
    Observables(ObservablesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Also write a gnuplot script next to the output file
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Number of particles
    #[arg(long, short)]
    pub n: usize,

    /// Interaction strengths, comma separated
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub lambda: Vec<f64>,

    /// sudden | delayed:T0 | table:PATH
    #[arg(long, default_value = "sudden")]
    pub protocol: ProtocolSpec,

    /// lin|log:START:STOP:COUNT
    #[arg(long = "t", default_value = "log:0.01:1000:200")]
    pub grid: TimeGrid,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    /// Number of particles
    #[arg(long, short)]
    pub n: usize,

    /// Interaction strength
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,

    /// sudden | delayed:T0 | table:PATH
    #[arg(long, default_value = "sudden")]
    pub protocol: ProtocolSpec,

    /// Time at which the survival probability is decomposed
    #[arg(long, default_value_t = 15.0)]
    pub t_final: f64,

    /// Number of split times, evenly spaced over [0, t_final]
    #[arg(long, default_value_t = 301)]
    pub tau_count: usize,

    /// Keep the dynamical phase in the amplitudes
    #[arg(long)]
    pub no_gauge: bool,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Seed for the Monte Carlo streams
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Monte Carlo samples per check
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,

    /// Absolute tolerance for the Monte Carlo checks (default: three standard errors)
    #[arg(long)]
    pub tolerance: Option<f64>,

    /// Report file (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ObservablesArgs {
    /// Number of particles
    #[arg(long, short)]
    pub n: usize,

    /// Interaction strength
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,

    /// Window width
    #[arg(long, short)]
    pub a: f64,

    /// sudden | delayed:T0 | table:PATH
    #[arg(long, default_value = "sudden")]
    pub protocol: ProtocolSpec,

    /// lin|log:START:STOP:COUNT
    #[arg(long = "t", default_value = "log:0.01:1000:200")]
    pub grid: TimeGrid,

    /// Start of the slope-fit window (default: a tenth of the last time)
    #[arg(long)]
    pub fit_from: Option<f64>,

    #[command(flatten)]
    pub output: OutputArgs,
}
