//! `dfp`: batch front end for the lattice solvers, kernels and special
//! functions of `dfp-lattice`.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{GridArgs, IoArgs, ModelArgs};
use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "dfp",
    version,
    about = "Time-changed Dirac-Fokker-Planck lattice solvers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve an initial field (default: the normalized delta) to time t.
    #[command(allow_negative_numbers = true)]
    Evolve(EvolveArgs),
    /// Write a convolution kernel on the lattice.
    #[command(allow_negative_numbers = true)]
    Kernel(KernelArgs),
    /// Evaluate the damped Klein-Gordon ansatz.
    #[command(allow_negative_numbers = true)]
    Kg(KgArgs),
    /// Both sides of the Levy subordination identity.
    #[command(allow_negative_numbers = true)]
    Subordinate(SubordinateArgs),
    /// Evaluate one special function and print JSON.
    #[command(allow_negative_numbers = true)]
    Specfun(SpecfunArgs),
    /// Mellin-Barnes reconstruction of the K kernel at every site.
    #[command(allow_negative_numbers = true)]
    MellinBarnes(MellinBarnesArgs),
    /// CSV of d^2 and the components of z at every momentum node.
    #[command(allow_negative_numbers = true)]
    DumpMultiplier(DumpArgs),
    /// Run the invariant suites and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Fourier multipliers, exact in time.
    Spectral,
    /// Classical RK4 time stepping in momentum space.
    Oracle,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub io: IoArgs,
    /// Initial field in the CSV schema; its grid must agree with any grid flags.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, value_enum, default_value = "spectral")]
    pub method: Method,
    /// RK4 steps for --method oracle.
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    /// F_H = evolution of the delta.
    Dfp,
    /// Heat kernel through the Laplacian multiplier.
    Heat,
    /// Heat kernel through the Bessel product.
    HeatBessel,
    /// N_H, the rescaled heat kernel at sigma^2 t^{2H}/2.
    N,
    /// K^(beta) through trigonometric multipliers.
    K,
    /// K^(beta) through Wright series multipliers.
    KWright,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long, value_enum, default_value = "dfp")]
    pub kind: KernelKind,
    #[arg(long)]
    pub t: Option<f64>,
    /// Heat time for --kind heat and heat-bessel (default sigma^2 t^{2H}/2).
    #[arg(long)]
    pub tau: Option<f64>,
    /// 0 for the cosine kernel, 1 for the sinc kernel.
    #[arg(long)]
    pub beta: Option<u8>,
}

#[derive(Debug, Args)]
pub struct KgArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Gaussian damping p >= 0.
    #[arg(long)]
    pub p: Option<f64>,
    /// Time step of the residual check.
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SubordinateArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Check the identity node by node in momentum space.
    #[arg(long)]
    pub modewise: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    Gamma,
    BesselI,
    MittagLeffler,
    WrightCos,
    WrightSinc,
    Levy,
    HartmanWatson,
    WilsonSigma,
}

#[derive(Debug, Args)]
pub struct SpecfunArgs {
    #[arg(long = "fn", value_enum)]
    pub function: Function,
    /// Argument of gamma and bessel-i.
    #[arg(long)]
    pub x: Option<f64>,
    /// Imaginary part of the gamma argument.
    #[arg(long, default_value_t = 0.0)]
    pub x_im: f64,
    /// Order of bessel-i.
    #[arg(long)]
    pub k: Option<i64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub lambda_im: f64,
    /// Stable index of levy, Hurst exponent of wilson-sigma.
    #[arg(long)]
    pub hurst: Option<f64>,
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MellinBarnesArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub beta: Option<u8>,
    /// Abscissa of the vertical contour (default H - beta/2).
    #[arg(long)]
    pub c: Option<f64>,
    /// Half-height T of the truncated contour.
    #[arg(long)]
    pub truncation: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Clifford,
    Lattice,
    Spectral,
    Operators,
    Specfun,
    Solver,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Print the table as JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("DFP_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "DFP_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    // A pool built by an earlier call in the same process stays in place.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Evolve(a) => commands::evolve(&a),
        Command::Kernel(a) => commands::kernel(&a),
        Command::Kg(a) => commands::kg(&a),
        Command::Subordinate(a) => commands::subordinate(&a),
        Command::Specfun(a) => commands::specfun(&a),
        Command::MellinBarnes(a) => commands::mellin_barnes(&a),
        Command::DumpMultiplier(a) => commands::dump_multiplier(&a),
        Command::Verify(a) => verify::run(&a),
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code: 0 on success, 1 on numerical errors or failed checks, 2 on
/// usage errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("dfp: {e}");
            e.exit_code()
        }
    }
}
