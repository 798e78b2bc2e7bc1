use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "qrigid", version, about = "Quantum graph rigidity certificates")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Scalar backend.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Float)]
    pub backend: BackendArg,
    /// Trace used for Gram matrices: normalized, plain or delta-form.
    #[arg(long, global = true, default_value = "normalized")]
    pub trace_mode: String,
    /// Relative singular-value threshold for numerical rank.
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    /// Minimum σ_min/σ_max for a float certificate.
    #[arg(long, global = true)]
    pub cert_margin: Option<f64>,
    /// Random seed.
    #[arg(long, global = true, default_value_t = qrigid::RngSpec::DEFAULT_SEED)]
    pub seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify one tuple: exit 0 if certified rigid, 1 if inconclusive.
    Certify(CertifyArgs),
    /// Monte Carlo certification over an (n, d) grid.
    Sweep(SweepArgs),
    /// Check the four quantum-graph axioms.
    CheckAxioms(AxiomArgs),
    /// Convert between Kraus/superoperator form and Choi matrices.
    Choi(ChoiArgs),
    /// Print a bundled fixture.
    Fixture(FixtureArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "source")]
pub struct CertifySource {
    /// Bundled fixture name.
    #[arg(long)]
    pub fixture: Option<String>,
    /// Tuple JSON file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Sample a random tuple of size n with d matrices.
    #[arg(long, num_args = 2, value_names = ["N", "D"])]
    pub sample: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub source: CertifySource,
    /// Subtract traces before certifying (implied by --fixture).
    #[arg(long)]
    pub project_trace: bool,
    /// Shape of sampled matrices: generic, zero-diagonal or diagonal.
    #[arg(long, default_value = "generic")]
    pub shape: String,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Values of n: `3..8` (inclusive), `3,5,7` or `4`.
    #[arg(long, default_value = "3..8")]
    pub n: String,
    /// Values of d, same syntax; defaults to 2..n²-3 for each n.
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long, default_value = "generic")]
    pub shape: String,
    /// Record wall-clock seconds per cell (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
    /// Skip the closure cross-check of certified trials.
    #[arg(long)]
    pub no_closure: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SystemArg {
    /// `S = ℂ1`.
    Trivial,
    /// `S = M_n`.
    Full,
}

#[derive(Args, Debug)]
pub struct AxiomArgs {
    #[arg(long, value_enum, conflicts_with = "input")]
    pub system: Option<SystemArg>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Superoperator JSON (`rep`) or traceless tuple JSON (`matrices`).
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    ToChoi,
    FromChoi,
}

#[derive(Args, Debug)]
pub struct ChoiArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Direction::ToChoi)]
    pub direction: Direction,
}

#[derive(Args, Debug)]
pub struct FixtureArgs {
    #[arg(long, default_value = qrigid::fixtures::PAPER_N7_D4)]
    pub name: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli.global, &out.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(global: &Global, text: &str) -> std::io::Result<()> {
    match &global.output {
        Some(path) => fs::write(path, text),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
