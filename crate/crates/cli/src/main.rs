//! `cvuncert`: uncertainty bounds, entanglement checks and region geometry
//! for covariance matrices of continuous-variable quantum states.
//!
//! Exit codes: 0 ok or inconclusive, 1 usage or parse error, 2 invalid
//! physical input, 3 entangled, 4 solver did not converge.

mod commands;
mod input;
mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cv_uncertainty::inequalities::InequalityKind;
use report::Format;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_PHYSICS: u8 = 2;
pub const EXIT_ENTANGLED: u8 = 3;
pub const EXIT_NO_CONVERGENCE: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "cvuncert",
    version,
    about = "Uncertainty relations for continuous quantum variables"
)]
pub struct Cli {
    /// Reduced Planck constant; overrides the value stored in input files.
    #[arg(long, global = true, env = "UNCERT_HBAR")]
    pub hbar: Option<f64>,

    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symplectic spectrum and admissibility of a covariance matrix.
    Check(FileArg),
    /// Lower bound of a named functional from the consistency conditions.
    Minimize(MinimizeArgs),
    /// Entanglement verdict from a separable-state bound.
    Entangle(EntangleArgs),
    /// Single-mode region geometry and hole witnesses.
    #[command(subcommand)]
    Region(RegionCommand),
    /// Williamson normal form of a positive-definite matrix.
    Williamson(FileArg),
}

#[derive(Debug, Args)]
pub struct FileArg {
    /// Covariance file (JSON).
    #[arg(long, short)]
    pub file: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionalName {
    Detrs,
    Robdof,
    Prodrs,
    Factheis,
    Mixedprod,
    Corineq,
    Fourepr,
    Duan,
    Triplesep,
    Sumheis,
    Crossheis,
}

impl FunctionalName {
    pub fn kind(self) -> InequalityKind {
        match self {
            FunctionalName::Detrs => InequalityKind::DetRs,
            FunctionalName::Robdof => InequalityKind::RobDof,
            FunctionalName::Prodrs => InequalityKind::ProdRs,
            FunctionalName::Factheis => InequalityKind::FactHeis,
            FunctionalName::Mixedprod => InequalityKind::MixedProd,
            FunctionalName::Corineq => InequalityKind::CorIneq,
            FunctionalName::Fourepr => InequalityKind::FourEpr,
            FunctionalName::Duan => InequalityKind::Duan,
            FunctionalName::Triplesep => InequalityKind::TripleSep,
            FunctionalName::Sumheis => InequalityKind::SumHeis,
            FunctionalName::Crossheis => InequalityKind::CrossHeis,
        }
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct FunctionalParams {
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Exponent of `mixedprod`.
    #[arg(long)]
    pub n: Option<f64>,
    /// Number of modes for `detrs`.
    #[arg(long)]
    pub modes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MinimizeArgs {
    pub functional: FunctionalName,
    #[command(flatten)]
    pub params: FunctionalParams,
    /// Also run the random-restart numerical oracle.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Compare against the first excited levels.
    #[arg(long)]
    pub check_excited: bool,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct EntangleArgs {
    #[arg(long, short)]
    pub file: PathBuf,
    #[arg(long)]
    pub criterion: FunctionalName,
    #[command(flatten)]
    pub params: FunctionalParams,
    /// Margin below the separable bound, in units of hbar.
    #[arg(long, default_value_t = cv_uncertainty::inequalities::VERDICT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum RegionCommand {
    /// CSV points `(u, v)` of the `w = 0` cross-section of sheet `n`.
    Slice {
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 3.0)]
        vmax: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Mixture of two boundary points reproducing an interior triple.
    Decompose {
        #[arg(long, allow_negative_numbers = true)]
        u: f64,
        #[arg(long, allow_negative_numbers = true)]
        v: f64,
        #[arg(long, allow_negative_numbers = true)]
        w: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        angle: f64,
    },
    /// Superposition weights and symplectic map reaching a target covariance.
    HoleWitness(FileArg),
}

/// Output of a command plus the exit status it requests.
pub struct Outcome {
    pub body: Vec<u8>,
    pub code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(&out.body)
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
