//! Argument definitions, dispatch and output formatting for `hyptwist`.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyptwist::{Error, Tolerances};
use serde::Serialize;
use serde_json::Value;

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_MALFORMED: u8 = 2;
pub const EXIT_AMBIGUOUS: u8 = 3;
pub const EXIT_IDEAL_AMBIGUOUS: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "hyptwist", version, about = "Twist of lifted hyperbolic isometries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Seed for randomised commands.
    #[arg(long, env = "HYPTWIST_SEED", default_value_t = 0, global = true)]
    pub seed: u64,
    /// `||trace| - 2|` below this counts as parabolic.
    #[arg(long = "tolerance-par", value_name = "EPS", global = true)]
    pub tolerance_par: Option<f64>,
    /// Residual bound for the lemma identities.
    #[arg(long = "tolerance-res", value_name = "EPS", global = true)]
    pub tolerance_res: Option<f64>,
    /// Print progress and tolerance overrides to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Svg,
}

/// A lifted isometry: `--mat a,b,c,d` with optional `--theta`.
#[derive(Debug, Clone, Args)]
pub struct LiftArgs {
    /// Matrix entries, row-major.
    #[arg(long, allow_hyphen_values = true)]
    pub mat: Option<String>,
    /// Lift angle; the base lift when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
}

/// A pair of lifted isometries, as `--a`/`--b` (`a,b,c,d` or `a,b,c,d:theta`)
/// or as a Goldman pair `--goldman x,y,r`.
#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "X,Y,R")]
    pub goldman: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Region of a lifted isometry.
    Classify {
        #[command(flatten)]
        lift: LiftArgs,
    },
    /// Twist at a point (`x,y`, `ideal:b` or `ideal:inf`).
    Twist {
        #[command(flatten)]
        lift: LiftArgs,
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        point: String,
    },
    /// The product `b a` (apply `a` first).
    Compose {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// The commutator `[a, b]`, its region and trace checks.
    Commutator {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// The commutator pentagon of `(a, b)` at a point.
    Pentagon {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Relator product, Euler number and fundamental polygon of a
    /// representation document.
    Relator {
        #[arg(long)]
        file: PathBuf,
    },
    /// Run an invariant sweep.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Genus for `milnor-wood` and `dpoly`.
        #[arg(long, default_value_t = 1)]
        g: usize,
        /// Boundary components for `milnor-wood` and `dpoly`.
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Draw a figure in the Poincaré disk.
    Render {
        #[arg(value_enum)]
        object: RenderObject,
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderObject {
    Pentagon,
    Cpoly,
    Dpoly,
    Axes,
}

/// The JSON report written by every command.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Value,
    pub outputs: Value,
    pub residuals: Value,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
}

/// What a command produced: the report, its text rendering, an optional
/// figure and the exit status.
pub struct Outcome {
    pub report: Report,
    pub text: String,
    pub svg: Option<String>,
    pub exit: u8,
}

impl Global {
    pub fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            parabolic: self.tolerance_par.unwrap_or(d.parabolic),
            residual: self.tolerance_res.unwrap_or(d.residual),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Ambiguous(_) => EXIT_AMBIGUOUS,
        Error::IdealAmbiguous(_) => EXIT_IDEAL_AMBIGUOUS,
        _ => EXIT_MALFORMED,
    }
}

pub fn run(cli: &Cli) -> ExitCode {
    let g = &cli.global;
    let tol = g.tolerances();
    if g.verbose && tol != Tolerances::default() {
        eprintln!("tolerances: parabolic {:e}, residual {:e}", tol.parabolic, tol.residual);
    }
    let outcome = match commands::dispatch(&cli.command, g, tol) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let mut out = std::io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = match g.format {
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(&outcome.report).expect("reports serialize"))
        }
        Format::Text => write!(out, "{}", outcome.text),
        Format::Svg => match &outcome.svg {
            Some(svg) => write!(out, "{svg}"),
            None => {
                eprintln!("error: no figure for `{}`", outcome.report.command);
                return ExitCode::from(EXIT_MALFORMED);
            }
        },
    };
    ExitCode::from(outcome.exit)
}
