//! `pnn`: batch front end for the beta-shift toolkit.
//!
//! Every verb reads a system descriptor (`--system`, default the full shift
//! on three letters) and writes JSON, CSV or plain text. Outputs depend only
//! on the flags and input files and carry the hash of their configuration.
//!
//! Exit codes: 0 ok, 1 i/o, 2 construction failure, 3 schedule failure,
//! 4 malformed input, 5 precision failure.

mod artifact;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pnn_core::Error;

#[derive(Parser)]
#[command(name = "pnn", version, about = "Particularly non-normal sequences in beta-shifts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct SystemArg {
    /// System descriptor JSON; defaults to {"kind":"integer","N":3}.
    #[arg(long)]
    pub system: Option<PathBuf>,
}

#[derive(Args, Clone)]
pub struct ScheduleArgs {
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    #[arg(long, default_value_t = 4)]
    pub stages: u32,
    /// Constant k in the tolerance max(eps_min(n), k / sqrt n) of Gamma.
    #[arg(long, default_value_t = 1.0, conflicts_with = "epsilon")]
    pub epsilon_k: f64,
    /// Fixed tolerance for Gamma instead of the k / sqrt n rule.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Growth condition n_j j >= base^j l_0^(j).
    #[arg(long, default_value_t = 2.0)]
    pub growth: f64,
    #[arg(long, value_enum, default_value_t = FixedWordArg::Balanced)]
    pub fixed_word: FixedWordArg,
}

#[derive(ValueEnum, Clone, Copy)]
pub enum FixedWordArg {
    Balanced,
    Champernowne,
}

#[derive(Subcommand)]
enum Command {
    /// Greedy beta-expansion of a rational x in [0, 1].
    Expand {
        #[command(flatten)]
        system: SystemArg,
        /// p/q or a decimal.
        #[arg(long)]
        x: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Whether a word is in the language of the shift.
    Admissible {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        word: String,
    },
    /// Counts (and optionally lists) the admissible words of length n.
    Language {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Cylinder masses under nu and mu.
    Measure {
        #[command(flatten)]
        system: SystemArg,
        /// One word; otherwise every admissible word of --length.
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 1)]
        length: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Connector for a pair of words, or the whole connector table.
    Glue {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, requires = "b")]
        a: Option<String>,
        #[arg(long, requires = "a")]
        b: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The family Gamma(nu, n).
    Gamma {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0, conflicts_with = "epsilon")]
        epsilon_k: f64,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Builds the construction and writes a prefix with its annotations.
    Construct {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        schedule: ScheduleArgs,
        /// Draw free blocks with this seed instead of round robin.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Frequency verdicts for a word file.
    Analyze {
        #[command(flatten)]
        system: SystemArg,
        #[arg(long)]
        input: PathBuf,
        /// annotations.json written by construct.
        #[arg(long)]
        annotations: Option<PathBuf>,
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
        #[arg(long, default_value_t = 0.2)]
        window: f64,
        /// Keep every stride-th position in the CSV traces (0: about 10^4 rows).
        #[arg(long, default_value_t = 0)]
        stride: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dimension ledger, critical exponent trend and cover-sum checks.
    Dimension {
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        schedule: ScheduleArgs,
        #[arg(long, default_value_t = 100)]
        covers: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [0.3, 0.45])]
        s: Vec<f64>,
        /// Largest explicit block set built for the covers.
        #[arg(long, default_value_t = 1 << 18)]
        max_words: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A failed run: exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Construction(_) | Error::Policy(_) => 2,
            Error::Schedule(_) => 3,
            Error::Precision(_) => 5,
            Error::Domain(_) | Error::Parse(_) | Error::Model(_) | Error::Unsupported(_) | Error::Specification(_) => 4,
        };
        Self { code, message: e.to_string() }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("PNN_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    use commands::*;
    match cli.command {
        Command::Expand { system, x, n, output } => expand(&system, &x, n, output.as_deref()),
        Command::Admissible { system, word } => admissible(&system, &word),
        Command::Language { system, n, list, output } => language(&system, n, list, output.as_deref()),
        Command::Measure { system, word, length, output } => measure(&system, word.as_deref(), length, output.as_deref()),
        Command::Glue { system, a, b, output } => glue(&system, a.as_deref().zip(b.as_deref()), output.as_deref()),
        Command::Gamma { system, n, epsilon_k, epsilon, list, output } => {
            gamma(&system, n, policy(epsilon_k, epsilon), list, output.as_deref())
        }
        Command::Construct { system, schedule, seed, out } => construct(&system, &schedule, seed, &out),
        Command::Analyze { system, input, annotations, tolerance, window, stride, out } => {
            analyze(&system, &input, annotations.as_deref(), tolerance, window, stride, &out)
        }
        Command::Dimension { system, schedule, covers, seed, s, max_words, out } => {
            dimension(&system, &schedule, covers, seed, &s, max_words, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("pnn: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
