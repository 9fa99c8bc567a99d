//! `mbqc`: statistics, translation, simulation and demo generation for
//! measurement patterns, circuits and scheme patterns.
//!
//! Exit codes: 0 success, 2 invalid input, 3 failed verification.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "mbqc",
    version,
    about = "Measurement patterns and fan-out circuits"
)]
pub struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Override of the irrational base angle, as `p/q` (a multiple of π).
    #[arg(long, env = "MBQC_ALPHA0", global = true)]
    pub alpha0: Option<String>,
    /// Largest Choi distance accepted as equal.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol: f64,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Pattern,
    Fanout,
    Strict,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Branch {
    All,
    Sample,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    Parity,
    Fanout,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Pattern,
    Circuit,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Size, depth and classical-depth report.
    Stats { file: String },
    /// Translate a pattern, circuit or scheme pattern.
    Compile {
        file: String,
        #[arg(long, value_enum)]
        target: Target,
        /// Scheme for scheme-pattern input, overriding the file header.
        #[arg(long)]
        scheme: Option<String>,
        #[arg(short, long)]
        output: Option<String>,
        /// Compare the channels of input and output.
        #[arg(long)]
        verify: bool,
    },
    /// Run on a product input and list branches.
    Sim {
        file: String,
        /// One of `0 1 + -` per input qubit; all `0` by default.
        #[arg(long)]
        input: Option<String>,
        #[arg(long, value_enum, default_value_t = Branch::All)]
        branch: Branch,
    },
    /// Emit a parity or fan-out construction.
    Demo {
        #[arg(value_enum)]
        kind: Demo,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Model::Pattern)]
        model: Model,
        #[arg(short, long)]
        output: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
