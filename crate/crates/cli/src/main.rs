//! `autolex` command line: distances, stability tables, list-length curves,
//! divergence times, trees and synthetic families.
//!
//! Exit status: 0 success, 1 usage, 2 input format, 3 computation.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use autolex::lexstat::SynonymPolicy;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "autolex", version, about = "Automated lexicostatistics on wordlists")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Tab-separated wordlist: header "language<TAB>meaning...", one row per language
    file: PathBuf,

    /// How to compare cells holding several forms
    #[arg(long, default_value = "first", value_parser = parse_policy)]
    synonyms: SynonymPolicy,
}

#[derive(Subcommand)]
enum Command {
    /// Lexical distance matrix as CSV
    Distances {
        #[command(flatten)]
        input: Input,
        /// Meanings to average over: "all" or "top:<n>" (n most stable)
        #[arg(long, default_value = "all")]
        meanings: String,
    },
    /// Per-meaning stability table, most stable first
    Stability {
        #[command(flatten)]
        input: Input,
    },
    /// Correlation c(n) between top-n and full-list distances, as "n,c" lines
    Correlate {
        #[command(flatten)]
        input: Input,
        /// Comma-separated list lengths (default 10, 20, ..., M)
        #[arg(long)]
        grid: Option<String>,
    },
    /// Robinson-Foulds difference between top-n and full-list trees, as "n,rf" lines
    RfCurve {
        #[command(flatten)]
        input: Input,
        /// Comma-separated list lengths (default 10, 20, ..., M)
        #[arg(long)]
        grid: Option<String>,
    },
    /// UPGMA tree in Newick format
    Tree {
        #[command(flatten)]
        input: Input,
        /// Build from the n most stable meanings only
        #[arg(long)]
        top_n: Option<usize>,
        /// Replacement rate; branch lengths become divergence times
        #[arg(long, conflicts_with = "calibrate")]
        epsilon: Option<f64>,
        /// Fix the rate from a dated pair, as LANG_A:LANG_B:TIME
        #[arg(long)]
        calibrate: Option<String>,
    },
    /// Divergence-time matrix as CSV
    Times {
        #[command(flatten)]
        input: Input,
        /// Replacement rate per unit time
        #[arg(long)]
        epsilon: f64,
        /// Use the n most stable meanings only
        #[arg(long)]
        top_n: Option<usize>,
    },
    /// Simulate a two-rate family; TSV wordlist on standard output
    Synth(SynthArgs),
}

#[derive(Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 20)]
    languages: usize,
    #[arg(long, default_value_t = 100)]
    meanings: usize,
    /// Replacement rate of the slow class
    #[arg(long, default_value_t = 0.05)]
    slow: f64,
    /// Replacement rate of the fast class
    #[arg(long, default_value_t = 1.0)]
    fast: f64,
    /// Share of meanings in the slow class
    #[arg(long, default_value_t = 0.5)]
    fraction_slow: f64,
    /// Per-character substitution rate
    #[arg(long, default_value_t = 0.1)]
    mutation: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the wordlist here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write the true tree (Newick) here
    #[arg(long)]
    tree_out: Option<PathBuf>,
    /// Write the true per-meaning rates (CSV) here
    #[arg(long)]
    rates_out: Option<PathBuf>,
}

fn parse_policy(s: &str) -> Result<SynonymPolicy, String> {
    s.parse()
}

/// A failed run: the stage that failed, a message and the exit status.
#[derive(Debug)]
pub struct Failure {
    stage: &'static str,
    message: String,
    code: u8,
}

impl Failure {
    pub fn usage(stage: &'static str, message: impl ToString) -> Self {
        Self { stage, message: message.to_string(), code: 1 }
    }

    pub fn format(stage: &'static str, message: impl ToString) -> Self {
        Self { stage, message: message.to_string(), code: 2 }
    }

    pub fn compute(stage: &'static str, message: impl ToString) -> Self {
        Self { stage, message: message.to_string(), code: 3 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Distances { input, meanings } => commands::distances(&input.file, input.synonyms, &meanings),
        Command::Stability { input } => commands::stability(&input.file, input.synonyms),
        Command::Correlate { input, grid } => commands::correlate(&input.file, input.synonyms, grid.as_deref()),
        Command::RfCurve { input, grid } => commands::rf_curve(&input.file, input.synonyms, grid.as_deref()),
        Command::Tree { input, top_n, epsilon, calibrate } => {
            commands::tree(&input.file, input.synonyms, top_n, epsilon, calibrate.as_deref())
        }
        Command::Times { input, epsilon, top_n } => commands::times(&input.file, input.synonyms, epsilon, top_n),
        Command::Synth(args) => commands::synth(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let message = f.message.replace('\n', " ");
            eprintln!("autolex: {}: {message}", f.stage);
            ExitCode::from(f.code)
        }
    }
}
