mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Pi,
    Mn,
}

/// Analysis of monoids presented by parameterized rewriting rules.
///
/// Exit status: 0 for success or a positive answer, 1 for a negative answer
/// or a refuted check, 2 for usage errors and violated preconditions.
#[derive(Debug, Parser)]
#[command(name = "speciallab", version)]
pub struct Cli {
    /// Built-in family.
    #[arg(long, value_enum, global = true, requires = "n")]
    family: Option<Family>,
    /// Family index.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Presentation file.
    #[arg(long, global = true, conflicts_with = "family")]
    file: Option<PathBuf>,
    /// Largest parameter value instantiated.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    i_bound: u32,
    /// Longest inverse searched for [default: twice the longest rule instance].
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    witness_bound: Option<u64>,
    /// Largest exponent in slice experiments.
    #[arg(long, global = true, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    e_bound: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Termination and bounded local confluence.
    Check,
    /// Leftmost normal form of a word.
    Nf { word: String },
    /// Equality of two words in the monoid.
    Eq { u: String, v: String },
    /// Membership of `u#rev(v)` in the word problem.
    Wp { query: String },
    /// Left, right and two-sided invertibility of a word.
    Invertible { word: String },
    /// Factorization of an invertible word into minimal invertible factors.
    Factor { word: String },
    /// Minimal invertible factors of the defining words.
    Lambda,
    /// Presentation and structure of the group of units.
    Units,
    /// Grammars for the left-hand-side languages.
    Grammar,
    /// Word-problem slice on `(a b^* c)^n #`; defaults to Pi_n.
    Slice { n: usize },
    /// Context-freeness of the word problem of Pi_n.
    Verdict { n: usize },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match commands::run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.report.render(format));
            ExitCode::from(if outcome.positive { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
