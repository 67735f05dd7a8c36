//! `sse`: encode, decode, analyze, simulate, bench and gen.
//!
//! Reports are JSON on standard output (or standard error when standard
//! output carries data), diagnostics go to standard error.
//!
//! Exit codes:
//!   0 success
//!   1 usage or other error
//!   2 empty symbol occurs in the input (or no free byte for `--empty auto`)
//!   3 I/O error, including inputs over `--max-bytes`
//!   4 bad container header (magic, version, flags, empty symbol)
//!   5 corrupt container payload
//!   6 external compressor missing, failing or timed out

mod commands;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "sse", version, about = "Sort and Set Empty preprocessing for line lists")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sort lines, set shared prefixes empty and write a container.
    Encode {
        /// Input text file, or "-" for standard input.
        input: PathBuf,
        /// Output container, or "-" for standard output.
        output: PathBuf,
        #[command(flatten)]
        transform: TransformArgs,
        /// Run-length representation of empty runs.
        #[arg(long, value_enum, default_value_t = ModeArg::Literal)]
        mode: ModeArg,
    },
    /// Restore the sorted lines from a container.
    Decode {
        input: PathBuf,
        output: PathBuf,
    },
    /// Report source and transformed entropy for a text file.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        transform: TransformArgs,
    },
    /// Monte Carlo entropy study over random alphabets; writes CSV.
    Simulate {
        /// Alphabet sizes as a..b (inclusive).
        #[arg(long, default_value = "2..52", value_parser = parse_range)]
        sizes: (usize, usize),
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Lines per generated corpus.
        #[arg(long, default_value_t = 2000)]
        lines: usize,
        #[arg(long, default_value_t = 3)]
        min_len: usize,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// CSV destination, or "-" for standard output.
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Compare compression ratios with and without the transform.
    Bench {
        /// Corpus file; omit when using --gen.
        #[arg(required_unless_present = "gen", conflicts_with = "gen")]
        corpus: Option<PathBuf>,
        /// Generated corpus as family:count:seed (family: word, url, hex).
        #[arg(long)]
        gen: Option<String>,
        /// "builtin" or cmd:"<template with {in} and {out}>".
        #[arg(long, default_value = "builtin")]
        codec: String,
        /// Timeout for an external codec, in seconds.
        #[arg(long, default_value_t = 300)]
        timeout: u64,
        #[command(flatten)]
        transform: TransformArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Literal)]
        mode: ModeArg,
    },
    /// Write a synthetic corpus (family:count:seed) as LF-separated lines.
    Gen {
        spec: String,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
struct TransformArgs {
    /// Empty symbol: "auto" or a byte such as 0x20.
    #[arg(long, default_value = "0x20")]
    empty: String,
    /// Sort case-insensitively (stored bytes are unchanged).
    #[arg(long)]
    ci_sort: bool,
    /// Strip one trailing CR from each input line.
    #[arg(long)]
    crlf: bool,
    /// Refuse inputs larger than this many bytes.
    #[arg(long, default_value_t = 1 << 30)]
    max_bytes: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ModeArg {
    Literal,
    Counted,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let a = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b = b.trim().trim_start_matches('=').parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((a, b))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Encode {
            input,
            output,
            transform,
            mode,
        } => commands::encode(&input, &output, &transform, mode),
        Command::Decode { input, output } => commands::decode(&input, &output),
        Command::Analyze { input, transform } => commands::analyze(&input, &transform),
        Command::Simulate {
            sizes,
            trials,
            lines,
            min_len,
            max_len,
            seed,
            out,
        } => {
            let cfg = sse_core::simulate::StudyConfig {
                min_alphabet: sizes.0,
                max_alphabet: sizes.1,
                trials_per_size: trials,
                lines_per_corpus: lines,
                min_line_len: min_len,
                max_line_len: max_len,
                seed,
            };
            commands::simulate(&cfg, &out)
        }
        Command::Bench {
            corpus,
            gen,
            codec,
            timeout,
            transform,
            mode,
        } => commands::bench(corpus.as_deref(), gen.as_deref(), &codec, timeout, &transform, mode),
        Command::Gen { spec, out } => commands::gen(&spec, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("sse: {err}");
            if let Some(hint) = err.hint() {
                eprintln!("hint: {hint}");
            }
            ExitCode::from(err.exit_code())
        }
    }
}
