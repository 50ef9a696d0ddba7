use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod fetch;

#[derive(Parser, Debug)]
#[command(
    name = "oseq",
    version,
    about = "Count and enumerate finite O-sequences by multiplicity"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    /// Permit network access (only `oeis-check` uses it).
    #[arg(long, global = true)]
    pub allow_network: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Enum,
    Formula,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemmas,
    Fibonacci,
    Ratios,
    Table,
    Oracle,
    Bijection,
}

#[derive(Args, Debug)]
pub struct CacheArgs {
    /// Memo cache file, loaded before and saved after the computation.
    #[arg(long)]
    pub cache: Option<PathBuf>,

    /// Print cache entry, hit and expansion counts to stderr.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// O_d and A_d for d = 1..=max-d.
    Table {
        #[arg(long)]
        max_d: u32,
    },
    /// O_d by enumeration, by the recursive formula, or both.
    Count {
        d: u32,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// O(p, n, k, d) by the memoized recursive formula.
    Formula {
        p: u32,
        n: u32,
        k: u32,
        d: u32,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Stream the O-sequences of multiplicity d, one per line.
    Enumerate {
        d: u32,
        /// Every O-sequence of multiplicity d (default).
        #[arg(long, conflicts_with = "last_gt_1")]
        all: bool,
        /// Only those whose last value exceeds 1.
        #[arg(long = "last-gt-1")]
        last_gt_1: bool,
    },
    /// Run a verification suite and print its report.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        max_d: Option<u32>,
    },
    /// Sous-escalier of the lex-segment ideal with Hilbert function h.
    Lexseg {
        /// Comma separated O-sequence, e.g. 1,2,2.
        h: String,
        #[arg(long)]
        vars: usize,
        /// Also print the split along the last variable.
        #[arg(long)]
        decompose: bool,
    },
    /// Compare O_1..O_max-d with the OEIS b-file (needs --allow-network).
    OeisCheck {
        #[arg(long, default_value_t = 20)]
        max_d: u32,
    },
}

/// Exit statuses.
pub mod status {
    pub const OK: u8 = 0;
    pub const MISMATCH: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const IO: u8 = 3;
    pub const OVERFLOW: u8 = 4;
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match commands::run(&cli, &mut out).and_then(|code| {
        out.flush().map_err(commands::Failure::from)?;
        Ok(code)
    }) {
        Ok(code) => code,
        Err(commands::Failure::BrokenPipe) => status::OK,
        Err(f) => {
            let _ = out.flush();
            eprintln!("oseq {}: {}", commands::name(&cli.command), f);
            f.status()
        }
    };
    ExitCode::from(code)
}
