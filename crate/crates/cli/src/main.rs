//! `pretzel`: reports, tables and self-checks for fully augmented pretzel
//! link complements.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "pretzel", version, about)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Binary precision for numeric values.
    #[arg(long, global = true, value_name = "BITS", default_value_t = 256)]
    precision: usize,
    /// Trace-field descriptor cache; re-verified on every load.
    #[arg(long, global = true, value_name = "PATH", env = "PRETZEL_CACHE")]
    cache: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full invariant report for one manifold.
    Report {
        #[arg(long)]
        n: u64,
        /// Twist bits, e.g. 01111; all zero when omitted.
        #[arg(long)]
        twists: Option<String>,
        #[arg(long, value_name = "PATH")]
        nr_table: Option<PathBuf>,
    },
    /// Trace-field table, or an equality test between two trace fields.
    Fields {
        #[arg(long, requires = "max", conflicts_with = "equal")]
        table: bool,
        #[arg(long)]
        max: Option<u64>,
        #[arg(long, num_args = 2, value_names = ["M", "N"])]
        equal: Option<Vec<u64>>,
    },
    /// Batch arithmeticity and commensurability table over a range of n.
    Classify {
        /// Inclusive range `A..B`.
        #[arg(long)]
        range: String,
        #[arg(long, value_name = "PATH")]
        nr_table: Option<PathBuf>,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Involution criterion on an embedded graph file, or emit the pretzel
    /// crushtacean.
    Graph {
        #[arg(long, value_name = "PATH", conflicts_with = "pretzel")]
        file: Option<PathBuf>,
        /// Print the crushtacean of the n-pretzel as graph JSON.
        #[arg(long, value_name = "N")]
        pretzel: Option<usize>,
        #[arg(long)]
        twists: Option<String>,
        /// Edge-symmetric spanning forest to validate.
        #[arg(long, value_name = "PATH")]
        forest: Option<PathBuf>,
    },
    /// Whether M(m, a) and M(n, b) are commensurable, e.g. `5:00000 5:01101`.
    Commensurable { a: String, b: String },
    /// Volume bracket on the hidden symmetries of M'_n.
    HiddenBounds {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "0.01")]
        epsilon: String,
    },
    /// Upper bound vol(M)/v0 on the number of hidden symmetries.
    MaxHidden {
        #[arg(long, conflicts_with = "volume", required_unless_present = "volume")]
        n: Option<u64>,
        #[arg(long)]
        volume: Option<String>,
        /// Minimal one-cusped orbifold volume; has no default.
        #[arg(long)]
        v0: Option<String>,
    },
}

/// Exit codes: 1 usage, 2 verification failure, 3 missing external data.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification(String),
    MissingData(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Verification(_) => 2,
            Failure::MissingData(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Verification(m) | Failure::MissingData(m) => m,
        }
    }
}

pub fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::dispatch(cli.command, &cli.global) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
