use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "rhb",
    version,
    about = "Exact certificates for the s_{k,m} family of rational homology balls"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Worker threads for grid sweeps (default: one per core).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the reduction, boundary and obstruction checks for one (k, m).
    Verify {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
    },
    /// Sweep a grid of (k, m) and report one row per cell.
    Table {
        /// Inclusive range A:B.
        #[arg(long, value_name = "A:B", allow_hyphen_values = true)]
        k_range: String,
        /// Inclusive range A:B; A must be odd and m steps by 2.
        #[arg(long, value_name = "A:B", allow_hyphen_values = true)]
        m_range: String,
    },
    /// Emit the reduction certificate for one (k, m).
    Trace {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
    },
    /// Replay a certificate file and check every step.
    VerifyTrace {
        #[arg(value_name = "FILE")]
        file: PathBuf,
    },
    /// Check the seven sequence identities up to l_max.
    Identities {
        #[arg(long, default_value_t = 50, allow_negative_numbers = true)]
        l_max: i64,
    },
    /// Enumerate the Markov tree to the given depth.
    Markov {
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Continued fraction, lens space and blow-downs of a plumbing string.
    String {
        /// For example "2,2,2" or "(3^2,5,3,2)".
        #[arg(value_name = "STRING", allow_hyphen_values = true)]
        literal: String,
    },
}

/// Parses an inclusive `A:B` range.
pub fn parse_range(text: &str) -> Result<(i64, i64), String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| format!("range {text:?} is not of the form A:B"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|e| format!("bad range bound {s:?}: {e}"))
    };
    Ok((parse(a)?, parse(b)?))
}
