//! Command-line front end for `rhb-core`.
//!
//! Every command produces a [`Report`]: a JSON payload with sorted keys and
//! big integers as decimal strings, an optional plain-text rendering and an
//! optional CSV table. Exit codes: 0 when every check passes, 1 when a
//! mathematical check fails, 2 on usage errors.

pub mod args;
pub mod certificate;
pub mod commands;
pub mod pipeline;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::Value;

pub use args::{Cli, Command, Format};

/// Largest `k` accepted on the command line or in a certificate.
pub const MAX_K: i64 = 200;
/// Largest `m` accepted on the command line or in a certificate.
pub const MAX_M: i64 = 100_001;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A command result ready for rendering.
#[derive(Debug, Clone)]
pub struct Report {
    pub ok: bool,
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.ok {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        }
    }

    pub fn render(&self, format: Format) -> Result<String, UsageError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("JSON value");
                s.push('\n');
                Ok(s)
            }
            Format::Text => Ok(self.text.clone()),
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| UsageError("--format csv is only available for table".into())),
        }
    }
}

/// Dispatches a parsed command.
pub fn execute(cli: &Cli) -> Result<Report, UsageError> {
    match &cli.command {
        Command::Verify { k, m } => commands::verify(*k, *m),
        Command::Table { k_range, m_range } => {
            let grid = commands::GridSpec::parse(k_range, m_range)?;
            commands::table(&grid, cli.jobs)
        }
        Command::Trace { k, m } => commands::trace(*k, *m),
        Command::VerifyTrace { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", file.display())))?;
            commands::verify_trace(&text)
        }
        Command::Identities { l_max } => commands::identities(*l_max),
        Command::Markov { depth } => commands::markov(*depth),
        Command::String { literal } => commands::string(literal),
    }
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `stdout` or `--out`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
            return code;
        }
    };

    let started = Instant::now();
    let result = execute(&cli).and_then(|r| r.render(cli.format).map(|s| (r, s)));
    log::info!("wall time: {:.3} s", started.elapsed().as_secs_f64());

    let (report, body) = match result {
        Ok(pair) => pair,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, body.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout
            .write_all(body.as_bytes())
            .map_err(|e| format!("cannot write report: {e}")),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    if !report.ok {
        let _ = writeln!(
            stderr,
            "check failed; see the report for the failing checks"
        );
    }
    report.exit_code()
}
