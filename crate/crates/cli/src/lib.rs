//! Library behind the `hstarkit` binary: argument parsing, JSON documents,
//! report rendering, batch verification and the cyclic-group search.

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub mod args;
pub mod commands;
pub mod document;
pub mod report;
pub mod search;
pub mod suite;

pub use args::Cli;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_MISMATCH: u8 = 4;
pub const EXIT_HYPOTHESIS: u8 = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad arguments or parameters.
    Usage(String),
    /// Unreadable or invalid input document.
    Parse(String),
    /// A volume, scan or enumeration cap was exceeded.
    Cap(String),
    /// Two computations that must agree did not.
    Mismatch(String),
    Internal(String),
    /// Strict mode and the hypotheses of the extraction theorem fail.
    Hypothesis(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => EXIT_USAGE,
            CliError::Cap(_) => EXIT_CAP,
            CliError::Mismatch(_) | CliError::Internal(_) => EXIT_MISMATCH,
            CliError::Hypothesis(_) => EXIT_HYPOTHESIS,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Cap(m) => write!(f, "cap exceeded: {m}"),
            CliError::Mismatch(m) => write!(f, "verification mismatch: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
            CliError::Hypothesis(m) => write!(f, "hypothesis not met: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<hstarkit::Error> for CliError {
    fn from(e: hstarkit::Error) -> Self {
        use hstarkit::Error as E;
        match e {
            E::VolumeTooLarge { .. } | E::ScanTooLarge { .. } | E::TooManyFaces { .. } | E::Overflow(_) => {
                CliError::Cap(e.to_string())
            }
            E::HypothesisNotMet(m) => CliError::Hypothesis(m),
            E::Internal(m) => CliError::Internal(m),
            E::InvalidParameters(m) | E::PreconditionNotMet(m) => CliError::Usage(m),
            E::InvalidHStar(_) => CliError::Usage(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Parses `argv` and runs the command, writing payloads to `out` and
/// diagnostics to standard error. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hstarkit: {e}");
            e.exit_code()
        }
    }
}
