//! `gfd` command-line front end. Every subcommand reads CSV/JSON inputs,
//! calls into `gfd-core` and writes deterministic CSV/JSON artifacts.
//!
//! Exit codes: 0 success, 1 unreadable or malformed input, 2 domain failure
//! (dependent basis, failed check, empty band, singular system).

pub mod args;
mod commands;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::Parser;
use gfd_core::GfdError;

pub use args::Cli;

/// Failure of a CLI run, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed files.
    Input(String),
    /// The inputs are well-formed but the computation is refused.
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Domain(_) => 2,
        }
    }

    /// Anything that fails while loading an input is an input error.
    pub(crate) fn input(e: GfdError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GfdError> for CliError {
    fn from(e: GfdError) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

/// What a successful command wants the process to exit with. Checks that
/// run to completion but fail report [`Outcome::Failed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Failed,
}

/// Runs a parsed command, writing reports to `report`.
pub fn run(cli: Cli, report: &mut dyn Write) -> Result<Outcome, CliError> {
    commands::dispatch(cli.command, report)
}

/// Parses `argv`, runs, prints diagnostics to stderr and returns the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let res = run(cli, &mut lock);
    let _ = lock.flush();
    match res {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Failed) => 2,
        Err(e) => {
            eprintln!("gfd: {e}");
            e.exit_code()
        }
    }
}
