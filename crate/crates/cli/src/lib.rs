//! Command-line front end for the `susyell` solver.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage error,
//! 3 the requested state does not exist or the solver hit a domain error.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::process::ExitCode;

use clap::Parser;

pub use args::Cli;
pub use error::{CliError, Outcome};

/// Parse `argv`, run the command and map the result to an exit code.
pub fn main_with_args<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli.command) {
        Ok(outcome) => outcome.into(),
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
