//! The `treepark` command line, as a library so it can be driven in-process.
//!
//! Exit codes: 0 success, 1 a comparison or identity failed, 2 usage error,
//! 3 brute-force budget exceeded.

use std::ffi::OsString;

use clap::Parser;
use thiserror::Error;

pub mod args;
pub mod commands;
pub mod output;

use args::{Cli, Command, Format};
use treepark::error::Error as LibError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] LibError),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Library(LibError::BudgetExceeded { .. }) => 3,
            CliError::Library(
                LibError::Domain(_)
                | LibError::NotInCatalog { .. }
                | LibError::SeriesOnlyFamily(_)
                | LibError::Parse { .. },
            ) => 2,
            CliError::Library(_) | CliError::Output(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Library(LibError::BudgetExceeded { .. }) => "budget-exceeded",
            CliError::Library(LibError::Integrity(_)) => "integrity",
            CliError::Library(_) if self.exit_code() == 2 => "usage",
            CliError::Library(_) => "computation",
            CliError::Output(_) => "output",
        }
    }
}

/// What a run printed and how it ended.
#[derive(Debug, Default)]
pub struct Response {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

fn dispatch(command: &Command) -> Result<commands::Done, CliError> {
    match command {
        Command::Enumerate(a) => commands::enumerate(a),
        Command::General(a) => commands::general(a),
        Command::Series(a) => commands::series(a),
        Command::Closed(a) => commands::closed(a),
        Command::Asym(a) => commands::asym(a),
        Command::Phase(a) => commands::phase(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn failure(err: &CliError, format: Format) -> Response {
    Response {
        code: err.exit_code(),
        stdout: if format == Format::Json {
            output::render_error(err)
        } else {
            String::new()
        },
        stderr: format!("error: {err}\n"),
    }
}

pub fn run<I, T>(argv: I) -> Response
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.exit_code() == 0 {
                Response {
                    stdout: text,
                    ..Response::default()
                }
            } else {
                Response {
                    code: 2,
                    stderr: text,
                    ..Response::default()
                }
            };
        }
    };
    let done = match dispatch(&cli.command) {
        Ok(done) => done,
        Err(e) => return failure(&e, cli.format),
    };
    let stdout = match output::render(&done.output, cli.format) {
        Ok(s) => s,
        Err(e) => return failure(&e, cli.format),
    };
    let stderr: String = done
        .problems
        .iter()
        .map(|p| format!("error: {p}\n"))
        .collect();
    Response {
        code: if done.verified { 0 } else { 1 },
        stdout,
        stderr,
    }
}
