//! Library half of the `drazinlab` binary: argument types, command
//! implementations, and the outcome-class → exit-code mapping, kept callable
//! from integration tests.

pub mod args;
mod commands;
pub mod manifest;

use drazinlab_core::Error;

use args::{Cli, Command};

/// Exit codes are a total function of the outcome class.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IDENTITY_FAILURE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const DIMENSION: i32 = 3;
    pub const CONDITIONS: i32 = 4;
    pub const SPACE: i32 = 5;
    pub const SAMPLING: i32 = 6;
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse(_) => exit::PARSE,
        Error::ConditionsNotMet { .. } | Error::NotCommuting => exit::CONDITIONS,
        Error::SpaceTooLarge(_) | Error::BadSearchSpec(_) => exit::SPACE,
        Error::ExhaustedAttempts(_) => exit::SAMPLING,
        _ => exit::DIMENSION,
    }
}

/// Runs one parsed invocation and returns its exit code.
pub fn run(cli: &Cli) -> i32 {
    let jobs = effective_jobs(cli.jobs);
    match &cli.command {
        Command::Compute(args) => commands::compute(args),
        Command::Verify(args) => commands::verify(args, jobs),
        Command::Search(args) => commands::search(args, jobs),
        Command::Lemmas(args) => commands::lemmas(args),
    }
}

fn effective_jobs(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("DRAZINLAB_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(1)
    .max(1)
}
