//! `bvh`: build, audit and analyse BVH/HC/VQ/BH topologies from the shell.
//!
//! Exit status is 0 on success, 1 when a computation fails or a table diff
//! finds an out-of-tolerance cell, and 2 for bad arguments.

use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod output;
mod tables;

use args::Cli;

/// Marks errors caused by the caller's arguments (exit status 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Outcome of a command that ran to completion.
pub enum Status {
    Ok,
    /// Completed, but a diff found out-of-tolerance cells.
    Mismatch,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Mismatch) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
