//! `logpart` command-line tool.
//!
//! Data goes to stdout, diagnostics to stderr. Exit status is 0 when the
//! command succeeded, 1 when `verify` found a rule whose solved partition
//! is not the log-equispaced one, and 2 for invalid input.

mod cli;
mod commands;
mod num;
mod svg;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", line.trim_end());
            return ExitCode::from(2);
        }
    };

    let result = match &cli.command {
        Command::Partition(args) => commands::partition(args),
        Command::Verify(args) => commands::verify(args),
        Command::Continuous(args) => commands::continuous(args),
        Command::Bands(args) => commands::bands(args),
    };

    match result {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.document.as_bytes());
            let _ = stdout.flush();
            match outcome.failure {
                Some(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(commands::InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
