//! `rankmon` command-line tool.
//!
//! Exit status: 0 on success, 1 on I/O or runtime failure, 2 on usage,
//! formula or dataset schema errors.

mod args;
mod commands;

use std::fmt;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};
use rankmon::analytics::AnalyticsError;
use rankmon::ingest::{IngestError, MixError};
use rankmon::props::{default_library, PropertyError};

use args::{Cli, Command};

/// Bad command-line input.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() || cause.is::<PropertyError>() || cause.is::<MixError>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<IngestError>() {
            return if e.is_data_error() { 2 } else { 1 };
        }
        if let Some(e) = cause.downcast_ref::<AnalyticsError>() {
            return match e {
                AnalyticsError::EmptyDataset
                | AnalyticsError::InvalidK { .. }
                | AnalyticsError::EmptyHorizon
                | AnalyticsError::Eval { .. } => 2,
                _ => 1,
            };
        }
    }
    1
}

fn library_help() -> String {
    let mut text = String::from("Library properties (defaults):\n");
    for spec in default_library() {
        text.push_str(&format!("  {:<13} {}\n", spec.name(), spec.describe()));
    }
    text
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(UsageError("--jobs must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()?;
    }
    match cli.command {
        Command::Check(args) => commands::check(args),
        Command::Rates(args) => commands::rates(args),
        Command::Metrics(args) => commands::metrics(args),
        Command::Generate(args) => commands::generate_cmd(args),
        Command::Expand(args) => commands::expand(args),
        Command::Kmeans(args) => commands::kmeans(args),
    }
}

fn main() -> ExitCode {
    let help = library_help();
    let command = Cli::command()
        .mut_subcommand("check", |c| c.after_help(help.clone()))
        .mut_subcommand("rates", |c| c.after_help(help.clone()))
        .mut_subcommand("metrics", |c| c.after_help(help.clone()))
        .mut_subcommand("expand", |c| c.after_help(help.clone()));
    let cli = match command
        .try_get_matches()
        .and_then(|m| Cli::from_arg_matches(&m))
    {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
