//! Command-line front end for `scalespace-core`.

pub mod acceptance;
pub mod commands;
pub mod output;

use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use commands::{Cli, Status};
use output::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Parses `args`, runs the subcommand and writes its output; returns the
/// process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let run = match commands::run(&cli) {
        Ok(run) => run,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_DOMAIN;
        }
    };
    let body = match (&run.text, cli.format) {
        (Some(text), Format::Csv) => text.clone(),
        _ => run.report.render(cli.format),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, body.as_bytes()),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return EXIT_DOMAIN;
    }
    for d in &run.report.diagnostics {
        eprintln!("note: {d}");
    }
    match run.status {
        Status::Done => EXIT_OK,
        Status::NotConverged => {
            eprintln!("error: limit not reached");
            EXIT_NOT_CONVERGED
        }
        Status::Failed => EXIT_DOMAIN,
    }
}
