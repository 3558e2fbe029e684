//! `qshear`: construct, combine, verify and render q-sheared harmonic maps.

mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::CliError;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return CliError::Config(e.render().to_string().trim().to_string()).report(),
    };
    let result = match &cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Combine(a) => commands::combine_cmd(a),
        Command::Verify(a) => commands::verify(a),
        Command::Render(a) => commands::render(a),
        Command::Report(a) => commands::report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
