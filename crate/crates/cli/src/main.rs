mod args;
mod commands;
mod config;
mod error;
mod funcs;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::{CliError, Status, USAGE_CODE};

fn run(cli: &Cli) -> Result<Status, CliError> {
    match &cli.command {
        Command::Deriv(a) => commands::deriv(a),
        Command::Bilinear(a) => commands::bilinear(a),
        Command::Soliton(a) => commands::soliton(a),
        Command::Kp(a) => commands::kp(a),
        Command::Suite(a) => commands::suite(a),
        Command::LimitCheck(a) => commands::limit_check(a),
        Command::SobolevProbe(a) => commands::sobolev_probe(a),
    }
}

fn main() -> ExitCode {
    let args = match config::merge_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_CODE);
        }
    };
    let cli = Cli::try_parse_from(args).unwrap_or_else(|e| e.exit());
    match run(&cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE_CODE)
        }
    }
}
