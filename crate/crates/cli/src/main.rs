use std::process::ExitCode;

use clap::Parser;

use biprom_cli::args::Cli;
use biprom_cli::commands::run;

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
