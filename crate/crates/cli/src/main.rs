use std::process::ExitCode;

use clap::Parser;
use qpke_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(qpke_cli::run(&cli))
}
