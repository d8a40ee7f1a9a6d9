use std::process::ExitCode;

use clap::Parser;
use vinoslice::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match vinoslice::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
