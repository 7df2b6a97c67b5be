use std::process::ExitCode;

use clap::Parser;

use cfree_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cfree_cli::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
