use std::process::ExitCode;

use clap::Parser;

use csdecay_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match csdecay_cli::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("csdecay: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
