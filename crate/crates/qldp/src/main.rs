use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let args = qldp::cli::Cli::parse();
    match qldp::cli::run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qldp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
