use std::process::ExitCode;

use clap::Parser;
use spectre::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = cli.config.clone();
    let status = spectre::resolve(config.as_deref(), cli.flags()).and_then(|plan| spectre::run(&plan));
    match status {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("spectre: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
