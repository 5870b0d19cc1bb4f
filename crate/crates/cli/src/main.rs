use std::process::ExitCode;

use clap::Parser;
use qbcharge_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for line in &outcome.report {
                println!("{line}");
            }
            println!("wrote {} files to {}", outcome.files.len(), outcome.dir.display());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
