use clap::Parser;
use fatigue_cli::{io, run_pipeline, Cli};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run_pipeline(&cli);
    let text = outcome.output.text();
    match &cli.output {
        Some(path) => {
            if let Err(e) = io::write_text(path, text) {
                eprintln!("gbsfat: {e}");
                return ExitCode::FAILURE;
            }
        }
        None => print!("{text}"),
    }
    if outcome.success {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
