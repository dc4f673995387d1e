use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use relhyp::cli::{configure_threads, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| run(cli)).and_then(|artifact| {
        match &artifact.output {
            Some(path) => std::fs::write(path, &artifact.text)?,
            None => std::io::stdout().write_all(artifact.text.as_bytes())?,
        }
        Ok(())
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("relhyp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
