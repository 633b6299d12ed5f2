use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ergo_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (bytes, status) = match run(&cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::stdout().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(status as u8)
}
