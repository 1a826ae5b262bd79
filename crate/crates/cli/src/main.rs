use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use quadri_cli::{execute, render_json, render_text, Cli, CliError};

fn run(cli: &Cli) -> Result<(), CliError> {
    let report = execute(&cli.command)?;
    let text = if cli.json {
        render_json(&report)?
    } else {
        render_text(&report)?
    };
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
