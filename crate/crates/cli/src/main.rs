use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use zonal_cli::commands::run;
use zonal_cli::config::{Cli, Format};
use zonal_cli::CliError;

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let start = Instant::now();
    let mut report = run(cli.command, &cli.options)?;
    report.runtime_ms = start.elapsed().as_millis() as u64;
    let text = match cli.options.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
        Format::Text => report.to_text(),
    };
    match &cli.options.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(report.passed())
}
