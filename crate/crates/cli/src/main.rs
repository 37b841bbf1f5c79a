use clap::Parser;
use std::process::ExitCode;
use twocoin_cli::{render::render, run, Cli, CliError, EXIT_VERIFICATION};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let outcome = run(cli.command)?;
    let common = outcome.report.config.common();
    for w in &outcome.report.warnings {
        eprintln!("warning: {w}");
    }
    let text = render(&outcome, common.format)?;
    match &common.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::other(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(if outcome.failed { EXIT_VERIFICATION } else { 0 })
}
