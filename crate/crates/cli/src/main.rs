use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use telefid_cli::args::Cli;
use telefid_cli::csv_out::{emit_csv, write_rows};
use telefid_cli::error::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.command.run().and_then(|rows| match cli.command.output() {
        Some(path) => emit_csv(&rows, path),
        None => write_rows(std::io::stdout().lock(), &rows),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut err = std::io::stderr().lock();
            let _ = writeln!(err, "error: {e}");
            if let CliError::Usage(_) = e {
                let mut cmd = Cli::command();
                cmd.build();
                if let Some(sub) = cmd.find_subcommand_mut(cli.command.name()) {
                    let _ = writeln!(err, "\n{}", sub.render_usage());
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
