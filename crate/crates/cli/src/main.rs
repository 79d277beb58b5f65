mod cli;
mod commands;
mod error;
mod output;
mod settings;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = match cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 0 for --help/--version and 2 for usage errors.
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };

    let result = commands::run(cli).and_then(|out| {
        out.emit()?;
        Ok(out.failure)
    });
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(failure)) => {
            eprintln!("pathspin: {failure}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("pathspin: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
