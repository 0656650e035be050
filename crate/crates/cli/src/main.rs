use std::process::ExitCode;

use clap::Parser;
use qpath::{app, Cli};

fn main() -> ExitCode {
    // Usage errors exit with status 2 inside `parse`.
    let cli = Cli::parse();
    let arguments: Vec<String> = std::env::args().skip(2).collect();
    match app::run(&cli, arguments) {
        Ok(report) => {
            let _ = app::print_report(&report, &mut std::io::stdout().lock());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qpath: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
