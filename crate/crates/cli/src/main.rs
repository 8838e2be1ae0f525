use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use adlv_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not worth reporting.
            let _ = stdout.write_all(out.text.as_bytes());
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(adlv_cli::exit_code(&e))
        }
    }
}
