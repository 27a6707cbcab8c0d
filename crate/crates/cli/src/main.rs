use std::process::ExitCode;

use clap::Parser;
use valring_cli::commands::EXIT_INPUT;
use valring_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let out = execute(&cli.command, &cli.options);
    let json = out.to_json();
    match &cli.options.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
            if out.exit_code == EXIT_INPUT {
                eprintln!("{}", out.summary);
            } else if !cli.options.quiet {
                println!("{}", out.summary);
            }
        }
        None => {
            print!("{json}");
            if out.exit_code == EXIT_INPUT {
                eprintln!("{}", out.summary);
            }
        }
    }
    ExitCode::from(out.exit_code as u8)
}
