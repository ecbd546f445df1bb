//! Command-line front end: configuration, orchestration, file formats and the
//! verification checks.

pub mod args;
pub mod checks;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod parallel;

use clap::Parser;

pub use error::{CliError, CliResult};

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = config::resolve(&cli.command).and_then(|cfg| commands::run(&cfg));
    match result {
        Ok(out) => {
            for line in &out.summary {
                println!("{line}");
            }
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            if out.failed > 0 {
                let e = CliError::ChecksFailed(out.failed);
                eprintln!("error: {e}");
                e.exit_code()
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
