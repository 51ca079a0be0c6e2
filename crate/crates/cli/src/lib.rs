//! Library side of the `ucluster` binary, exposed so the integration tests can
//! drive subcommands in-process.

pub mod args;
mod commands;
pub mod document;
pub mod settings;

pub use commands::{run, Status};

use clap::Parser;

use crate::args::Cli;

/// Parses `args` (program name first), runs, and maps the result to an exit code.
///
/// Errors are printed to stderr and map to 2; usage errors too.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
