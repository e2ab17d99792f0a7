//! Library side of the `pathweight` command-line tool.
//!
//! [`run`] takes the argument vector and its I/O handles explicitly so that
//! tests can drive every subcommand in-process, including with a fake
//! network transport.

pub mod commands;
pub mod engines;
pub mod oeis;
pub mod sequence;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use commands::{Cli, Command, EXIT_OK, EXIT_USAGE};
use oeis::Transport;

pub struct Context<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
    pub transport: &'a dyn Transport,
}

/// Runs one invocation and returns its exit status.
pub fn run<I, T>(argv: I, ctx: &mut Context<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let (sink, code) = if e.use_stderr() {
                (&mut *ctx.err, EXIT_USAGE)
            } else {
                (&mut *ctx.out, EXIT_OK)
            };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Seq(args) => commands::seq(args, ctx.out, ctx.err),
        Command::Verify(args) => commands::verify(args, ctx.out),
        Command::Table(args) => commands::table(args, ctx.out),
        Command::Oeis(args) => commands::oeis(args, ctx.transport, ctx.out, ctx.err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            e.exit_code()
        }
    }
}
