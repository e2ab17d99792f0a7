use std::io;
use std::process::ExitCode;

use pathweight_cli::oeis::HttpTransport;
use pathweight_cli::{run, Context};

fn main() -> ExitCode {
    let transport = HttpTransport::from_env();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let mut ctx = Context {
        out: &mut out,
        err: &mut err,
        transport: &transport,
    };
    let code = run(std::env::args_os(), &mut ctx);
    ExitCode::from(code as u8)
}
