use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use lexfst_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdin = io::stdin();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let status = run(cli, &mut stdin.lock(), &mut out, &mut io::stderr());
    if out.flush().is_err() {
        return ExitCode::from(4);
    }
    ExitCode::from(status as u8)
}
