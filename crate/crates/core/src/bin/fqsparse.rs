use std::io::Write;

use clap::Parser;
use fqsparse::cli::{run, Cli};

fn main() {
    let outcome = run(Cli::parse());
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(outcome.stdout.as_bytes()).and_then(|_| stdout.flush()) {
        eprintln!("fqsparse: {e}");
        std::process::exit(1);
    }
    std::process::exit(outcome.exit_code);
}
