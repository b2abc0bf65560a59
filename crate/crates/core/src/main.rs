use std::io::Write;

use clap::Parser;

use ftqc_core::cli::{exit_code, run, Cli};

fn main() {
    let result = run(Cli::parse());
    match &result {
        Ok(summary) => {
            let text = serde_json::to_string_pretty(summary).unwrap_or_default();
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
        Err(e) => eprintln!("error: {e}"),
    }
    std::process::exit(exit_code(&result));
}
