//! Runs one subcommand through the library and prints its JSON report, the
//! same document `nilcone-lab --out` writes.
//!
//! cargo run --example report -- cone --n 3 --p 3 --checks count,orbits

use clap::Parser;
use nilcone_lab::cli::{execute, Cli};
use nilcone_lab::report::load_config;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cli = Cli::parse_from(std::iter::once("nilcone-lab".to_string()).chain(std::env::args().skip(1)));
    let mut cfg = load_config(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let outcome = execute(&cli, &cfg)?;
    println!("{}", outcome.report.to_json());
    std::process::exit(outcome.report.exit_code());
}
