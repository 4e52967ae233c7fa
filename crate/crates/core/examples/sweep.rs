//! Centralizer-bound sweep over classical types, written as CSV.
//!
//! cargo run --example sweep -- 25 > sweep.csv

use nilcone_lab::rootsys::TypeLetter;
use nilcone_lab::sweep::{exception_report, margin_report, run_sweep, to_csv, type_a_report};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let max_rank: usize = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(25);
    use TypeLetter::*;
    let rows = run_sweep(&[A, B, C, D], max_rank, false)?;
    print!("{}", to_csv(&rows));
    for check in [type_a_report(&rows, false), exception_report(&rows), margin_report(&rows)] {
        eprintln!("{:<8} {}  {}", check.status.as_str(), check.name, check.notes);
    }
    Ok(())
}
