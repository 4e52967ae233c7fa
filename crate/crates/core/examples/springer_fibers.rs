//! Springer fiber sizes per Jordan type, over F_q and F_{q^2}.
//!
//! cargo run --example springer_fibers -- 3 3

use nilcone_lab::ff::make_field;
use nilcone_lab::springer::{
    double_count, enumerate_flags, fiber_dimension_report, FiberOptions, DOUBLE_COUNT_BUDGET, FLAG_BUDGET,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (n, p) = match args[..] {
        [n, p, ..] => (n as usize, p),
        _ => (3, 3),
    };
    let f = make_field(p, 1)?;
    let opts = FiberOptions { two_q: true, ..FiberOptions::default() };
    let (_, records) = fiber_dimension_report(n, &f, &opts)?;
    println!("{:<10} {:>8} {:>10} {:>8} {:>10}", "type", "|F_q|", "|F_q^2|", "dim", "by counts");
    for r in &records {
        println!(
            "{:<10} {:>8} {:>10} {:>8} {:>10}",
            r.jordan_type.to_string(),
            r.fiber_size,
            r.fiber_size_q2.map_or("-".into(), |s| s.to_string()),
            r.expected_dim,
            r.count_based_dim.map_or("-".into(), |d| d.to_string())
        );
    }
    let flags = enumerate_flags(n, &f, FLAG_BUDGET)?;
    let dc = double_count(n, &f, &flags, DOUBLE_COUNT_BUDGET)?;
    println!("incidence: {} by fibers, {} by flags, {} closed form", dc.fiber_sum, dc.flag_sum, dc.formula);
    Ok(())
}
