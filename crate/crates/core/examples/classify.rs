//! Root systems and the per-prime classification table.
//!
//! cargo run --example classify -- G2 E8

use nilcone_lab::rootsys::{build_root_system, classify_prime, parse_type, table_rows, table_values};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let names: Vec<String> = std::env::args().skip(1).collect();
    let types =
        if names.is_empty() { table_rows() } else { names.iter().map(|n| parse_type(n)).collect::<Result<_, _>>()? };
    let primes = [2, 3, 5, 7];
    println!("{:<4} {:>10} {:>5} {:>6} {:>6}  {:<26} 2 3 5 7", "type", "|W|", "|R+|", "dim B", "r_min", "highest root");
    for (t, rank) in types {
        let rs = build_root_system(t, rank)?;
        let (dim_b, r_min) = table_values(&rs);
        let marks: Vec<&str> = primes
            .iter()
            .map(|&p| {
                let c = classify_prime(&rs, p);
                match (c.bad(), c.very_good, c.special) {
                    (true, _, true) => "S",
                    (true, _, false) => "B",
                    (false, false, _) => "g",
                    _ => ".",
                }
            })
            .collect();
        println!(
            "{:<4} {:>10} {:>5} {:>6} {:>6}  {:<26} {}",
            rs.name(),
            rs.weyl_order,
            rs.num_positive_roots(),
            dim_b,
            r_min,
            format!("{:?}", rs.highest_root),
            marks.join(" ")
        );
    }
    println!("B bad, S bad and special, g good but not very good");
    Ok(())
}
