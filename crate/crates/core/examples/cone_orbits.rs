//! Enumerates the nilpotent cone of pgl_n over F_q, splits it into orbits and
//! runs the cone checks.
//!
//! cargo run --example cone_orbits -- 3 3

use nilcone_lab::ff::make_field;
use nilcone_lab::nilcone::{
    adjoint_orbits, codimension_report, compute_invariant_generators, cone_count_report, enumerate_nilcone,
    kw_compatibility_report, orbit_report, smooth_vs_regular_report, steinberg_report, CONE_BUDGET,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (n, p) = match args[..] {
        [n, p, ..] => (n as usize, p),
        _ => (3, 3),
    };
    let field = make_field(p, 1)?;
    let cone = enumerate_nilcone(n, &field, CONE_BUDGET)?;
    let orbits = adjoint_orbits(&cone)?;
    println!("pgl_{n} over F_{p}: {} ad-nilpotent cosets, {} orbits", cone.len(), orbits.len());
    for o in &orbits {
        println!(
            "  {:<10} size {:>6}  dim {:>2}  tangent rank {:>2}{}",
            o.jordan_type.to_string(),
            o.size_over_q,
            o.dimension,
            o.tangent_rank,
            if o.is_regular { "  regular" } else { "" }
        );
    }
    let system = compute_invariant_generators(n, p, n as u32)?;
    for g in &system.generators {
        println!("  invariant of degree {}: {} terms", g.total_degree(), g.num_terms());
    }
    let checks = vec![
        cone_count_report(&cone),
        orbit_report(&cone, &orbits),
        smooth_vs_regular_report(&cone, &orbits, &system)?,
        codimension_report(&cone, &orbits, true)?.0,
        kw_compatibility_report(&system)?,
        steinberg_report(&cone, &system)?,
    ];
    for c in checks {
        println!("{:<8} {}  {}", c.status.as_str(), c.name, c.actual);
        if !c.notes.is_empty() {
            println!("         {}", c.notes);
        }
    }
    Ok(())
}
