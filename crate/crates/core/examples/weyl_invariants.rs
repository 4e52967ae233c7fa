//! Modular Weyl group invariants: S_n on the reduced permutation module and
//! W(G2) on its Cartan subalgebra.
//!
//! cargo run --example weyl_invariants -- 4 2

use nilcone_lab::mpoly::GroebnerBudget;
use nilcone_lab::weylinv::{
    build_g2_weyl_action, build_sn_quotient_action, certify_polynomial_invariants, coinvariant_dimension,
    elementary_symmetric_images, find_invariant_generators, invariant_space, is_irreducible, GroupAction,
    DEFAULT_DEGREE_CAP,
};

fn summary(a: &GroupAction, gens: &[nilcone_lab::mpoly::MultiPoly]) -> Result<(), Box<dyn std::error::Error>> {
    let budget = GroebnerBudget::default();
    let cert = certify_polynomial_invariants(a, gens, budget)?;
    println!("{}: |G| = {}, image order {}", a.label(), cert.group_order, cert.image_order);
    for d in 1..=cert.degrees.iter().copied().max().unwrap_or(1) {
        println!("  degree {d}: {} invariants", invariant_space(a, d, DEFAULT_DEGREE_CAP)?.len());
    }
    for g in &cert.generators {
        println!("  generator: {g}");
    }
    println!(
        "  degrees {:?}, product {}, independent {}, polynomial {}",
        cert.degrees, cert.degree_product, cert.independent, cert.certified_polynomial
    );
    println!("  coinvariant dimension {}", coinvariant_dimension(a, gens, budget)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (n, p) = match args[..] {
        [n, p, ..] => (n as usize, p),
        _ => (3, 3),
    };
    let sn = build_sn_quotient_action(n, p)?;
    summary(&sn, &elementary_symmetric_images(n, p)?)?;

    let g2 = build_g2_weyl_action(2)?;
    let gens = find_invariant_generators(&g2, DEFAULT_DEGREE_CAP, GroebnerBudget::default())?;
    summary(&g2, &gens)?;
    println!("  irreducible: {}", is_irreducible(&g2)?);
    Ok(())
}
