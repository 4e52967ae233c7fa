//! Gröbner bases, quotient dimensions and subalgebra membership over F_p.
//!
//! cargo run --example groebner

use nilcone_lab::ff::make_field;
use nilcone_lab::mpoly::{
    algebraically_independent, groebner, parse_poly, quotient_dimension, subalgebra_membership, GroebnerBudget,
    MonomialOrder, PolyIdeal,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = make_field(5, 1)?;
    let budget = GroebnerBudget::default();
    let gens = ["x0^2 + x1^2 - 1", "x0*x1 - 2"];
    let polys = gens.iter().map(|g| parse_poly(g, &f, 2)).collect::<Result<Vec<_>, _>>()?;
    for order in [MonomialOrder::Lex, MonomialOrder::GrevLex] {
        let ideal = groebner(&PolyIdeal::new(polys.clone(), order)?, budget)?;
        println!("{order:?} basis:");
        for g in ideal.basis().unwrap_or_default() {
            println!("  {g}");
        }
        println!("  dim F_5[x0,x1]/I = {:?}", quotient_dimension(&ideal, budget)?);
    }

    // power sums in three variables against the elementary symmetric functions
    let e = ["x0 + x1 + x2", "x0*x1 + x0*x2 + x1*x2", "x0*x1*x2"]
        .iter()
        .map(|g| parse_poly(g, &f, 3))
        .collect::<Result<Vec<_>, _>>()?;
    println!("e1, e2, e3 independent: {}", algebraically_independent(&e, budget)?);
    let p3 = parse_poly("x0^3 + x1^3 + x2^3", &f, 3)?;
    match subalgebra_membership(&e, &p3, budget)? {
        Some(expr) => println!("p3 = {expr}  (x_i standing for e_(i+1))"),
        None => println!("p3 is not a polynomial in e1, e2, e3"),
    }
    Ok(())
}
