//! Arithmetic in F_{p^k}: a primitive element, Frobenius, inverses.
//!
//! cargo run --example field_arithmetic -- 3 2

use nilcone_lab::ff::make_field;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (p, k) = match args[..] {
        [p, k, ..] => (p, k),
        [p] => (p, 1),
        _ => (3, 2),
    };
    let f = make_field(p, k)?;
    println!("F_{} with modulus coefficients {:?}", f.order(), f.modulus());
    let g = f.primitive_element();
    println!("primitive element {}", f.format(g));
    for e in 0..f.order() as u64 - 1 {
        let a = f.pow(g, e);
        let inv = f.inv(a)?;
        println!(
            "g^{e:<3} = {:<12} inverse {:<12} frobenius {:<12}{}",
            f.format(a),
            f.format(inv),
            f.format(f.frobenius(a)),
            if f.is_prime_subfield(a) { "  in F_p" } else { "" }
        );
    }
    Ok(())
}
