//! Arithmetic in GF(p^k): moduli, element orders and inverses.

use torsion_clean::ffield::FieldSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (p, k) in [(2, 2), (2, 3), (3, 2), (2, 4)] {
        let f = FieldSpec::new(p, k)?;
        println!("{f}: modulus coefficients (constant term first) {:?}", f.modulus());
        let orders: Vec<u32> = f.elements().skip(1).map(|x| x.order().unwrap()).collect();
        println!("  unit orders by encoding: {orders:?}");
    }

    let f8 = FieldSpec::new(2, 3)?;
    let x = f8.elem(2)?;
    let inv = x.inv()?;
    println!("in {f8}: x = {}, x^-1 = {}, x * x^-1 = {}", x.enc(), inv.enc(), x.mul(&inv)?.enc());

    println!("irreducible cubics over GF(2): {:?}", FieldSpec::irreducible_moduli(2, 3)?);
    Ok(())
}
