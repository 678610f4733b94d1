//! Building rings from spec strings and moving between encodings and literals.

use torsion_clean::{parse_element, RingHandle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for spec in ["GF(9)", "M(2,GF(2))", "T(3,GF(2))", "P(GF(2),GF(4))", "Q(GF(3),2,2)"] {
        let r = RingHandle::parse(spec)?;
        println!("{:<16} |R| = {:>4}, char = {}", r.spec(), r.size(), r.characteristic());
    }

    let m = RingHandle::parse("M(2,GF(2))")?;
    let a = parse_element(&m, "[[1,1],[1,0]]")?;
    println!("{a} has encoding {}; a^2 = {}, a^3 = {}", a.enc(), a.pow(2), a.pow(3));

    let p = RingHandle::parse("P(GF(3),T(2,GF(2)))")?;
    let x = parse_element(&p, "[2,[[1,1],[0,1]]]")?;
    println!("in {p}: {x} squared is {}", x.mul(&x)?);

    match RingHandle::parse("M(8,GF(2))") {
        Err(e) => println!("M(8,GF(2)) rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
