//! Idempotents, units, Jacobson radical and the usual predicates.

use torsion_clean::{analysis, RingHandle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for spec in ["M(2,GF(2))", "T(3,GF(2))", "Q(GF(4),2,1)", "P(GF(2),GF(4),GF(8))"] {
        let r = RingHandle::parse(spec)?;
        let rep = analysis::analyze(&r);
        println!(
            "{spec}: {} idempotents, {} units (exp {}), |J| = {} (nil index {}), center {}",
            rep.idempotents.len(),
            rep.units.len(),
            rep.unit_group_exponent,
            rep.jacobson.len(),
            rep.nil_index_of_jacobson,
            rep.center_size,
        );
        println!("  flags {:?}", rep.flags);
        for (name, w) in &rep.witnesses {
            let shown: Vec<String> = w.iter().map(|&c| r.elem(c as u64).unwrap().to_string()).collect();
            println!("  not {name}: {}", shown.join(", "));
        }
    }
    Ok(())
}
