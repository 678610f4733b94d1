//! Runs every structural check on a few rings and shows a refuted identity.

use torsion_clean::theorems::{self, Status};
use torsion_clean::RingHandle;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for spec in ["M(2,GF(2))", "T(4,GF(2))", "P(GF(2),GF(4),GF(8))", "Q(GF(4),2,1)"] {
        let r = RingHandle::parse(spec)?;
        println!("{spec}");
        for c in theorems::run_suite(&r) {
            println!("  {:<22} {:<15} {}", c.id, c.status.to_string(), c.detail);
        }
    }

    // The identity needs commuting decompositions: at the plain index it breaks.
    let m = RingHandle::parse("M(2,GF(2))")?;
    let c = theorems::check_identity_eq(&m, 2);
    assert_eq!(c.status, Status::Fail);
    let a = m.elem(c.witness.as_ref().unwrap()[0] as u64)?;
    println!("identity at n = 2 fails for {a}; confirmed: {}", theorems::confirm_witness(&m, &c));
    Ok(())
}
