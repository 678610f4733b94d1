//! Minimal plain and strong indices with witnesses and certificates.
//!
//! Pass ring specs as arguments, e.g. `cargo run --example torsion_index -- "M(4,GF(2))"`.

use torsion_clean::torsion::{self, SearchOptions};
use torsion_clean::{parse_element, RingHandle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut specs: Vec<String> = std::env::args().skip(1).collect();
    if specs.is_empty() {
        specs = ["M(2,GF(2))", "M(3,GF(2))", "T(5,GF(2))", "P(GF(4),GF(8))"].map(String::from).to_vec();
    }
    for spec in &specs {
        let r = RingHandle::parse(spec)?;
        for opts in [SearchOptions::plain(), SearchOptions::strong()] {
            let rep = torsion::torsion_clean_index(&r, opts);
            println!(
                "{spec} {}: index {:?} of exp(U) = {} ({} order sets for {} elements)",
                rep.mode, rep.index, rep.exponent_of_units, rep.stats.classes_scanned, rep.element_count
            );
            for w in &rep.witnesses {
                let x = r.elem(w.element as u64)?;
                let c = torsion::decompose(&x, w.order as u64, opts.mode.is_strong()).unwrap();
                println!("  {} = {} + {}  (o(u) = {})", c.r, c.e, c.u, c.order);
            }
        }
    }

    let m = RingHandle::parse("M(2,GF(2))")?;
    let a = parse_element(&m, "[[1,1],[1,0]]")?;
    println!("order sets of {a}: plain {:?}, strong {:?}", torsion::order_set(&a, false).orders, torsion::order_set(&a, true).orders);
    Ok(())
}
