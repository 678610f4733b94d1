//! Truncations F[x_1..x_v]/(x_i^p) of the local ring with a non-nilpotent
//! radical: the strong index of each finite truncation next to p(p^k - 1).

use torsion_clean::torsion::{self, SearchOptions};
use torsion_clean::{analysis, RingHandle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (p, k, v) in [(2u64, 1u32, 1u32), (2, 1, 3), (2, 2, 1), (2, 2, 2), (3, 1, 1), (3, 1, 2), (2, 3, 1)] {
        let q = p.pow(k);
        let r = RingHandle::parse(&format!("Q(GF({q}),{p},{v})"))?;
        let rep = torsion::torsion_clean_index(&r, SearchOptions::strong());
        println!(
            "{:<14} |R| = {:>5}  nil index of J = {}  strong index = {:?}  p(p^k - 1) = {}",
            r.spec(),
            r.size(),
            analysis::analyze(&r).nil_index_of_jacobson,
            rep.index,
            p * (q - 1)
        );
    }
    Ok(())
}
