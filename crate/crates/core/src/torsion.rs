//! Torsion-clean decompositions and the minimal index search.
//!
//! For an element `r`, the achievable order set `D(r)` collects `o(u)` over
//! every decomposition `r = e + u` (with `eu = ue` in strong mode). A ring is
//! `d`-torsion clean exactly when every `D(r)` contains a divisor of `d`, and
//! the minimal such `d` divides the exponent of the unit group, so the search
//! walks the divisors of that exponent in increasing order.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{self, element_table, idempotent_codes, ElementTable};
use crate::arith;
use crate::rings::{RingElem, RingError, RingHandle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Plain,
    Strong,
}

impl Mode {
    pub fn from_strong(strong: bool) -> Self {
        if strong {
            Mode::Strong
        } else {
            Mode::Plain
        }
    }

    pub fn is_strong(self) -> bool {
        self == Mode::Strong
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Plain => "plain",
            Mode::Strong => "strong",
        })
    }
}

/// `r = e + u` with `e` idempotent, `u` a unit of order `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub r: RingElem,
    pub e: RingElem,
    pub u: RingElem,
    pub order: u32,
    pub strong: bool,
}

/// Serialized form of a [`Certificate`], elements as encodings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub ring: String,
    pub r: u32,
    pub e: u32,
    pub u: u32,
    pub order: u32,
    pub strong: bool,
}

impl Certificate {
    pub fn to_record(&self) -> CertificateRecord {
        CertificateRecord {
            ring: self.r.ring().spec().to_string(),
            r: self.r.enc(),
            e: self.e.enc(),
            u: self.u.enc(),
            order: self.order,
            strong: self.strong,
        }
    }

    /// Rebuilds a certificate against `ring`; the record's spec must match.
    pub fn from_record(ring: &RingHandle, rec: &CertificateRecord) -> Result<Self, RingError> {
        if rec.ring != ring.spec() {
            return Err(RingError::HandleMismatch);
        }
        Ok(Certificate {
            r: ring.elem(rec.r as u64)?,
            e: ring.elem(rec.e as u64)?,
            u: ring.elem(rec.u as u64)?,
            order: rec.order,
            strong: rec.strong,
        })
    }
}

/// Achievable unit orders over all valid decompositions of `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderSet {
    pub r: RingElem,
    pub orders: Vec<u32>,
    pub strong: bool,
}

impl OrderSet {
    /// Smallest achievable order (the `r_min` of the LCM argument).
    pub fn min(&self) -> Option<u32> {
        self.orders.first().copied()
    }
}

fn order_set_codes(
    ring: &RingHandle,
    table: &ElementTable,
    idempotents: &[u32],
    r: u32,
    strong: bool,
) -> Vec<u32> {
    let mut out: Vec<u32> = idempotents
        .iter()
        .filter(|&&e| !strong || ring.commutes(e, r))
        .filter_map(|&e| table.order(ring.sub(r, e)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// The set `D(r)`, found by walking idempotents and looking up `r - e`.
pub fn order_set(r: &RingElem, strong: bool) -> OrderSet {
    let ring = r.ring();
    let table = element_table(ring);
    let idem = idempotent_codes(ring);
    OrderSet { r: r.clone(), orders: order_set_codes(ring, &table, &idem, r.enc(), strong), strong }
}

/// A decomposition of `r` whose unit order divides `n`, minimizing `(enc(e), enc(u))`.
pub fn decompose(r: &RingElem, n: u64, strong: bool) -> Option<Certificate> {
    assert!(n >= 1, "torsion exponent must be positive");
    let ring = r.ring();
    let table = element_table(ring);
    let code = r.enc();
    // u = r - e is determined by e, so the first idempotent in encoding order wins
    idempotent_codes(ring).iter().find_map(|&e| {
        if strong && !ring.commutes(e, code) {
            return None;
        }
        let u = ring.sub(code, e);
        let order = table.order(u)?;
        n.is_multiple_of(order as u64).then(|| Certificate {
            r: r.clone(),
            e: ring.wrap(e),
            u: ring.wrap(u),
            order,
            strong,
        })
    })
}

/// Re-checks every clause of a certificate without cached tables.
pub fn verify_certificate(c: &Certificate) -> bool {
    let ring = c.r.ring();
    if c.e.ring() != ring || c.u.ring() != ring || c.order == 0 {
        return false;
    }
    let (r, e, u) = (c.r.enc(), c.e.enc(), c.u.enc());
    if ring.mul_structural(e, e) != e || ring.add(e, u) != r {
        return false;
    }
    if c.strong && ring.mul_structural(e, u) != ring.mul_structural(u, e) {
        return false;
    }
    // u^order = 1 makes u a unit; minimality pins the order
    let one = ring.one_code();
    let mut x = u;
    for t in 1..=c.order {
        if x == one {
            return t == c.order;
        }
        x = ring.mul_structural(x, u);
    }
    false
}

/// Smallest generating set of `U(R)` found greedily in encoding order.
fn unit_generators(ring: &RingHandle, table: &ElementTable) -> Vec<u32> {
    let mut gens = Vec::new();
    let mut group: HashSet<u32> = HashSet::from([ring.one_code()]);
    for u in table.unit_codes() {
        if group.contains(&u) {
            continue;
        }
        gens.push(u);
        let mut stack: Vec<u32> = group.iter().copied().collect();
        while let Some(x) = stack.pop() {
            for &g in &gens {
                let y = ring.mul(x, g);
                if group.insert(y) {
                    stack.push(y);
                }
            }
        }
        if group.len() == table.unit_count() {
            break;
        }
    }
    gens
}

pub(crate) fn similarity_codes(ring: &RingHandle) -> Arc<Vec<(u32, u32)>> {
    ring.cache()
        .similarity
        .get_or_init(|| {
            if analysis::is_commutative(ring).holds {
                return Arc::new(ring.codes().map(|c| (c, 1)).collect());
            }
            let table = element_table(ring);
            let conj: Vec<(u32, u32)> = unit_generators(ring, &table)
                .into_iter()
                .map(|g| (g, ring.pow(g, table.order(g).unwrap() as u64 - 1)))
                .collect();
            let mut seen = vec![false; ring.size() as usize];
            let mut classes = Vec::new();
            for r in ring.codes() {
                if seen[r as usize] {
                    continue;
                }
                seen[r as usize] = true;
                let mut size = 1;
                let mut stack = vec![r];
                while let Some(x) = stack.pop() {
                    for &(g, ginv) in &conj {
                        let y = ring.mul(ring.mul(g, x), ginv);
                        if !seen[y as usize] {
                            seen[y as usize] = true;
                            size += 1;
                            stack.push(y);
                        }
                    }
                }
                classes.push((r, size));
            }
            Arc::new(classes)
        })
        .clone()
}

/// Orbits of `r -> g r g^-1` over units `g`, as (enc-smallest member, size).
pub fn similarity_classes(ring: &RingHandle) -> Vec<(RingElem, u32)> {
    similarity_codes(ring).iter().map(|&(c, n)| (ring.wrap(c), n)).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub mode: Mode,
    /// Compute one order set per similarity class instead of per element.
    pub conjugacy_reduction: bool,
}

impl SearchOptions {
    pub fn plain() -> Self {
        SearchOptions { mode: Mode::Plain, conjugacy_reduction: true }
    }

    pub fn strong() -> Self {
        SearchOptions { mode: Mode::Strong, conjugacy_reduction: true }
    }

    pub fn without_reduction(mut self) -> Self {
        self.conjugacy_reduction = false;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub element: u32,
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub classes_scanned: u32,
    pub carrier_size: u32,
    pub distinct_order_sets: usize,
}

/// Result of [`torsion_clean_index`]. `index` is `None` when some element has
/// no decomposition at all in the requested mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub ring: String,
    pub mode: Mode,
    pub index: Option<u64>,
    pub no_decomposition_witness: Option<u32>,
    pub witnesses: Vec<Witness>,
    pub exponent_of_units: u64,
    pub element_count: u32,
    pub elapsed_ms: Option<f64>,
    pub stats: SearchStats,
}

impl IndexReport {
    /// Same report with timing and reduction statistics cleared.
    pub fn normalized(&self) -> Self {
        IndexReport {
            elapsed_ms: None,
            stats: SearchStats { classes_scanned: 0, ..self.stats.clone() },
            ..self.clone()
        }
    }
}

/// The least `n` such that every element has a (strongly) `n`-torsion clean decomposition.
pub fn torsion_clean_index(ring: &RingHandle, opts: SearchOptions) -> IndexReport {
    let start = Instant::now();
    let strong = opts.mode.is_strong();
    let table = element_table(ring);
    let idem = idempotent_codes(ring);
    let exponent = table.exponent();

    let reps: Vec<u32> = if opts.conjugacy_reduction {
        similarity_codes(ring).iter().map(|&(c, _)| c).collect()
    } else {
        ring.codes().collect()
    };
    let sets: Vec<Vec<u32>> =
        reps.par_iter().map(|&r| order_set_codes(ring, &table, &idem, r, strong)).collect();

    // distinct order sets, each with the smallest element realizing it
    let mut distinct: BTreeMap<&[u32], u32> = BTreeMap::new();
    for (&r, set) in reps.iter().zip(&sets) {
        distinct.entry(set.as_slice()).or_insert(r);
    }
    let stats = SearchStats {
        classes_scanned: reps.len() as u32,
        carrier_size: ring.size(),
        distinct_order_sets: distinct.len(),
    };
    let mut report = IndexReport {
        ring: ring.spec().to_string(),
        mode: opts.mode,
        index: None,
        no_decomposition_witness: None,
        witnesses: Vec::new(),
        exponent_of_units: exponent,
        element_count: ring.size(),
        elapsed_ms: None,
        stats,
    };

    if let Some(&r) = distinct.get(&[][..]) {
        assert!(strong, "{ring}: element {r} has no clean decomposition; finite rings are clean");
        report.no_decomposition_witness = Some(r);
        report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        return report;
    }

    let feasible =
        |d: u64| distinct.keys().all(|set| set.iter().any(|&o| d.is_multiple_of(o as u64)));
    let index = arith::divisors(exponent)
        .into_iter()
        .find(|&d| feasible(d))
        .expect("the unit exponent is always feasible");

    // For each prime p | index, some element has no order dividing index / p.
    let mut witnesses: BTreeMap<u32, u32> = BTreeMap::new();
    for (p, _) in arith::factorize(index) {
        let reduced = index / p;
        let forcing = distinct
            .iter()
            .filter(|(set, _)| !set.iter().any(|&o| reduced % o as u64 == 0))
            .map(|(_, &r)| r)
            .min()
            .expect("minimality of the index forces every prime factor");
        let set = &sets[reps.binary_search(&forcing).unwrap()];
        let order = *set.iter().find(|&&o| index % o as u64 == 0).unwrap();
        witnesses.insert(forcing, order);
    }
    report.index = Some(index);
    report.witnesses =
        witnesses.into_iter().map(|(element, order)| Witness { element, order }).collect();
    report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    report
}

/// Plain and strong indices, plain first.
pub fn both_indices(ring: &RingHandle) -> (IndexReport, IndexReport) {
    (
        torsion_clean_index(ring, SearchOptions::plain()),
        torsion_clean_index(ring, SearchOptions::strong()),
    )
}
