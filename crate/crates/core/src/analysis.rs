//! Structural invariants of a finite ring: idempotents, units and their
//! orders, the Jacobson radical, the center, and the usual ring predicates.
//!
//! Per-element scans run data-parallel over the carrier and are collected in
//! encoding order, so results never depend on scheduling. Expensive results
//! are cached on the ring handle (build-once, shared read-through).

use std::collections::{BTreeMap, HashSet};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::rings::{Construction, RingElem, RingHandle};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("element {0} is not nilpotent")]
    NotNil(RingElem),
    #[error("element {0} is not a central idempotent")]
    NotCentralIdempotent(RingElem),
}

#[derive(Default)]
pub(crate) struct Cache {
    table: OnceLock<Arc<ElementTable>>,
    idempotents: OnceLock<Arc<Vec<u32>>>,
    jacobson: OnceLock<Arc<Vec<u32>>>,
    pub(crate) similarity: OnceLock<Arc<Vec<(u32, u32)>>>,
}

/// Per-element multiplicative data, indexed by encoding.
pub struct ElementTable {
    order: Vec<u32>,
    nil: Vec<u32>,
}

impl ElementTable {
    /// Order of a unit, `None` for non-units.
    #[inline]
    pub fn order(&self, code: u32) -> Option<u32> {
        match self.order[code as usize] {
            0 => None,
            t => Some(t),
        }
    }

    #[inline]
    pub fn is_unit(&self, code: u32) -> bool {
        self.order[code as usize] != 0
    }

    /// Nilpotency index (`x^k = 0`, `k` minimal), `None` if not nilpotent.
    #[inline]
    pub fn nil_index(&self, code: u32) -> Option<u32> {
        match self.nil[code as usize] {
            0 => None,
            k => Some(k),
        }
    }

    pub fn unit_codes(&self) -> impl Iterator<Item = u32> + '_ {
        self.order.iter().enumerate().filter(|(_, &o)| o != 0).map(|(c, _)| c as u32)
    }

    pub fn unit_count(&self) -> usize {
        self.order.iter().filter(|&&o| o != 0).count()
    }

    /// LCM of all unit orders.
    pub fn exponent(&self) -> u64 {
        let distinct: std::collections::BTreeSet<u32> =
            self.order.iter().copied().filter(|&o| o != 0).collect();
        arith::lcm_all(distinct.into_iter().map(u64::from))
    }
}

/// Order and nilpotency index of `x`, found by cycle detection on `1, x, x^2, ...`.
///
/// The sequence is purely periodic exactly when `x` is a unit, and its cycle
/// is `{0}` exactly when `x` is nilpotent.
pub(crate) fn power_cycle(ring: &RingHandle, identity: u32, x: u32) -> (u32, u32) {
    let limit = 2 * ring.size() as u64 + 4;
    let mut steps = 0u64;
    let (mut power, mut lam) = (1u64, 1u64);
    let mut tortoise = identity;
    let mut hare = ring.mul(identity, x);
    while tortoise != hare {
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = ring.mul(hare, x);
        lam += 1;
        steps += 1;
        assert!(steps <= limit, "power sequence of {x} in {ring} exceeded {limit} steps");
    }
    let order = if ring.pow_from(identity, x, lam) == identity { lam as u32 } else { 0 };
    let nil = if hare == 0 {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = ring.mul(y, x);
            k += 1;
        }
        k
    } else {
        0
    };
    (order, nil)
}

impl RingHandle {
    /// `identity * x^e` by repeated squaring.
    pub(crate) fn pow_from(&self, identity: u32, x: u32, mut e: u64) -> u32 {
        let mut base = x;
        let mut acc = identity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }
}

fn build_table(ring: &RingHandle) -> ElementTable {
    let size = ring.size() as usize;
    match ring.construction() {
        Construction::Field(f) => {
            let order = (0..ring.size()).map(|x| f.order_of(x).unwrap_or(0)).collect();
            let mut nil = vec![0; size];
            nil[0] = 1;
            ElementTable { order, nil }
        }
        Construction::Product(factors) => {
            let tables: Vec<Arc<ElementTable>> = factors.iter().map(element_table).collect();
            let (order, nil) = (0..ring.size())
                .into_par_iter()
                .map(|c| {
                    let mut order = 1u64;
                    let mut nil = 1u32;
                    for (i, t) in tables.iter().enumerate() {
                        let x = ring.project(i, c).unwrap();
                        order = match t.order(x) {
                            Some(o) if order != 0 => arith::lcm(order, o as u64),
                            _ => 0,
                        };
                        nil = match t.nil_index(x) {
                            Some(k) if nil != 0 => nil.max(k),
                            _ => 0,
                        };
                    }
                    (order as u32, nil)
                })
                .unzip();
            ElementTable { order, nil }
        }
        _ => {
            let one = ring.one_code();
            let (order, nil) =
                (0..ring.size()).into_par_iter().map(|x| power_cycle(ring, one, x)).unzip();
            ElementTable { order, nil }
        }
    }
}

/// Unit orders and nilpotency indices of every element (cached).
pub fn element_table(ring: &RingHandle) -> Arc<ElementTable> {
    ring.cache().table.get_or_init(|| Arc::new(build_table(ring))).clone()
}

pub(crate) fn idempotent_codes(ring: &RingHandle) -> Arc<Vec<u32>> {
    ring.cache()
        .idempotents
        .get_or_init(|| {
            Arc::new(ring.codes().into_par_iter().filter(|&e| ring.mul(e, e) == e).collect())
        })
        .clone()
}

/// All `e` with `e^2 = e`, in encoding order.
pub fn idempotents(ring: &RingHandle) -> Vec<RingElem> {
    idempotent_codes(ring).iter().map(|&c| ring.wrap(c)).collect()
}

/// All units with their multiplicative orders, in encoding order.
pub fn units(ring: &RingHandle) -> Vec<(RingElem, u32)> {
    let t = element_table(ring);
    t.unit_codes().map(|c| (ring.wrap(c), t.order(c).unwrap())).collect()
}

pub fn unit_group_exponent(ring: &RingHandle) -> u64 {
    element_table(ring).exponent()
}

/// Left ideal `R x` is nil, found by walking its additive span.
fn left_ideal_is_nil(ring: &RingHandle, gens: &[u32], table: &ElementTable, x: u32) -> bool {
    let steps: Vec<u32> = gens.iter().map(|&g| ring.mul(g, x)).filter(|&y| y != 0).collect();
    let mut seen = HashSet::from([0u32]);
    let mut stack = vec![0u32];
    while let Some(y) = stack.pop() {
        for &s in &steps {
            let z = ring.add(y, s);
            if seen.insert(z) {
                if table.nil_index(z).is_none() {
                    return false;
                }
                stack.push(z);
            }
        }
    }
    true
}

pub(crate) fn jacobson_codes(ring: &RingHandle) -> Arc<Vec<u32>> {
    ring.cache()
        .jacobson
        .get_or_init(|| {
            let table = element_table(ring);
            let gens = ring.additive_generators();
            // x is in J iff 1 - r x is a unit for every r, iff every r x is
            // nilpotent (finite rings), iff the left ideal R x is nil.
            let j: Vec<u32> = ring
                .codes()
                .into_par_iter()
                .filter(|&x| table.nil_index(x).is_some())
                .filter(|&x| left_ideal_is_nil(ring, &gens, &table, x))
                .collect();
            let member = membership(ring, &j);
            let one = ring.one_code();
            for &x in &j {
                assert!(table.is_unit(ring.sub(one, x)), "1 - {x} is not a unit in {ring}");
                for &g in &gens {
                    assert!(member[ring.mul(g, x) as usize] && member[ring.mul(x, g) as usize]);
                }
            }
            Arc::new(j)
        })
        .clone()
}

pub(crate) fn membership(ring: &RingHandle, codes: &[u32]) -> Vec<bool> {
    let mut v = vec![false; ring.size() as usize];
    for &c in codes {
        v[c as usize] = true;
    }
    v
}

/// The Jacobson radical `{x : 1 - r x is a unit for all r}`.
pub fn jacobson_radical(ring: &RingHandle) -> Vec<RingElem> {
    jacobson_codes(ring).iter().map(|&c| ring.wrap(c)).collect()
}

/// Least `k` with `r^k = 0` for all `r` in `ideal`; 1 for `{0}`.
pub fn nil_index(ideal: &[RingElem]) -> Result<u32, AnalysisError> {
    let mut k = 1;
    for r in ideal {
        let t = element_table(r.ring());
        match t.nil_index(r.enc()) {
            Some(i) => k = k.max(i),
            None => return Err(AnalysisError::NotNil(r.clone())),
        }
    }
    Ok(k)
}

pub(crate) fn nil_index_of_jacobson(ring: &RingHandle) -> u32 {
    let t = element_table(ring);
    jacobson_codes(ring).iter().map(|&c| t.nil_index(c).unwrap()).max().unwrap_or(1)
}

/// Outcome of a ring predicate; a failing predicate names the elements that break it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    pub holds: bool,
    pub witness: Vec<RingElem>,
}

impl Predicate {
    fn from_witness(ring: &RingHandle, w: Option<Vec<u32>>) -> Self {
        match w {
            None => Predicate { holds: true, witness: Vec::new() },
            Some(codes) => Predicate {
                holds: false,
                witness: codes.into_iter().map(|c| ring.wrap(c)).collect(),
            },
        }
    }
}

/// Every idempotent commutes with every element.
pub fn is_abelian(ring: &RingHandle) -> Predicate {
    let gens = ring.additive_generators();
    let w = idempotent_codes(ring)
        .iter()
        .find_map(|&e| gens.iter().find(|&&g| !ring.commutes(e, g)).map(|&g| vec![e, g]));
    Predicate::from_witness(ring, w)
}

/// No nonzero `x` with `x^2 = 0`.
pub fn is_reduced(ring: &RingHandle) -> Predicate {
    let w = ring.codes().into_par_iter().find_first(|&x| x != 0 && ring.mul(x, x) == 0);
    Predicate::from_witness(ring, w.map(|x| vec![x]))
}

/// Every `x` satisfies `x^2 = x`.
pub fn is_boolean(ring: &RingHandle) -> Predicate {
    let w = ring.codes().into_par_iter().find_first(|&x| ring.mul(x, x) != x);
    Predicate::from_witness(ring, w.map(|x| vec![x]))
}

pub fn is_commutative(ring: &RingHandle) -> Predicate {
    let gens = ring.additive_generators();
    let w = gens.iter().enumerate().find_map(|(i, &g)| {
        gens[i + 1..].iter().find(|&&h| !ring.commutes(g, h)).map(|&h| vec![g, h])
    });
    Predicate::from_witness(ring, w)
}

pub(crate) fn is_central(ring: &RingHandle, gens: &[u32], z: u32) -> bool {
    gens.iter().all(|&g| ring.commutes(z, g))
}

pub fn center(ring: &RingHandle) -> Vec<RingElem> {
    let gens = ring.additive_generators();
    ring.codes()
        .into_par_iter()
        .filter(|&z| is_central(ring, &gens, z))
        .collect::<Vec<_>>()
        .into_iter()
        .map(|c| ring.wrap(c))
        .collect()
}

pub(crate) fn central_idempotent_codes(ring: &RingHandle) -> Vec<u32> {
    let gens = ring.additive_generators();
    idempotent_codes(ring).iter().copied().filter(|&e| is_central(ring, &gens, e)).collect()
}

/// Minimal nonzero central idempotents under `e <= f  <=>  e f = e`.
pub fn primitive_central_idempotents(ring: &RingHandle) -> Vec<RingElem> {
    let central = central_idempotent_codes(ring);
    central
        .iter()
        .copied()
        .filter(|&e| e != 0)
        .filter(|&e| central.iter().all(|&f| f == 0 || f == e || ring.mul(f, e) != f))
        .map(|c| ring.wrap(c))
        .collect()
}

/// Whether the corner `eRe` (with identity `e`) is a field.
pub fn corner_is_field(ring: &RingHandle, e: &RingElem) -> Result<bool, AnalysisError> {
    let c = e.enc();
    let gens = ring.additive_generators();
    if e.ring() != ring || ring.mul(c, c) != c || !is_central(ring, &gens, c) {
        return Err(AnalysisError::NotCentralIdempotent(e.clone()));
    }
    Ok(corner_is_field_codes(ring, &gens, c))
}

pub(crate) fn corner_is_field_codes(ring: &RingHandle, gens: &[u32], e: u32) -> bool {
    if e == 0 {
        return false;
    }
    let corner_gens: Vec<u32> = gens.iter().map(|&g| ring.mul(e, g)).collect();
    for (i, &a) in corner_gens.iter().enumerate() {
        if corner_gens[i + 1..].iter().any(|&b| !ring.commutes(a, b)) {
            return false;
        }
    }
    let corner = corner_elements(ring, e);
    corner.par_iter().filter(|&&a| a != 0).all(|&a| power_cycle(ring, e, a).0 != 0)
}

/// Distinct elements `e r`, sorted.
pub(crate) fn corner_elements(ring: &RingHandle, e: u32) -> Vec<u32> {
    let mut seen = vec![false; ring.size() as usize];
    for r in ring.codes() {
        seen[ring.mul(e, r) as usize] = true;
    }
    seen.iter().enumerate().filter(|(_, &s)| s).map(|(c, _)| c as u32).collect()
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct StructureFlags {
    pub abelian: bool,
    pub reduced: bool,
    pub boolean: bool,
    pub commutative: bool,
    pub units_equal_one_plus_j: bool,
}

/// Everything [`analyze`] computes, with elements as encodings.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct StructureReport {
    pub ring: String,
    pub size: u32,
    pub characteristic: u64,
    pub idempotents: Vec<u32>,
    pub units: Vec<(u32, u32)>,
    pub unit_group_exponent: u64,
    pub jacobson: Vec<u32>,
    pub nil_index_of_jacobson: u32,
    pub center_size: u32,
    pub primitive_central_idempotents: Vec<u32>,
    pub flags: StructureFlags,
    /// Elements refuting each flag that came out false.
    pub witnesses: BTreeMap<String, Vec<u32>>,
}

pub fn analyze(ring: &RingHandle) -> StructureReport {
    let table = element_table(ring);
    let idem = idempotent_codes(ring);
    let jac = jacobson_codes(ring);
    let mut witnesses = BTreeMap::new();
    let mut flag = |name: &str, p: Predicate| {
        if !p.holds {
            witnesses.insert(name.to_string(), p.witness.iter().map(RingElem::enc).collect());
        }
        p.holds
    };
    let flags = StructureFlags {
        abelian: flag("abelian", is_abelian(ring)),
        reduced: flag("reduced", is_reduced(ring)),
        boolean: flag("boolean", is_boolean(ring)),
        commutative: flag("commutative", is_commutative(ring)),
        units_equal_one_plus_j: table.unit_count() == jac.len(),
    };
    StructureReport {
        ring: ring.spec().to_string(),
        size: ring.size(),
        characteristic: ring.characteristic(),
        idempotents: idem.to_vec(),
        units: table.unit_codes().map(|c| (c, table.order(c).unwrap())).collect(),
        unit_group_exponent: table.exponent(),
        jacobson: jac.to_vec(),
        nil_index_of_jacobson: nil_index_of_jacobson(ring),
        center_size: center(ring).len() as u32,
        primitive_central_idempotents: primitive_central_idempotents(ring)
            .iter()
            .map(RingElem::enc)
            .collect(),
        flags,
        witnesses,
    }
}
