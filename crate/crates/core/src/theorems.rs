//! Executable forms of the structural results, checked on concrete rings.
//!
//! Each check decides its own applicability from the ring, so the suite can
//! run blindly over a corpus. A failing check carries witness encodings that
//! [`confirm_witness`] re-verifies from scratch.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{self, element_table, idempotent_codes, jacobson_codes, membership};
use crate::arith;
use crate::ffield::FieldSpec;
use crate::rings::{Construction, RingError, RingHandle};
use crate::torsion::{torsion_clean_index, IndexReport, SearchOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub ring: String,
    pub status: Status,
    /// The exponent the check ran at, when it takes one.
    pub n: Option<u64>,
    pub witness: Option<Vec<u32>>,
    pub detail: String,
}

impl CheckResult {
    fn new(id: &str, ring: &RingHandle, n: Option<u64>) -> Self {
        CheckResult {
            id: id.to_string(),
            ring: ring.spec().to_string(),
            status: Status::Pass,
            n,
            witness: None,
            detail: String::new(),
        }
    }

    fn pass(mut self, detail: impl Into<String>) -> Self {
        self.status = Status::Pass;
        self.detail = detail.into();
        self
    }

    fn fail(mut self, witness: Vec<u32>, detail: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.witness = Some(witness);
        self.detail = detail.into();
        self
    }

    fn skip(mut self, detail: impl Into<String>) -> Self {
        self.status = Status::NotApplicable;
        self.detail = detail.into();
        self
    }

    fn verdict(self, ok: bool, witness: Vec<u32>, detail: impl Into<String>) -> Self {
        if ok {
            self.pass(detail)
        } else {
            self.fail(witness, detail)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("unknown check id '{0}'")]
    UnknownCheck(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Stable check ids, in suite order.
pub const CHECK_IDS: &[&str] = &[
    "identity-eq",
    "unique-clean-radical",
    "lemma-reduced",
    "thm-pi",
    "idempotent-lifting",
    "prop-fields",
    "thm-comm",
    "lemma-l",
    "cor-uu",
    "thm-ab",
    "thm-stn",
];

fn identity_value(ring: &RingHandle, a: u32, n: u64) -> u32 {
    let one = ring.one_code();
    let left = ring.sub(ring.pow(a, n), one);
    let right = ring.sub(ring.pow(ring.sub(a, one), n), one);
    ring.mul(left, right)
}

fn identity_violation(ring: &RingHandle, n: u64) -> Option<u32> {
    ring.codes().find(|&a| identity_value(ring, a, n) != 0)
}

/// `(a^n - 1)((a - 1)^n - 1) = 0` for every `a`.
pub fn check_identity_eq(ring: &RingHandle, n: u64) -> CheckResult {
    let res = CheckResult::new("identity-eq", ring, Some(n));
    match identity_violation(ring, n) {
        None => res.pass(format!("identity holds for all {} elements at n = {n}", ring.size())),
        Some(a) => res.fail(vec![a], format!("({a}^{n} - 1)(({a} - 1)^{n} - 1) != 0")),
    }
}

fn clean_idempotents(ring: &RingHandle, x: u32) -> Vec<u32> {
    let table = element_table(ring);
    idempotent_codes(ring).iter().copied().filter(|&e| table.is_unit(ring.sub(x, e))).collect()
}

/// Every `1 + j` with `j` in `J(R)` has the single clean decomposition `0 + (1 + j)`.
pub fn check_unique_clean_on_radical_units(ring: &RingHandle) -> CheckResult {
    let res = CheckResult::new("unique-clean-radical", ring, None);
    let one = ring.one_code();
    let jac = jacobson_codes(ring);
    for &j in jac.iter() {
        let es = clean_idempotents(ring, ring.add(one, j));
        if es != [0] {
            let mut w = vec![j];
            w.extend(es);
            return res.fail(w, format!("1 + {j} has clean idempotent set other than {{0}}"));
        }
    }
    res.pass(format!("{} radical units each decompose only as 0 + u", jac.len()))
}

/// Odd `n` with the identity forces characteristic 2, reducedness and `J = 0`.
pub fn check_lemma_reduced(ring: &RingHandle, n: u64) -> CheckResult {
    let res = CheckResult::new("lemma-reduced", ring, Some(n));
    if n.is_multiple_of(2) {
        return res.skip("n is even");
    }
    if identity_violation(ring, n).is_some() {
        return res.skip(format!("identity fails at n = {n}"));
    }
    let char2 = ring.characteristic() == 2;
    let reduced = analysis::is_reduced(ring);
    let jac = jacobson_codes(ring);
    let witness = if !char2 {
        vec![ring.one_code()]
    } else if !reduced.holds {
        vec![reduced.witness[0].enc()]
    } else if jac.len() > 1 {
        vec![jac[1]]
    } else {
        Vec::new()
    };
    let detail = format!(
        "char = {}, reduced = {}, |J| = {}",
        ring.characteristic(),
        reduced.holds,
        jac.len()
    );
    res.verdict(witness.is_empty(), witness, detail)
}

fn show(n: Option<u64>) -> String {
    n.map_or("none".to_string(), |n| n.to_string())
}

fn nil_index_bound(c: u64, n: u64) -> u64 {
    u32::try_from(n).ok().and_then(|n| c.checked_pow(n)).unwrap_or(u64::MAX)
}

/// `J(R)` is nil of index below `char(R)^n`, and at most `n` over a prime field.
pub fn check_theorem_pi(ring: &RingHandle, strong: &IndexReport) -> CheckResult {
    let Some(n) = strong.index else {
        return CheckResult::new("thm-pi", ring, None).skip("no strong index");
    };
    let res = CheckResult::new("thm-pi", ring, Some(n));
    let table = element_table(ring);
    let c = ring.characteristic();
    let bound = nil_index_bound(c, n);
    let prime_char = arith::is_prime(c);
    let bad = jacobson_codes(ring).iter().copied().find(|&j| {
        let k = table.nil_index(j).unwrap() as u64;
        k >= bound || (prime_char && k > n)
    });
    let k = analysis::nil_index_of_jacobson(ring);
    let detail = format!("nil index of J = {k}, char = {c}, n = {n}");
    match bad {
        None => res.pass(detail),
        Some(j) => res.fail(vec![j], detail),
    }
}

/// `R/J` with each coset named by its smallest member.
pub(crate) struct Quotient<'a> {
    ring: &'a RingHandle,
    rep: Vec<u32>,
    reps: Vec<u32>,
}

impl<'a> Quotient<'a> {
    pub(crate) fn new(ring: &'a RingHandle) -> Self {
        let jac = jacobson_codes(ring);
        let mut rep = vec![u32::MAX; ring.size() as usize];
        let mut reps = Vec::new();
        for x in ring.codes() {
            if rep[x as usize] != u32::MAX {
                continue;
            }
            reps.push(x);
            for &j in jac.iter() {
                rep[ring.add(x, j) as usize] = x;
            }
        }
        Quotient { ring, rep, reps }
    }

    fn norm(&self, x: u32) -> u32 {
        self.rep[x as usize]
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.norm(self.ring.mul(a, b))
    }

    fn commutes(&self, a: u32, b: u32) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub(crate) fn size(&self) -> usize {
        self.reps.len()
    }

    pub(crate) fn idempotents(&self) -> Vec<u32> {
        self.reps.iter().copied().filter(|&a| self.mul(a, a) == a).collect()
    }

    fn is_central(&self, gens: &[u32], a: u32) -> bool {
        gens.iter().all(|&g| self.commutes(a, g))
    }

    /// First pair of a non-central idempotent coset and a generator it misses.
    fn non_central_idempotent(&self, gens: &[u32]) -> Option<(u32, u32)> {
        self.idempotents()
            .into_iter()
            .find_map(|e| gens.iter().find(|&&g| !self.commutes(e, g)).map(|&g| (e, g)))
    }

    pub(crate) fn primitive_central_idempotents(&self) -> Vec<u32> {
        let gens = self.ring.additive_generators();
        let central: Vec<u32> =
            self.idempotents().into_iter().filter(|&e| self.is_central(&gens, e)).collect();
        central
            .iter()
            .copied()
            .filter(|&e| e != 0)
            .filter(|&e| central.iter().all(|&f| f == 0 || f == e || self.mul(f, e) != f))
            .collect()
    }

    fn corner(&self, e: u32) -> Vec<u32> {
        let mut seen = vec![false; self.ring.size() as usize];
        for &x in &self.reps {
            seen[self.mul(e, x) as usize] = true;
        }
        seen.iter().enumerate().filter(|(_, &s)| s).map(|(c, _)| c as u32).collect()
    }

    /// Size of the corner `eRe` if it is a field.
    pub(crate) fn corner_field_order(&self, e: u32) -> Option<usize> {
        let gens: Vec<u32> =
            self.ring.additive_generators().iter().map(|&g| self.mul(e, g)).collect();
        for (i, &a) in gens.iter().enumerate() {
            if gens[i + 1..].iter().any(|&b| !self.commutes(a, b)) {
                return None;
            }
        }
        let corner = self.corner(e);
        // a nonzero y is invertible in the corner iff its powers return to e
        let all_units = corner.iter().filter(|&&y| y != 0).all(|&y| {
            let mut x = y;
            for _ in 0..corner.len() {
                if x == e {
                    return true;
                }
                x = self.mul(x, y);
            }
            false
        });
        all_units.then_some(corner.len())
    }
}

/// `R` abelian iff `R/J` is abelian and idempotents lift uniquely modulo `J`.
pub fn check_idempotent_lifting(ring: &RingHandle) -> CheckResult {
    let res = CheckResult::new("idempotent-lifting", ring, None);
    let abelian = analysis::is_abelian(ring);
    let quot = Quotient::new(ring);
    let gens = ring.additive_generators();
    let mut lifts = vec![0u32; ring.size() as usize];
    for &e in idempotent_codes(ring).iter() {
        lifts[quot.norm(e) as usize] += 1;
    }
    let idem_cosets = quot.idempotents();
    let non_unique = idem_cosets.iter().copied().find(|&a| lifts[a as usize] != 1);
    let quot_abelian = quot.non_central_idempotent(&gens);
    let right = non_unique.is_none() && quot_abelian.is_none();
    let detail = format!(
        "abelian = {}, unique lifting = {}, quotient abelian = {}",
        abelian.holds,
        non_unique.is_none(),
        quot_abelian.is_none()
    );
    let witness = if abelian.holds {
        match (non_unique, quot_abelian) {
            (Some(a), _) => vec![a],
            (None, Some((e, g))) => vec![e, g],
            (None, None) => Vec::new(),
        }
    } else {
        abelian.witness.iter().map(|x| x.enc()).collect()
    };
    res.verdict(abelian.holds == right, witness, detail)
}

/// Both indices of a finite product of fields equal `LCM(|F_i| - 1)`.
pub fn check_prop_fields(fields: &[FieldSpec]) -> Result<CheckResult, RingError> {
    let factors = fields.iter().cloned().map(RingHandle::field).collect();
    let ring = RingHandle::product(factors)?;
    let expected = arith::lcm_all(fields.iter().map(|f| f.order() as u64 - 1));
    Ok(prop_fields_on(&ring, expected))
}

fn prop_fields_on(ring: &RingHandle, expected: u64) -> CheckResult {
    let plain = torsion_clean_index(ring, SearchOptions::plain()).index;
    let strong = torsion_clean_index(ring, SearchOptions::strong()).index;
    let res = CheckResult::new("prop-fields", ring, Some(expected));
    let detail = format!("LCM = {expected}, plain = {}, strong = {}", show(plain), show(strong));
    let ok = plain == Some(expected) && strong == Some(expected);
    res.verdict(ok, Vec::new(), detail)
}

fn field_factors(ring: &RingHandle) -> Option<Vec<FieldSpec>> {
    match ring.construction() {
        Construction::Field(f) => Some(vec![f.clone()]),
        Construction::Product(factors) => factors
            .iter()
            .map(|r| match r.construction() {
                Construction::Field(f) => Some(f.clone()),
                _ => None,
            })
            .collect(),
        _ => None,
    }
}

/// Field corners of `R` under its primitive central idempotents, as orders.
fn field_splitting(ring: &RingHandle) -> Option<Vec<usize>> {
    let gens = ring.additive_generators();
    analysis::primitive_central_idempotents(ring)
        .iter()
        .map(|e| {
            analysis::corner_is_field_codes(ring, &gens, e.enc())
                .then(|| analysis::corner_elements(ring, e.enc()).len())
        })
        .collect()
}

/// For odd `n`: strongly `n`-torsion clean, no units of even order with one of
/// order `n`, and a splitting into characteristic-2 fields with LCM `n` agree.
pub fn check_theorem_comm(ring: &RingHandle, strong: &IndexReport) -> CheckResult {
    let table = element_table(ring);
    let orders: Vec<u32> = table.unit_codes().map(|u| table.order(u).unwrap()).collect();
    let all_odd = orders.iter().all(|o| o % 2 == 1);
    let res = CheckResult::new("thm-comm", ring, strong.index);
    let odd_index = strong.index.filter(|n| n % 2 == 1);
    if odd_index.is_none() && !all_odd {
        let u = table.unit_codes().find(|&u| table.order(u).unwrap().is_multiple_of(2)).unwrap();
        return res.skip(format!("strong index {} is even and unit {u} has even order", show(strong.index)));
    }
    let n = odd_index.unwrap_or_else(|| table.exponent());
    let c1 = odd_index.is_some();
    let c3 = all_odd && orders.iter().any(|&o| o as u64 == n);
    let split = field_splitting(ring);
    let c2 = ring.characteristic() == 2
        && split.as_ref().is_some_and(|sizes| {
            arith::lcm_all(sizes.iter().map(|&q| q as u64 - 1)) == n
        });
    let detail = format!("n = {n}; strongly n-clean = {c1}, field splitting = {c2}, odd unit orders = {c3}");
    let witness = match (split, analysis::is_reduced(ring)) {
        (_, p) if !p.holds => p.witness.iter().map(|x| x.enc()).collect(),
        (Some(_), _) => analysis::primitive_central_idempotents(ring).iter().map(|e| e.enc()).collect(),
        (None, _) => Vec::new(),
    };
    res.verdict(c1 == c2 && c2 == c3, witness, detail)
}

/// `u^t - 1` in `J` forces `u^(t m^s) = 1`, `m = char(R)`, `s + 1` the nil index of `J`.
pub fn check_lemma_l(ring: &RingHandle) -> CheckResult {
    let res = CheckResult::new("lemma-l", ring, None);
    match lemma_l_violation(ring) {
        None => {
            let s = analysis::nil_index_of_jacobson(ring) - 1;
            res.pass(format!("m = {}, s = {s}", ring.characteristic()))
        }
        Some((u, t)) => res.fail(vec![u], format!("u^{t} - 1 lies in J but the power fails")),
    }
}

fn lemma_l_violation(ring: &RingHandle) -> Option<(u32, u64)> {
    let table = element_table(ring);
    let in_j = membership(ring, &jacobson_codes(ring));
    let one = ring.one_code();
    let m = ring.characteristic();
    let s = analysis::nil_index_of_jacobson(ring) - 1;
    let scale = m.checked_pow(s).expect("m^s fits in 64 bits");
    let exp = table.exponent();
    let found = table.unit_codes().find_map(|u| {
        let mut x = one;
        (1..=exp).find_map(|t| {
            x = ring.mul(x, u);
            let hit = in_j[ring.sub(x, one) as usize];
            (hit && ring.pow(u, t * scale) != one).then_some((u, t))
        })
    });
    found
}

/// With `R/J` boolean, the plain index is `exp(U(R))`, a power of 2.
pub fn check_corollary_uu(ring: &RingHandle) -> CheckResult {
    let res = CheckResult::new("cor-uu", ring, None);
    let in_j = membership(ring, &jacobson_codes(ring));
    if let Some(x) = ring.codes().find(|&x| !in_j[ring.sub(ring.mul(x, x), x) as usize]) {
        return res.skip(format!("R/J is not boolean: {x}^2 - {x} is outside J"));
    }
    let exp = analysis::unit_group_exponent(ring);
    let plain = torsion_clean_index(ring, SearchOptions::plain()).index;
    let detail = format!("exp(U) = {exp}, plain index = {}", show(plain));
    let ok = arith::is_power_of_two(exp) && plain == Some(exp);
    CheckResult { n: Some(exp), ..res }.verdict(ok, Vec::new(), detail)
}

/// Finite form: `R` abelian iff `J` nil, idempotents lift uniquely and `R/J`
/// splits into fields via its primitive central idempotents.
pub fn check_theorem_ab(ring: &RingHandle) -> CheckResult {
    let res = CheckResult::new("thm-ab", ring, None);
    let table = element_table(ring);
    let jac = jacobson_codes(ring);
    let abelian = analysis::is_abelian(ring);
    let nil = jac.iter().all(|&j| table.nil_index(j).is_some());
    let quot = Quotient::new(ring);
    let mut lifts = vec![0u32; ring.size() as usize];
    for &e in idempotent_codes(ring).iter() {
        lifts[quot.norm(e) as usize] += 1;
    }
    let unique = quot.idempotents().iter().all(|&a| lifts[a as usize] == 1);
    let prims = quot.primitive_central_idempotents();
    let fields: Option<Vec<usize>> = prims.iter().map(|&e| quot.corner_field_order(e)).collect();
    // the corners must exhaust R/J
    let splits = fields.as_ref().is_some_and(|f| f.iter().product::<usize>() == quot.size());
    let right = nil && unique && splits;
    let lcm = fields
        .as_ref()
        .map(|f| arith::lcm_all(f.iter().map(|&q| q as u64 - 1)))
        .filter(|_| splits);
    let detail = format!(
        "abelian = {}, J nil = {nil}, unique lifting = {unique}, R/J field orders = {}, LCM = {}",
        abelian.holds,
        fields.filter(|_| splits).map_or("none".to_string(), |f| format!("{f:?}")),
        show(lcm)
    );
    let witness = abelian.witness.iter().map(|x| x.enc()).collect();
    CheckResult { n: lcm, ..res }.verdict(abelian.holds == right, witness, detail)
}

/// Equivalence of strong index existence and finite unit exponent; vacuous for finite rings.
pub fn check_theorem_stn(ring: &RingHandle, strong: &IndexReport) -> CheckResult {
    CheckResult::new("thm-stn", ring, strong.index).skip(format!(
        "finite ring: exp(U) = {} is always finite; strong index = {}",
        strong.exponent_of_units,
        show(strong.index)
    ))
}

/// Lazily shared inputs of the suite.
struct Context<'a> {
    ring: &'a RingHandle,
    strong: OnceLock<Arc<IndexReport>>,
}

impl Context<'_> {
    fn strong(&self) -> Arc<IndexReport> {
        self.strong
            .get_or_init(|| Arc::new(torsion_clean_index(self.ring, SearchOptions::strong())))
            .clone()
    }

    fn run(&self, id: &str) -> Result<CheckResult, CheckError> {
        let ring = self.ring;
        let with_strong_n = |f: fn(&RingHandle, u64) -> CheckResult| match self.strong().index {
            Some(n) => f(ring, n),
            None => CheckResult::new(id, ring, None).skip("no strong index"),
        };
        Ok(match id {
            "identity-eq" => with_strong_n(check_identity_eq),
            "unique-clean-radical" => check_unique_clean_on_radical_units(ring),
            "lemma-reduced" => with_strong_n(check_lemma_reduced),
            "thm-pi" => check_theorem_pi(ring, &self.strong()),
            "idempotent-lifting" => check_idempotent_lifting(ring),
            "prop-fields" => match field_factors(ring) {
                Some(fs) => {
                    prop_fields_on(ring, arith::lcm_all(fs.iter().map(|f| f.order() as u64 - 1)))
                }
                None => CheckResult::new(id, ring, None).skip("not a finite product of fields"),
            },
            "thm-comm" => check_theorem_comm(ring, &self.strong()),
            "lemma-l" => check_lemma_l(ring),
            "cor-uu" => check_corollary_uu(ring),
            "thm-ab" => check_theorem_ab(ring),
            "thm-stn" => check_theorem_stn(ring, &self.strong()),
            other => return Err(CheckError::UnknownCheck(other.to_string())),
        })
    }
}

/// Runs one check by id.
pub fn run_check(ring: &RingHandle, id: &str) -> Result<CheckResult, CheckError> {
    Context { ring, strong: OnceLock::new() }.run(id)
}

/// Every check, in [`CHECK_IDS`] order.
pub fn run_suite(ring: &RingHandle) -> Vec<CheckResult> {
    let ctx = Context { ring, strong: OnceLock::new() };
    CHECK_IDS.iter().map(|id| ctx.run(id).unwrap()).collect()
}

/// Re-verifies a failing result's witness against the ring; `false` for
/// passing results or witnesses that do not refute the statement.
pub fn confirm_witness(ring: &RingHandle, result: &CheckResult) -> bool {
    let (Status::Fail, Some(w)) = (result.status, &result.witness) else {
        return false;
    };
    if result.ring != ring.spec() || w.iter().any(|&c| c >= ring.size()) {
        return false;
    }
    let one = ring.one_code();
    match result.id.as_str() {
        "identity-eq" => {
            let n = result.n.unwrap_or(0);
            n > 0 && w.len() == 1 && identity_value(ring, w[0], n) != 0
        }
        "unique-clean-radical" => {
            w.len() >= 2
                && jacobson_codes(ring).binary_search(&w[0]).is_ok()
                && clean_idempotents(ring, ring.add(one, w[0])) == w[1..]
        }
        "lemma-reduced" => {
            let Some(n) = result.n else { return false };
            let x = w[0];
            let broken = (x == one && ring.add(one, one) != 0)
                || (x != 0 && ring.mul(x, x) == 0)
                || (x != 0 && jacobson_codes(ring).binary_search(&x).is_ok());
            n % 2 == 1 && identity_violation(ring, n).is_none() && broken
        }
        "thm-pi" => {
            let Some(n) = result.n else { return false };
            let Some(k) = element_table(ring).nil_index(w[0]) else { return false };
            let k = k as u64;
            let c = ring.characteristic();
            jacobson_codes(ring).binary_search(&w[0]).is_ok()
                && (k >= nil_index_bound(c, n) || (arith::is_prime(c) && k > n))
        }
        "lemma-l" => lemma_l_violation(ring).is_some_and(|(u, _)| u == w[0]),
        id => run_check(ring, id).is_ok_and(|r| r == *result),
    }
}
