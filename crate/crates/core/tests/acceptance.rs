//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use torsion_clean::analysis;
use torsion_clean::cli::DEFAULT_SURVEY;
use torsion_clean::theorems::{self, Status};
use torsion_clean::torsion::{torsion_clean_index, IndexReport, SearchOptions};
use torsion_clean::RingHandle;

fn ring(s: &str) -> RingHandle {
    RingHandle::parse(s).unwrap()
}

fn plain(r: &RingHandle) -> IndexReport {
    torsion_clean_index(r, SearchOptions::plain())
}

fn strong(r: &RingHandle) -> IndexReport {
    torsion_clean_index(r, SearchOptions::strong())
}

/// The corpus: the built-in survey list.
fn corpus() -> Vec<RingHandle> {
    DEFAULT_SURVEY.iter().map(|s| ring(s)).collect()
}

/// Minimal n by trying every n in 1..=bound against every (element, idempotent)
/// pair, using only structural multiplication and repeated products.
fn naive_index(r: &RingHandle, strong: bool, bound: u64) -> Option<u64> {
    let one = r.one_code();
    let idem: Vec<u32> = r.codes().filter(|&e| r.mul_structural(e, e) == e).collect();
    let power_is_one = |u: u32, n: u64| {
        let mut x = one;
        for _ in 0..n {
            x = r.mul_structural(x, u);
        }
        x == one
    };
    (1..=bound).find(|&n| {
        r.codes().all(|x| {
            idem.iter().any(|&e| {
                let u = r.sub(x, e);
                (!strong || r.mul_structural(e, u) == r.mul_structural(u, e)) && power_is_one(u, n)
            })
        })
    })
}

/// Exponent of the unit group by brute-force inverse search and power iteration.
fn naive_exponent(r: &RingHandle) -> u64 {
    let one = r.one_code();
    let mut e = 1u64;
    for u in r.codes() {
        if !r.codes().any(|v| r.mul_structural(u, v) == one && r.mul_structural(v, u) == one) {
            continue;
        }
        let (mut x, mut t) = (u, 1u64);
        while x != one {
            x = r.mul_structural(x, u);
            t += 1;
        }
        e = num_lcm(e, t);
    }
    e
}

fn num_lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

fn identity_holds(r: &RingHandle, n: u64) -> Option<u32> {
    theorems::check_identity_eq(r, n).witness.map(|w| w[0])
}

struct Gate {
    failures: usize,
}

impl Gate {
    fn report(&mut self, id: u32, name: &str, result: Result<String, String>, elapsed: Duration) {
        let secs = elapsed.as_secs_f64();
        match result {
            Ok(msg) => println!("criterion {id:>2} PASS  {name}: {msg} [{secs:.2}s]"),
            Err(msg) => {
                self.failures += 1;
                println!("criterion {id:>2} FAIL  {name}: {msg} [{secs:.2}s]");
            }
        }
    }

    fn run(&mut self, id: u32, name: &str, f: impl FnOnce() -> Result<String, String>) {
        let start = Instant::now();
        let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".into()));
        self.report(id, name, result, start.elapsed());
    }
}

fn within(start: Instant, limit: Duration, msg: String) -> Result<String, String> {
    let t = start.elapsed();
    if t <= limit {
        Ok(msg)
    } else {
        Err(format!("{msg}, but took {:.2}s > {:.0}s", t.as_secs_f64(), limit.as_secs_f64()))
    }
}

fn c1() -> Result<String, String> {
    let start = Instant::now();
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
        let r = ring(&format!("GF({q})"));
        let (p, s) = (plain(&r).index, strong(&r).index);
        if p != Some(q - 1) || s != Some(q - 1) {
            return Err(format!("GF({q}): plain {p:?}, strong {s:?}, expected {}", q - 1));
        }
    }
    within(start, Duration::from_secs(1), "index GF(q) = q - 1 for all eight fields".into())
}

fn c2() -> Result<String, String> {
    let start = Instant::now();
    let r = ring("M(2,GF(2))");
    let (p, s) = (plain(&r).index, strong(&r).index);
    if (p, s) != (Some(2), Some(6)) {
        return Err(format!("plain {p:?}, strong {s:?}"));
    }
    within(start, Duration::from_secs(1), "plain 2, strong 6".into())
}

fn c3() -> Result<String, String> {
    let start = Instant::now();
    let r = ring("M(3,GF(2))");
    let (p, s) = (plain(&r).index, strong(&r).index);
    if (p, s) != (Some(3), Some(84)) {
        return Err(format!("plain {p:?}, strong {s:?}"));
    }
    within(start, Duration::from_secs(10), "plain 3, strong 84".into())
}

fn c4() -> Result<String, String> {
    let start = Instant::now();
    let r = ring("M(4,GF(2))");
    let p = plain(&r);
    let plain_time = start.elapsed();
    if p.index != Some(4) {
        return Err(format!("plain index {:?}", p.index));
    }
    let exp = p.exponent_of_units;
    if !exp.is_multiple_of(4) {
        return Err(format!("plain index does not divide exp(U) = {exp}"));
    }
    let s = strong(&r);
    let Some(n) = s.index else {
        return Err("no strong index".into());
    };
    if let Some(a) = identity_holds(&r, n) {
        return Err(format!("identity fails at strong n = {n} for element {a}"));
    }
    within(
        start,
        Duration::from_secs(600),
        format!(
            "plain 4 in {:.2}s; exp(GL4(F2)) = {exp}; strong index (survey data) = {n}, identity holds",
            plain_time.as_secs_f64()
        ),
    )
}

fn c5() -> Result<String, String> {
    let start = Instant::now();
    let mut got = Vec::new();
    for m in 1..=5u64 {
        let r = ring(&format!("T({m},GF(2))"));
        let expected = m.next_power_of_two();
        let (p, s) = (plain(&r).index, strong(&r).index);
        if p != Some(expected) || s != Some(expected) {
            return Err(format!("T({m}): plain {p:?}, strong {s:?}, expected {expected}"));
        }
        got.push(expected);
    }
    within(start, Duration::from_secs(30), format!("indices {got:?} in both modes"))
}

fn c6() -> Result<String, String> {
    for (spec, n) in [("P(GF(2),GF(4))", 3), ("P(GF(4),GF(8))", 21)] {
        let r = ring(spec);
        let (p, s) = (plain(&r).index, strong(&r).index);
        if p != Some(n) || s != Some(n) {
            return Err(format!("{spec}: plain {p:?}, strong {s:?}, expected {n}"));
        }
    }
    Ok("P(GF(2),GF(4)) = 3, P(GF(4),GF(8)) = 21".into())
}

fn c7(corpus: &[RingHandle]) -> Result<String, String> {
    for r in corpus {
        let n = strong(r).index.ok_or(format!("{r}: no strong index"))?;
        if let Some(a) = identity_holds(r, n) {
            return Err(format!("{r}: identity fails at n = {n} for element {a}"));
        }
    }
    Ok(format!("zero violations over {} rings", corpus.len()))
}

fn c8(corpus: &[RingHandle]) -> Result<String, String> {
    let mut odd = Vec::new();
    for r in corpus {
        let Some(n) = strong(r).index.filter(|n| n % 2 == 1) else { continue };
        let rep = analysis::analyze(r);
        if !rep.flags.commutative || !rep.flags.reduced || rep.characteristic != 2 || rep.jacobson.len() != 1 {
            return Err(format!("{r}: odd index {n} but structure {:?}", rep.flags));
        }
        let mut lcm = 1;
        let mut total = 1usize;
        for &e in &rep.primitive_central_idempotents {
            let e = r.elem(e as u64).unwrap();
            if !analysis::corner_is_field(r, &e).unwrap() {
                return Err(format!("{r}: corner at {e} is not a field"));
            }
            let size = r.elements().map(|x| e.mul(&x).unwrap().enc()).collect::<std::collections::BTreeSet<_>>().len();
            total *= size;
            lcm = num_lcm(lcm, size as u64 - 1);
        }
        if total != r.size() as usize || lcm != n {
            return Err(format!("{r}: corners multiply to {total}, LCM {lcm}, n = {n}"));
        }
        odd.push(format!("{r}={n}"));
    }
    Ok(format!("zero violations; odd strong indices: {}", odd.join(", ")))
}

fn c9() -> Result<String, String> {
    let mut checked = 0;
    for spec in ["T(1,GF(2))", "T(2,GF(2))", "T(3,GF(2))", "T(4,GF(2))", "Q(GF(4),2,1)"] {
        let r = ring(spec);
        let one = r.one_code();
        // radical by the quasi-regularity definition
        let is_unit = |u: u32| r.codes().any(|v| r.mul(u, v) == one && r.mul(v, u) == one);
        let units: Vec<bool> = r.codes().map(is_unit).collect();
        let idem: Vec<u32> = r.codes().filter(|&e| r.mul(e, e) == e).collect();
        for j in r.codes() {
            if !r.codes().all(|x| units[r.sub(one, r.mul(x, j)) as usize]) {
                continue;
            }
            let x = r.add(one, j);
            let count = idem.iter().filter(|&&e| units[r.sub(x, e) as usize]).count();
            if count != 1 {
                return Err(format!("{spec}: 1 + {j} has {count} clean decompositions"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} radical units, each with exactly one clean decomposition"))
}

fn c10(corpus: &[RingHandle]) -> Result<String, String> {
    for r in corpus {
        let (p, s) = (plain(r), strong(r));
        let exp = p.exponent_of_units;
        for (mode, idx) in [("plain", p.index), ("strong", s.index)] {
            let n = idx.ok_or(format!("{r}: no {mode} index"))?;
            if exp % n != 0 {
                return Err(format!("{r}: {mode} index {n} does not divide exp(U) = {exp}"));
            }
        }
    }
    Ok(format!("zero violations over {} rings", corpus.len()))
}

fn c11(corpus: &[RingHandle]) -> Result<String, String> {
    let mut count = 0;
    for r in corpus.iter().filter(|r| r.size() <= 256) {
        let exp = naive_exponent(r);
        for opts in [SearchOptions::plain(), SearchOptions::strong()] {
            let reduced = torsion_clean_index(r, opts);
            let full = torsion_clean_index(r, opts.without_reduction());
            let oracle = naive_index(r, opts.mode.is_strong(), exp);
            if reduced.normalized() != full.normalized() {
                return Err(format!("{r} {}: reduction changes the report", opts.mode));
            }
            if reduced.index != oracle || reduced.exponent_of_units != exp {
                return Err(format!(
                    "{r} {}: engine {:?} (exp {}), oracle {oracle:?} (exp {exp})",
                    opts.mode, reduced.index, reduced.exponent_of_units
                ));
            }
        }
        count += 1;
    }
    Ok(format!("exact agreement on {count} rings with |R| <= 256, both modes"))
}

fn c12() -> Result<String, String> {
    let r = ring("Q(GF(4),2,1)");
    let engine = strong(&r).index;
    let oracle = naive_index(&r, true, naive_exponent(&r));
    if engine != oracle {
        return Err(format!("engine {engine:?}, oracle {oracle:?}"));
    }
    let relation = if engine == Some(6) { "equals" } else { "differs from" };
    Ok(format!(
        "strong index {} matches the oracle; {relation} the infinite-variable value p(p^k - 1) = 6",
        engine.unwrap()
    ))
}

fn main() -> ExitCode {
    let corpus = corpus();
    assert!(corpus.len() >= 20);
    let mut gate = Gate { failures: 0 };
    gate.run(1, "field indices", c1);
    gate.run(2, "M2(F2)", c2);
    gate.run(3, "M3(F2)", c3);
    gate.run(4, "M4(F2)", c4);
    gate.run(5, "triangular family", c5);
    gate.run(6, "LCM law", c6);
    gate.run(7, "identity suite", || c7(&corpus));
    gate.run(8, "odd-index structure", || c8(&corpus));
    gate.run(9, "uniqueness on radical", c9);
    gate.run(10, "divisibility", || c10(&corpus));
    gate.run(11, "oracle equivalence", || c11(&corpus));
    gate.run(12, "truncated local ring", c12);
    let theorem_failures: usize = corpus
        .iter()
        .flat_map(theorems::run_suite)
        .filter(|c| c.status == Status::Fail)
        .count();
    println!("theorem suite over corpus: {theorem_failures} failing checks");
    if gate.failures == 0 && theorem_failures == 0 {
        println!("acceptance: all 12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", gate.failures);
        ExitCode::FAILURE
    }
}
