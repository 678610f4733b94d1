//! Finite fields `GF(p^k)` as residues of `F_p[x]` modulo a monic irreducible.
//!
//! Elements are stored as their base-`p` little-endian integer encoding, so an
//! element of `GF(q)` is just a `u32` in `[0, q)`. [`FieldSpec`] does the
//! arithmetic on those codes; [`FieldElem`] is the checked wrapper used at API
//! boundaries.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::arith;

/// Largest field the crate will construct.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Fields up to this order get discrete-log tables for multiplication.
const LOG_TABLE_LIMIT: u32 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("extension degree {0} out of range")]
    DegreeOutOfRange(u32),
    #[error("field of order {p}^{k} exceeds the size guard of {MAX_FIELD_ORDER}")]
    SizeGuardExceeded { p: u64, k: u32 },
    #[error("modulus must be monic with coefficients in [0, p)")]
    BadModulus,
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("encoding {code} is out of range for GF({q})")]
    OutOfRange { code: u64, q: u32 },
}

struct LogTables {
    /// `exp[i] = g^i` for `i` in `[0, 2(q-1))`.
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct FieldInner {
    p: u32,
    k: u32,
    q: u32,
    /// Little-endian coefficients, length `k + 1`, leading coefficient 1.
    modulus: Vec<u32>,
    tables: Option<LogTables>,
}

/// A concrete model of `GF(p^k)`.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.0.p, self.0.k, self.0.modulus)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl FieldSpec {
    /// Builds `GF(p^k)` using the lexicographically smallest monic irreducible
    /// of degree `k` (coefficients compared from the constant term upward).
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        check_params(p, k)?;
        let p32 = p as u32;
        let count = p.pow(k);
        for idx in 0..count {
            // c0 is the most significant digit of idx, so idx order is lex order.
            let mut tail = vec![0u32; k as usize];
            let mut rest = idx;
            for j in (0..k as usize).rev() {
                tail[j] = (rest % p) as u32;
                rest /= p;
            }
            tail.push(1);
            if is_irreducible(&tail, p32) {
                return Ok(Self::build(p32, k, tail));
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over F_{p}")
    }

    /// Builds `GF(p^k)` from an explicit monic modulus (little-endian, degree `k`).
    pub fn with_modulus(p: u64, modulus: Vec<u32>) -> Result<Self, FieldError> {
        let k = modulus.len().saturating_sub(1) as u32;
        check_params(p, k)?;
        let p32 = p as u32;
        if modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p32) {
            return Err(FieldError::BadModulus);
        }
        if !is_irreducible(&modulus, p32) {
            return Err(FieldError::ReducibleModulus(p32));
        }
        Ok(Self::build(p32, k, modulus))
    }

    /// Every monic irreducible of degree `k` over `F_p`, in the same order `new` scans.
    pub fn irreducible_moduli(p: u64, k: u32) -> Result<Vec<Vec<u32>>, FieldError> {
        check_params(p, k)?;
        let mut out = Vec::new();
        for idx in 0..p.pow(k) {
            let mut tail = vec![0u32; k as usize];
            let mut rest = idx;
            for j in (0..k as usize).rev() {
                tail[j] = (rest % p) as u32;
                rest /= p;
            }
            tail.push(1);
            if is_irreducible(&tail, p as u32) {
                out.push(tail);
            }
        }
        Ok(out)
    }

    fn build(p: u32, k: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(k);
        let mut inner = FieldInner { p, k, q, modulus, tables: None };
        if q <= LOG_TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        FieldSpec(Arc::new(inner))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    /// Number of elements `q = p^k`.
    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElem {
        self.decode(0)
    }

    pub fn one(&self) -> FieldElem {
        self.decode(1)
    }

    /// The residue class of `x` (the zero class when `k = 1` and the modulus is `x`).
    pub fn generator_class(&self) -> FieldElem {
        let mut poly = vec![0, 1];
        poly_rem_in_place(&mut poly, &self.0.modulus, self.0.p);
        let code = self.encode_poly(&poly);
        self.decode(code)
    }

    pub fn elem(&self, code: u64) -> Result<FieldElem, FieldError> {
        if code >= self.0.q as u64 {
            return Err(FieldError::OutOfRange { code, q: self.0.q });
        }
        Ok(self.decode(code as u32))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.0.q).map(move |c| self.decode(c))
    }

    fn decode(&self, code: u32) -> FieldElem {
        FieldElem { spec: self.clone(), coeffs: self.coeffs(code) }
    }

    fn coeffs(&self, mut code: u32) -> Vec<u32> {
        let p = self.0.p;
        (0..self.0.k)
            .map(|_| {
                let c = code % p;
                code /= p;
                c
            })
            .collect()
    }

    fn encode_poly(&self, poly: &[u32]) -> u32 {
        poly.iter().take(self.0.k as usize).rev().fold(0, |acc, &c| acc * self.0.p + c)
    }

    // --- arithmetic on codes ---------------------------------------------

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.k == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b, mut place, mut out) = (a, b, 1, 0);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.k == 1 {
            return (p - a) % p;
        }
        let (mut a, mut place, mut out) = (a, 1, 0);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.0.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_schoolbook(a, b),
        }
    }

    /// Polynomial multiplication followed by reduction modulo the modulus.
    /// Independent of the log tables; used to build them and to test them.
    pub fn mul_schoolbook(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let mut prod = vec![0u32; ca.len() + cb.len()];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
        poly_rem_in_place(&mut prod, &self.0.modulus, p);
        self.encode_poly(&prod)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.0.q - 1;
        Some(match &self.0.tables {
            Some(t) => t.exp[((n - t.log[a as usize]) % n) as usize],
            None => self.pow(a, n as u64 - 1),
        })
    }

    /// Multiplicative order of a nonzero code.
    pub fn order_of(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.0.q - 1;
        if let Some(t) = &self.0.tables {
            return Some(n / arith::gcd(t.log[a as usize], n));
        }
        let mut t = n as u64;
        for (prime, _) in arith::factorize(n as u64) {
            while t.is_multiple_of(prime) && self.pow(a, t / prime) == 1 {
                t /= prime;
            }
        }
        Some(t as u32)
    }
}

fn check_params(p: u64, k: u32) -> Result<(), FieldError> {
    if !arith::is_prime(p) {
        return Err(FieldError::NonPrime(p));
    }
    if k == 0 || k > 20 {
        return Err(FieldError::DegreeOutOfRange(k));
    }
    match p.checked_pow(k) {
        Some(q) if q <= MAX_FIELD_ORDER => Ok(()),
        _ => Err(FieldError::SizeGuardExceeded { p, k }),
    }
}

fn build_tables(f: &FieldInner) -> LogTables {
    let spec = FieldSpec(Arc::new(FieldInner {
        p: f.p,
        k: f.k,
        q: f.q,
        modulus: f.modulus.clone(),
        tables: None,
    }));
    let n = f.q - 1;
    let gen = (1..f.q)
        .find(|&g| spec.order_of(g) == Some(n))
        .expect("multiplicative group of a finite field is cyclic");
    let mut exp = Vec::with_capacity(2 * n as usize);
    let mut log = vec![0u32; f.q as usize];
    let mut x = 1;
    for i in 0..n {
        exp.push(x);
        log[x as usize] = i;
        x = spec.mul_schoolbook(x, gen);
    }
    exp.extend_from_within(..);
    LogTables { exp, log }
}

fn trim(poly: &mut Vec<u32>) {
    while poly.last() == Some(&0) {
        poly.pop();
    }
}

/// Reduces `a` modulo the monic polynomial `m` over `F_p`.
fn poly_rem_in_place(a: &mut Vec<u32>, m: &[u32], p: u32) {
    trim(a);
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = (lead as u64 * c as u64 % p as u64) as u32;
            a[shift + i] = (a[shift + i] + p - sub) % p;
        }
        trim(a);
    }
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut divisor: Vec<u32> = (0..d)
                .scan(idx, |rest, _| {
                    let c = (*rest % p as u64) as u32;
                    *rest /= p as u64;
                    Some(c)
                })
                .collect();
            divisor.push(1);
            let mut r = poly.to_vec();
            poly_rem_in_place(&mut r, &divisor, p);
            if r.is_empty() {
                return false;
            }
        }
    }
    true
}

/// An element of a concrete [`FieldSpec`].
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    spec: FieldSpec,
    coeffs: Vec<u32>,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.spec, self.enc())
    }
}

impl FieldElem {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Little-endian coefficients of the residue polynomial.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Base-`p` integer encoding in `[0, q)`.
    pub fn enc(&self) -> u32 {
        self.spec.encode_poly(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn same(&self, other: &Self) -> Result<(), FieldError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(FieldError::SpecMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same(other)?;
        Ok(self.spec.decode(self.spec.add(self.enc(), other.enc())))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same(other)?;
        Ok(self.spec.decode(self.spec.mul(self.enc(), other.enc())))
    }

    pub fn neg(&self) -> Self {
        self.spec.decode(self.spec.neg(self.enc()))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        let code = self.spec.inv(self.enc()).ok_or(FieldError::DivisionByZero)?;
        Ok(self.spec.decode(code))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.spec.decode(self.spec.pow(self.enc(), e))
    }

    /// Smallest `t >= 1` with `x^t = 1`.
    pub fn order(&self) -> Result<u32, FieldError> {
        self.spec.order_of(self.enc()).ok_or(FieldError::ZeroElement)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(f: &FieldSpec, a: u32) -> u32 {
        let mut x = a;
        let mut t = 1;
        while x != 1 {
            x = f.mul_schoolbook(x, a);
            t += 1;
        }
        t
    }

    #[test]
    fn gf2_is_z_mod_2() {
        let f = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.add(1, 1), 0);
        let one = f.one();
        assert!(one.add(&one).unwrap().is_zero());
    }

    #[test]
    fn gf4_modulus_and_products() {
        let f = FieldSpec::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let x = f.generator_class();
        assert_eq!(x.enc(), 2);
        // x^2 = x + 1
        assert_eq!(x.mul(&x).unwrap().enc(), 3);
        // inverse found by exhaustive search
        let inv = f.elements().find(|y| x.mul(y).unwrap().enc() == 1).unwrap();
        assert_eq!(inv.enc(), 3);
        assert_eq!(x.inv().unwrap().enc(), 3);
        assert_eq!(x.order().unwrap(), 3);
    }

    #[test]
    fn gf8_modulus_is_lex_smallest_from_constant_term() {
        // x^3 + x^2 + 1 = (1,0,1,1) precedes x^3 + x + 1 = (1,1,0,1)
        let f = FieldSpec::new(2, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1, 1]);
        for a in 1..8 {
            assert!(matches!(f.order_of(a), Some(1) | Some(7)));
        }
    }

    #[test]
    fn gf9_group_is_cyclic_of_order_8() {
        let f = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f.order(), 9);
        let orders: Vec<u32> = (1..9).map(|a| brute_order(&f, a)).collect();
        assert!(orders.contains(&8));
        assert!(orders.iter().all(|o| 8 % o == 0));
        for a in 1..9 {
            assert_eq!(f.order_of(a).unwrap(), brute_order(&f, a));
        }
    }

    #[test]
    fn errors() {
        assert_eq!(FieldSpec::new(4, 1).unwrap_err(), FieldError::NonPrime(4));
        assert_eq!(FieldSpec::new(2, 0).unwrap_err(), FieldError::DegreeOutOfRange(0));
        assert!(matches!(FieldSpec::new(2, 21), Err(FieldError::DegreeOutOfRange(21))));
        assert!(matches!(FieldSpec::new(3, 13), Err(FieldError::SizeGuardExceeded { .. })));
        assert!(matches!(
            FieldSpec::with_modulus(2, vec![1, 0, 1]),
            Err(FieldError::ReducibleModulus(2))
        ));
        let f = FieldSpec::new(2, 2).unwrap();
        let g = FieldSpec::new(3, 1).unwrap();
        assert_eq!(f.one().add(&g.one()).unwrap_err(), FieldError::SpecMismatch);
        assert_eq!(f.zero().inv().unwrap_err(), FieldError::DivisionByZero);
        assert_eq!(f.zero().order().unwrap_err(), FieldError::ZeroElement);
        assert!(f.elem(4).is_err());
    }

    #[test]
    fn axioms_exhaustive_small_fields() {
        for (p, k) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1)] {
            let f = FieldSpec::new(p, k).unwrap();
            let q = f.order();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.pow(a, (q - 1) as u64), 1);
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                    assert_eq!((q - 1) % f.order_of(a).unwrap(), 0);
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul_schoolbook(a, b));
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn alternative_moduli_exist() {
        let cubics = FieldSpec::irreducible_moduli(2, 3).unwrap();
        assert_eq!(cubics, vec![vec![1, 0, 1, 1], vec![1, 1, 0, 1]]);
        assert_eq!(FieldSpec::irreducible_moduli(2, 2).unwrap().len(), 1);
        let f = FieldSpec::with_modulus(2, vec![1, 1, 0, 1]).unwrap();
        assert_ne!(f, FieldSpec::new(2, 3).unwrap());
    }

    #[test]
    fn large_field_without_tables() {
        let f = FieldSpec::new(2, 17).unwrap();
        let x = f.generator_class().enc();
        let y = f.inv(x).unwrap();
        assert_eq!(f.mul(x, y), 1);
        assert_eq!((f.order() - 1) % f.order_of(x).unwrap(), 0);
    }

    #[test]
    fn enc_round_trips() {
        let f = FieldSpec::new(3, 3).unwrap();
        for c in 0..f.order() {
            assert_eq!(f.elem(c as u64).unwrap().enc(), c);
        }
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn field_axioms_gf_3_5(a in 0u32..243, b in 0u32..243, c in 0u32..243) {
            let f = FieldSpec::new(3, 5).unwrap();
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.mul(a, b), f.mul_schoolbook(a, b));
        }
    }
}
