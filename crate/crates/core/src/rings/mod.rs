//! Finite rings with exact arithmetic on integer-encoded elements.
//!
//! Every construction lays its elements out as a mixed-radix integer whose
//! digits are `F_p` coefficients:
//!
//! * `GF(q)`: the field encoding itself.
//! * `M(n, GF(q))`: entries in row-major order, entry `(0,0)` least significant.
//! * `T(m, GF(q))`: the upper-triangular entries `(i, j)` with `i <= j`, row-major.
//! * `P(R_1, ..., R_t)`: factor `R_1` least significant.
//! * `Q(GF(q), e, v)`: coefficients of the monomials `x^a` with every `a_i < e`,
//!   ordered by total degree, ties broken by the larger power of `x_1`, then `x_2`, ...
//!
//! Arithmetic runs directly on these `u32` codes through [`RingHandle`];
//! [`RingElem`] is the checked element type for API boundaries.

mod elem;
mod parse;

use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::Cache;
use crate::ffield::{FieldError, FieldSpec};

pub use elem::{Payload, RingElem};
pub use parse::parse_element;

/// Default carrier size guard.
pub const DEFAULT_MAX_SIZE: u64 = 1 << 20;
/// Hard ceiling for the guard, so that codes fit in `u32` and digit buffers stay fixed.
pub const ABSOLUTE_MAX_SIZE: u64 = 1 << 31;
/// Rings at most this large may memoize their multiplication table.
pub const MUL_TABLE_LIMIT: u32 = 1 << 12;

const BUF: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("parse error at position {position}: expected {expected}")]
    Parse { position: usize, expected: String },
    #[error("ring of {size} elements exceeds the size guard of {limit}")]
    SizeGuardExceeded { size: u128, limit: u64 },
    #[error("the zero ring is not supported")]
    ZeroRing,
    #[error("elements belong to different rings")]
    HandleMismatch,
    #[error("element encoding {code} out of range for a ring of {size} elements")]
    ElementOutOfRange { code: u64, size: u32 },
    #[error("element literal does not fit the ring: {0}")]
    BadLiteral(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// How a ring was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    Field(FieldSpec),
    Matrix { n: usize, field: FieldSpec },
    Triangular { m: usize, field: FieldSpec },
    Product(Vec<RingHandle>),
    PolyQuot { field: FieldSpec, exponent: u32, vars: u32 },
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Field(k) => write!(f, "{k}"),
            Construction::Matrix { n, field } => write!(f, "M({n},{field})"),
            Construction::Triangular { m, field } => write!(f, "T({m},{field})"),
            Construction::Product(factors) => {
                write!(f, "P(")?;
                for (i, r) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{r}")?;
                }
                write!(f, ")")
            }
            Construction::PolyQuot { field, exponent, vars } => {
                write!(f, "Q({field},{exponent},{vars})")
            }
        }
    }
}

enum Kind {
    Field,
    Matrix {
        n: usize,
        q: u32,
    },
    Triangular {
        m: usize,
        q: u32,
        /// Position of `(i, j)` in the code, row-major over `i <= j`.
        slot: Vec<Vec<usize>>,
        slots: usize,
    },
    Product {
        places: Vec<u32>,
    },
    PolyQuot {
        q: u32,
        monomials: Vec<Vec<u32>>,
        /// `table[i * len + j]` is the index of monomial `i * j`, or `u16::MAX` if it vanishes.
        table: Vec<u16>,
    },
}

pub struct RingInner {
    construction: Construction,
    spec: String,
    size: u32,
    /// `(radix, place)` of every additive digit.
    digits: Vec<(u32, u32)>,
    binary: bool,
    one: u32,
    kind: Kind,
    mul_table: OnceLock<Vec<u16>>,
    pub(crate) cache: Cache,
}

/// Shared handle to an immutable finite ring.
#[derive(Clone)]
pub struct RingHandle(Arc<RingInner>);

impl PartialEq for RingHandle {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.construction == other.0.construction
    }
}

impl Eq for RingHandle {}

impl fmt::Debug for RingHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.spec)
    }
}

impl fmt::Display for RingHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.spec)
    }
}

impl RingHandle {
    /// Parses a ring spec such as `M(2,GF(2))` under the default size guard.
    pub fn parse(spec: &str) -> Result<Self, RingError> {
        parse::parse_ring(spec, DEFAULT_MAX_SIZE)
    }

    pub fn parse_with_limit(spec: &str, max_size: u64) -> Result<Self, RingError> {
        parse::parse_ring(spec, max_size)
    }

    pub fn field(field: FieldSpec) -> Self {
        Self::build(Construction::Field(field), DEFAULT_MAX_SIZE).expect("fields fit the guard")
    }

    pub fn matrix(n: usize, field: FieldSpec) -> Result<Self, RingError> {
        Self::build(Construction::Matrix { n, field }, DEFAULT_MAX_SIZE)
    }

    pub fn triangular(m: usize, field: FieldSpec) -> Result<Self, RingError> {
        Self::build(Construction::Triangular { m, field }, DEFAULT_MAX_SIZE)
    }

    pub fn product(factors: Vec<RingHandle>) -> Result<Self, RingError> {
        Self::build(Construction::Product(factors), DEFAULT_MAX_SIZE)
    }

    pub fn poly_quot(field: FieldSpec, exponent: u32, vars: u32) -> Result<Self, RingError> {
        Self::build(Construction::PolyQuot { field, exponent, vars }, DEFAULT_MAX_SIZE)
    }

    /// Builds a ring from an explicit construction, enforcing `max_size`.
    pub fn build(construction: Construction, max_size: u64) -> Result<Self, RingError> {
        let limit = max_size.min(ABSOLUTE_MAX_SIZE);
        let size = cardinality(&construction)?;
        if size < 2 {
            return Err(RingError::ZeroRing);
        }
        if size > limit as u128 {
            return Err(RingError::SizeGuardExceeded { size, limit });
        }
        let size = size as u32;
        let spec = construction.to_string();
        let (digits, kind) = layout(&construction);
        let binary = digits.iter().all(|&(r, _)| r == 2);
        let one = one_code(&construction, &kind);
        Ok(RingHandle(Arc::new(RingInner {
            construction,
            spec,
            size,
            digits,
            binary,
            one,
            kind,
            mul_table: OnceLock::new(),
            cache: Cache::default(),
        })))
    }

    pub fn construction(&self) -> &Construction {
        &self.0.construction
    }

    /// Canonical spec string.
    pub fn spec(&self) -> &str {
        &self.0.spec
    }

    pub fn size(&self) -> u32 {
        self.0.size
    }

    pub(crate) fn cache(&self) -> &Cache {
        &self.0.cache
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        self == other
    }

    // --- element wrappers -----------------------------------------------

    pub fn elem(&self, code: u64) -> Result<RingElem, RingError> {
        if code >= self.0.size as u64 {
            return Err(RingError::ElementOutOfRange { code, size: self.0.size });
        }
        Ok(RingElem::new(self.clone(), code as u32))
    }

    pub(crate) fn wrap(&self, code: u32) -> RingElem {
        debug_assert!(code < self.0.size);
        RingElem::new(self.clone(), code)
    }

    pub fn zero(&self) -> RingElem {
        self.wrap(0)
    }

    pub fn one(&self) -> RingElem {
        self.wrap(self.0.one)
    }

    /// Every element exactly once, in increasing encoding order.
    pub fn elements(&self) -> impl Iterator<Item = RingElem> + '_ {
        (0..self.0.size).map(move |c| self.wrap(c))
    }

    // --- arithmetic on codes ----------------------------------------------

    pub fn codes(&self) -> std::ops::Range<u32> {
        0..self.0.size
    }

    #[inline]
    pub fn one_code(&self) -> u32 {
        self.0.one
    }

    /// Codes with a single digit equal to 1. They generate `(R, +)`, so an
    /// element commutes with everything iff it commutes with all of them.
    pub fn additive_generators(&self) -> Vec<u32> {
        self.0.digits.iter().map(|&(_, place)| place).collect()
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.0.binary {
            return a ^ b;
        }
        let mut out = 0;
        for &(radix, place) in &self.0.digits {
            let da = (a / place) % radix;
            let db = (b / place) % radix;
            out += ((da + db) % radix) * place;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.0.binary {
            return a;
        }
        let mut out = 0;
        for &(radix, place) in &self.0.digits {
            let da = (a / place) % radix;
            out += ((radix - da) % radix) * place;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if self.0.binary {
            return a ^ b;
        }
        let mut out = 0;
        for &(radix, place) in &self.0.digits {
            let da = (a / place) % radix;
            let db = (b / place) % radix;
            out += ((da + radix - db) % radix) * place;
        }
        out
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if let Some(t) = self.0.mul_table.get() {
            return t[a as usize * self.0.size as usize + b as usize] as u32;
        }
        self.mul_structural(a, b)
    }

    #[inline]
    pub fn commutes(&self, a: u32, b: u32) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = self.0.one;
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

    /// Builds the memoized multiplication table if the ring is small enough.
    /// Returns whether a table is in use.
    pub fn ensure_mul_table(&self) -> bool {
        if self.0.size > MUL_TABLE_LIMIT {
            return false;
        }
        self.0.mul_table.get_or_init(|| {
            let n = self.0.size;
            (0..n)
                .into_par_iter()
                .flat_map_iter(|a| (0..n).map(move |b| self.mul_structural(a, b) as u16))
                .collect()
        });
        true
    }

    pub fn has_mul_table(&self) -> bool {
        self.0.mul_table.get().is_some()
    }

    /// Smallest `c >= 1` with `c * 1 = 0`.
    pub fn characteristic(&self) -> u64 {
        let one = self.0.one;
        let mut acc = one;
        let mut c = 1;
        while acc != 0 {
            acc = self.add(acc, one);
            c += 1;
        }
        c
    }

    /// Multiplication straight from the construction, bypassing any table.
    pub fn mul_structural(&self, a: u32, b: u32) -> u32 {
        match (&self.0.kind, &self.0.construction) {
            (Kind::Field, Construction::Field(f)) => f.mul(a, b),
            (Kind::Matrix { n, q }, Construction::Matrix { field, .. }) => {
                if *q == 2 {
                    mat_mul_gf2(*n, a, b)
                } else {
                    mat_mul(*n, *q, field, a, b)
                }
            }
            (Kind::Triangular { m, q, slot, slots }, Construction::Triangular { field, .. }) => {
                tri_mul(*m, *q, slot, *slots, field, a, b)
            }
            (Kind::Product { places }, Construction::Product(factors)) => {
                let mut out = 0;
                for (r, &place) in factors.iter().zip(places) {
                    let s = r.size();
                    let x = (a / place) % s;
                    let y = (b / place) % s;
                    out += r.mul(x, y) * place;
                }
                out
            }
            (Kind::PolyQuot { q, monomials, table }, Construction::PolyQuot { field, .. }) => {
                let len = monomials.len();
                let ca = split(a, *q, len);
                let cb = split(b, *q, len);
                let mut out = [0u32; BUF];
                for i in 0..len {
                    if ca[i] == 0 {
                        continue;
                    }
                    for j in 0..len {
                        if cb[j] == 0 {
                            continue;
                        }
                        let k = table[i * len + j];
                        if k != u16::MAX {
                            let k = k as usize;
                            out[k] = field.add(out[k], field.mul(ca[i], cb[j]));
                        }
                    }
                }
                join(&out[..len], *q)
            }
            _ => unreachable!("kind always matches construction"),
        }
    }

    /// Field-coefficient digits of a code (entries for matrices, slots for
    /// triangular rings, monomial coefficients for quotients).
    pub(crate) fn coefficient_count(&self) -> usize {
        match &self.0.kind {
            Kind::Field => 1,
            Kind::Matrix { n, .. } => n * n,
            Kind::Triangular { slots, .. } => *slots,
            Kind::Product { places } => places.len(),
            Kind::PolyQuot { monomials, .. } => monomials.len(),
        }
    }

    pub(crate) fn product_places(&self) -> Option<&[u32]> {
        match &self.0.kind {
            Kind::Product { places } => Some(places),
            _ => None,
        }
    }

    pub(crate) fn triangular_slots(&self) -> Option<&[Vec<usize>]> {
        match &self.0.kind {
            Kind::Triangular { slot, .. } => Some(slot),
            _ => None,
        }
    }

    pub(crate) fn monomials(&self) -> Option<&[Vec<u32>]> {
        match &self.0.kind {
            Kind::PolyQuot { monomials, .. } => Some(monomials),
            _ => None,
        }
    }

    /// Component `i` of a product code, or `None` for non-products.
    pub fn project(&self, i: usize, code: u32) -> Option<u32> {
        match (&self.0.kind, &self.0.construction) {
            (Kind::Product { places }, Construction::Product(factors)) => {
                Some((code / places[i]) % factors[i].size())
            }
            _ => None,
        }
    }

    /// Base field for the non-product constructions.
    pub fn base_field(&self) -> Option<&FieldSpec> {
        match &self.0.construction {
            Construction::Field(f)
            | Construction::Matrix { field: f, .. }
            | Construction::Triangular { field: f, .. }
            | Construction::PolyQuot { field: f, .. } => Some(f),
            Construction::Product(_) => None,
        }
    }
}

fn cardinality(c: &Construction) -> Result<u128, RingError> {
    let pow = |q: u32, e: u128| -> u128 {
        let mut acc: u128 = 1;
        for _ in 0..e {
            acc = acc.saturating_mul(q as u128);
            if acc > u64::MAX as u128 {
                return acc;
            }
        }
        acc
    };
    Ok(match c {
        Construction::Field(f) => f.order() as u128,
        Construction::Matrix { n, field } => pow(field.order(), (*n as u128) * (*n as u128)),
        Construction::Triangular { m, field } => {
            pow(field.order(), (*m as u128) * (*m as u128 + 1) / 2)
        }
        Construction::Product(fs) => {
            if fs.is_empty() {
                return Err(RingError::ZeroRing);
            }
            fs.iter().fold(1u128, |acc, r| acc.saturating_mul(r.size() as u128))
        }
        Construction::PolyQuot { field, exponent, vars } => {
            if *exponent == 0 {
                return Err(RingError::ZeroRing);
            }
            let terms = (*exponent as u128).checked_pow(*vars).unwrap_or(u128::MAX);
            if terms > 64 {
                u128::MAX
            } else {
                pow(field.order(), terms)
            }
        }
    })
}

fn field_digits(f: &FieldSpec, count: usize, base_place: u32) -> Vec<(u32, u32)> {
    let p = f.characteristic();
    let mut out = Vec::new();
    let mut place = base_place;
    for _ in 0..count * f.degree() as usize {
        out.push((p, place));
        place = place.wrapping_mul(p);
    }
    out
}

fn layout(c: &Construction) -> (Vec<(u32, u32)>, Kind) {
    match c {
        Construction::Field(f) => (field_digits(f, 1, 1), Kind::Field),
        Construction::Matrix { n, field } => {
            (field_digits(field, n * n, 1), Kind::Matrix { n: *n, q: field.order() })
        }
        Construction::Triangular { m, field } => {
            let mut slot = vec![vec![usize::MAX; *m]; *m];
            let mut slots = 0;
            for (i, row) in slot.iter_mut().enumerate() {
                for cell in row.iter_mut().skip(i) {
                    *cell = slots;
                    slots += 1;
                }
            }
            (
                field_digits(field, slots, 1),
                Kind::Triangular { m: *m, q: field.order(), slot, slots },
            )
        }
        Construction::Product(factors) => {
            let mut digits = Vec::new();
            let mut places = Vec::new();
            let mut place: u32 = 1;
            for r in factors {
                places.push(place);
                digits.extend(r.0.digits.iter().map(|&(radix, p)| (radix, p * place)));
                place = place.wrapping_mul(r.size());
            }
            (digits, Kind::Product { places })
        }
        Construction::PolyQuot { field, exponent, vars } => {
            let monomials = monomials(*exponent, *vars);
            let len = monomials.len();
            let mut table = vec![u16::MAX; len * len];
            for i in 0..len {
                for j in 0..len {
                    let sum: Vec<u32> =
                        monomials[i].iter().zip(&monomials[j]).map(|(a, b)| a + b).collect();
                    if sum.iter().all(|&a| a < *exponent) {
                        table[i * len + j] =
                            monomials.iter().position(|m| *m == sum).unwrap() as u16;
                    }
                }
            }
            (
                field_digits(field, len, 1),
                Kind::PolyQuot { q: field.order(), monomials, table },
            )
        }
    }
}

/// Exponent vectors in `[0, e)^v`, by degree then larger leading powers first.
fn monomials(e: u32, v: u32) -> Vec<Vec<u32>> {
    let total = (e as usize).pow(v);
    let mut out: Vec<Vec<u32>> = (0..total)
        .map(|mut idx| {
            (0..v)
                .map(|_| {
                    let a = (idx % e as usize) as u32;
                    idx /= e as usize;
                    a
                })
                .collect()
        })
        .collect();
    out.sort_by(|a, b| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    out
}

fn one_code(c: &Construction, kind: &Kind) -> u32 {
    match (c, kind) {
        (Construction::Field(_), _) => 1,
        (Construction::Matrix { n, field }, _) => {
            let q = field.order();
            (0..*n).map(|i| q.pow((i * n + i) as u32)).sum()
        }
        (Construction::Triangular { m, field }, Kind::Triangular { slot, .. }) => {
            let q = field.order();
            (0..*m).map(|i| q.pow(slot[i][i] as u32)).sum()
        }
        (Construction::Product(fs), Kind::Product { places }) => {
            fs.iter().zip(places).map(|(r, p)| r.one_code() * p).sum()
        }
        (Construction::PolyQuot { .. }, _) => 1,
        _ => unreachable!(),
    }
}

#[inline]
fn split(mut code: u32, q: u32, len: usize) -> [u32; BUF] {
    let mut out = [0u32; BUF];
    for slot in out.iter_mut().take(len) {
        *slot = code % q;
        code /= q;
    }
    out
}

#[inline]
fn join(coeffs: &[u32], q: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * q + c)
}

fn mat_mul_gf2(n: usize, a: u32, b: u32) -> u32 {
    let mask = (1u32 << n) - 1;
    let mut out = 0;
    for i in 0..n {
        let mut row = 0;
        for k in 0..n {
            if (a >> (i * n + k)) & 1 == 1 {
                row ^= (b >> (k * n)) & mask;
            }
        }
        out |= row << (i * n);
    }
    out
}

fn mat_mul(n: usize, q: u32, f: &FieldSpec, a: u32, b: u32) -> u32 {
    let ea = split(a, q, n * n);
    let eb = split(b, q, n * n);
    let mut out = [0u32; BUF];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0;
            for k in 0..n {
                acc = f.add(acc, f.mul(ea[i * n + k], eb[k * n + j]));
            }
            out[i * n + j] = acc;
        }
    }
    join(&out[..n * n], q)
}

fn tri_mul(
    m: usize,
    q: u32,
    slot: &[Vec<usize>],
    slots: usize,
    f: &FieldSpec,
    a: u32,
    b: u32,
) -> u32 {
    let ea = split(a, q, slots);
    let eb = split(b, q, slots);
    let mut out = [0u32; BUF];
    for i in 0..m {
        for j in i..m {
            let mut acc = 0;
            for k in i..=j {
                acc = f.add(acc, f.mul(ea[slot[i][k]], eb[slot[k][j]]));
            }
            out[slot[i][j]] = acc;
        }
    }
    join(&out[..slots], q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> RingHandle {
        RingHandle::parse(s).unwrap()
    }

    #[test]
    fn cardinalities() {
        assert_eq!(ring("M(2,GF(2))").size(), 16);
        assert_eq!(ring("T(3,GF(2))").size(), 64);
        assert_eq!(ring("P(GF(2),GF(4))").size(), 8);
        assert_eq!(ring("Q(GF(4),2,1)").size(), 16);
        assert_eq!(ring("Q(GF(2),2,2)").size(), 16);
        assert_eq!(ring("M(4,GF(2))").size(), 65536);
        assert_eq!(ring("T(5,GF(2))").size(), 32768);
    }

    #[test]
    fn characteristics() {
        assert_eq!(ring("M(3,GF(2))").characteristic(), 2);
        assert_eq!(ring("GF(9)").characteristic(), 3);
        assert_eq!(ring("P(GF(2),GF(4))").characteristic(), 2);
        assert_eq!(ring("P(GF(2),GF(3))").characteristic(), 6);
    }

    #[test]
    fn guard_and_zero_ring() {
        assert!(matches!(
            RingHandle::parse("M(5,GF(2))"),
            Err(RingError::SizeGuardExceeded { .. })
        ));
        assert!(RingHandle::parse_with_limit("M(2,GF(2))", 15).is_err());
        assert_eq!(RingHandle::parse("M(0,GF(2))").unwrap_err(), RingError::ZeroRing);
        assert_eq!(RingHandle::parse("P()").unwrap_err(), RingError::ZeroRing);
        assert_eq!(RingHandle::parse("Q(GF(2),0,1)").unwrap_err(), RingError::ZeroRing);
    }

    #[test]
    fn example_nc_matrix_sum() {
        let r = ring("M(2,GF(2))");
        let a = parse_element(&r, "[[1,1],[1,0]]").unwrap();
        let e = parse_element(&r, "[[1,0],[0,0]]").unwrap();
        let u = parse_element(&r, "[[0,1],[1,0]]").unwrap();
        assert_eq!(e.add(&u).unwrap(), a);
        assert_eq!(r.zero().enc(), 0);
        assert_eq!(a.enc(), 7);
    }

    #[test]
    fn truncated_variables_square_to_zero() {
        let r = ring("Q(GF(2),2,2)");
        let x1 = r.elem(2).unwrap();
        let x2 = r.elem(4).unwrap();
        assert!(x1.mul(&x1).unwrap().is_zero());
        assert!(x2.mul(&x2).unwrap().is_zero());
        assert_eq!(x1.mul(&x2).unwrap().enc(), 8);
        let r3 = ring("Q(GF(3),3,2)");
        // code 3 = coefficient 1 on monomial #1 = x1
        let x = r3.elem(3).unwrap();
        assert!(!x.pow(2).is_zero());
        assert!(x.pow(3).is_zero());
    }

    #[test]
    fn strictly_upper_closed_and_nilpotent() {
        for m in 1..=4 {
            let r = RingHandle::triangular(m, FieldSpec::new(2, 1).unwrap()).unwrap();
            let slot = r.triangular_slots().unwrap().to_vec();
            let diag_mask: u32 = (0..m).map(|i| 1u32 << slot[i][i]).sum();
            let strict: Vec<u32> = r.codes().filter(|c| c & diag_mask == 0).collect();
            assert_eq!(strict.len(), 1 << (m * (m - 1) / 2));
            for &z in &strict {
                assert_eq!(r.pow(z, m as u64), 0);
                for &w in &strict {
                    assert_eq!(r.add(z, w) & diag_mask, 0);
                    assert_eq!(r.mul(z, w) & diag_mask, 0);
                }
            }
        }
    }

    #[test]
    fn product_commutes_with_projections() {
        let r = ring("P(GF(3),M(2,GF(2)),GF(4))");
        let factors = match r.construction() {
            Construction::Product(f) => f.clone(),
            _ => unreachable!(),
        };
        for a in (0..r.size()).step_by(7) {
            for b in (0..r.size()).step_by(11) {
                for (i, f) in factors.iter().enumerate() {
                    let (pa, pb) = (r.project(i, a).unwrap(), r.project(i, b).unwrap());
                    assert_eq!(r.project(i, r.mul(a, b)).unwrap(), f.mul(pa, pb));
                    assert_eq!(r.project(i, r.add(a, b)).unwrap(), f.add(pa, pb));
                    assert_eq!(r.project(i, r.neg(a)).unwrap(), f.neg(pa));
                }
            }
        }
    }

    #[test]
    fn gf2_matrix_fast_path_matches_generic() {
        let f = FieldSpec::new(2, 1).unwrap();
        for n in 1..=3 {
            let size = 1u32 << (n * n);
            for a in 0..size {
                for b in (0..size).step_by(5) {
                    assert_eq!(mat_mul_gf2(n, a, b), mat_mul(n, 2, &f, a, b));
                }
            }
        }
    }

    #[test]
    fn mul_table_equals_structural() {
        let r = ring("M(2,GF(3))");
        assert!(!r.has_mul_table());
        assert!(r.ensure_mul_table());
        for a in r.codes() {
            for b in r.codes() {
                assert_eq!(r.mul(a, b), r.mul_structural(a, b));
            }
        }
        assert!(!ring("M(4,GF(2))").ensure_mul_table());
    }

    #[test]
    fn monomial_order() {
        assert_eq!(monomials(2, 2), vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(monomials(3, 1), vec![vec![0], vec![1], vec![2]]);
    }
}
