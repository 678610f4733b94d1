use std::collections::BTreeMap;
use std::fmt;

use super::{Construction, RingError, RingHandle};
use crate::ffield::FieldElem;

/// An element of a specific ring.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElem {
    ring: RingHandle,
    code: u32,
}

/// Structural view of an element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Scalar(FieldElem),
    /// Full square matrix; triangular rings report zeros below the diagonal.
    Matrix(Vec<Vec<FieldElem>>),
    Tuple(Vec<RingElem>),
    /// Nonzero coefficients keyed by exponent vector.
    Poly(BTreeMap<Vec<u32>, FieldElem>),
}

impl RingElem {
    pub(crate) fn new(ring: RingHandle, code: u32) -> Self {
        RingElem { ring, code }
    }

    pub fn ring(&self) -> &RingHandle {
        &self.ring
    }

    /// Canonical integer encoding in `[0, |R|)`.
    pub fn enc(&self) -> u32 {
        self.code
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn check(&self, other: &Self) -> Result<(), RingError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(RingError::HandleMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        Ok(self.ring.wrap(self.ring.add(self.code, other.code)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        Ok(self.ring.wrap(self.ring.sub(self.code, other.code)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        Ok(self.ring.wrap(self.ring.mul(self.code, other.code)))
    }

    pub fn neg(&self) -> Self {
        self.ring.wrap(self.ring.neg(self.code))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.ring.wrap(self.ring.pow(self.code, e))
    }

    pub fn payload(&self) -> Payload {
        let ring = &self.ring;
        match ring.construction() {
            Construction::Field(f) => Payload::Scalar(f.elem(self.code as u64).unwrap()),
            Construction::Matrix { n, field } => {
                let q = field.order();
                let mut code = self.code;
                let mut rows = vec![Vec::with_capacity(*n); *n];
                for row in rows.iter_mut() {
                    for _ in 0..*n {
                        row.push(field.elem((code % q) as u64).unwrap());
                        code /= q;
                    }
                }
                Payload::Matrix(rows)
            }
            Construction::Triangular { m, field } => {
                let q = field.order();
                let slot = ring.triangular_slots().unwrap();
                let digit = |s: usize| (self.code / q.pow(s as u32)) % q;
                let rows = (0..*m)
                    .map(|i| {
                        (0..*m)
                            .map(|j| {
                                let v = if j >= i { digit(slot[i][j]) } else { 0 };
                                field.elem(v as u64).unwrap()
                            })
                            .collect()
                    })
                    .collect();
                Payload::Matrix(rows)
            }
            Construction::Product(factors) => Payload::Tuple(
                factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| f.wrap(ring.project(i, self.code).unwrap()))
                    .collect(),
            ),
            Construction::PolyQuot { field, .. } => {
                let q = field.order();
                let mut code = self.code;
                let mut out = BTreeMap::new();
                for mono in ring.monomials().unwrap() {
                    let c = code % q;
                    code /= q;
                    if c != 0 {
                        out.insert(mono.clone(), field.elem(c as u64).unwrap());
                    }
                }
                Payload::Poly(out)
            }
        }
    }

    fn write_literal(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, items: &[u32]| -> fmt::Result {
            write!(f, "[")?;
            for (i, v) in items.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")
        };
        match self.payload() {
            Payload::Scalar(x) => write!(f, "{}", x.enc()),
            Payload::Matrix(rows) => {
                write!(f, "[")?;
                for (i, row) in rows.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    let vals: Vec<u32> = row.iter().map(FieldElem::enc).collect();
                    list(f, &vals)?;
                }
                write!(f, "]")
            }
            Payload::Tuple(parts) => {
                write!(f, "[")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    part.write_literal(f)?;
                }
                write!(f, "]")
            }
            Payload::Poly(_) => {
                let Construction::PolyQuot { field, .. } = self.ring.construction() else {
                    unreachable!()
                };
                let q = field.order();
                let mut code = self.code;
                let coeffs: Vec<u32> = (0..self.ring.coefficient_count())
                    .map(|_| {
                        let c = code % q;
                        code /= q;
                        c
                    })
                    .collect();
                list(f, &coeffs)
            }
        }
    }
}

/// Formats as the bracket literal accepted by [`super::parse_element`].
impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_literal(f)
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{} = ", self.ring, self.code)?;
        self.write_literal(f)
    }
}
