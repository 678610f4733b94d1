//! Ring-spec and element-literal parsers.
//!
//! ```text
//! ring  := field | "M(" int "," field ")" | "T(" int "," field ")"
//!        | "P(" ring {"," ring} ")" | "Q(" field "," int "," int ")"
//! field := "GF(" int ")"
//! literal := int | "[" literal {"," literal} "]"
//! ```

use super::{Construction, RingElem, RingError, RingHandle};
use crate::arith;
use crate::ffield::{FieldSpec, MAX_FIELD_ORDER};

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s: s.as_bytes(), pos: 0 }
    }

    fn err(&self, expected: &str) -> RingError {
        RingError::Parse { position: self.pos, expected: expected.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), RingError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("'{tok}'")))
        }
    }

    fn int(&mut self) -> Result<u64, RingError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| {
            RingError::Parse { position: start, expected: "integer that fits in 64 bits".into() }
        })
    }

    fn end(&mut self) -> Result<(), RingError> {
        self.skip_ws();
        if self.pos == self.s.len() {
            Ok(())
        } else {
            Err(self.err("end of input"))
        }
    }
}

pub(super) fn parse_ring(spec: &str, max_size: u64) -> Result<RingHandle, RingError> {
    let mut cur = Cursor::new(spec);
    let ring = ring(&mut cur, max_size)?;
    cur.end()?;
    Ok(ring)
}

fn field(cur: &mut Cursor, max_size: u64) -> Result<FieldSpec, RingError> {
    cur.expect("GF(")?;
    let at = cur.pos;
    let q = cur.int()?;
    let (p, k) = arith::prime_power(q).ok_or(RingError::Parse {
        position: at,
        expected: "a prime power".into(),
    })?;
    let limit = max_size.min(MAX_FIELD_ORDER);
    if q > limit {
        return Err(RingError::SizeGuardExceeded { size: q as u128, limit });
    }
    cur.expect(")")?;
    Ok(FieldSpec::new(p, k)?)
}

fn small_int(cur: &mut Cursor) -> Result<u32, RingError> {
    let at = cur.pos;
    let n = cur.int()?;
    u32::try_from(n).ok().filter(|&n| n <= 64).ok_or(RingError::Parse {
        position: at,
        expected: "an integer at most 64".into(),
    })
}

fn ring(cur: &mut Cursor, max_size: u64) -> Result<RingHandle, RingError> {
    let construction = match cur.peek() {
        Some(b'G') => Construction::Field(field(cur, max_size)?),
        Some(b'M') | Some(b'T') => {
            let matrix = cur.eat("M(");
            if !matrix {
                cur.expect("T(")?;
            }
            let n = small_int(cur)? as usize;
            cur.expect(",")?;
            let field = field(cur, max_size)?;
            cur.expect(")")?;
            if matrix {
                Construction::Matrix { n, field }
            } else {
                Construction::Triangular { m: n, field }
            }
        }
        Some(b'P') => {
            cur.expect("P(")?;
            let mut factors = Vec::new();
            if cur.peek() != Some(b')') {
                factors.push(ring(cur, max_size)?);
                while cur.eat(",") {
                    factors.push(ring(cur, max_size)?);
                }
            }
            cur.expect(")")?;
            Construction::Product(factors)
        }
        Some(b'Q') => {
            cur.expect("Q(")?;
            let field = field(cur, max_size)?;
            cur.expect(",")?;
            let exponent = small_int(cur)?;
            cur.expect(",")?;
            let vars = small_int(cur)?;
            cur.expect(")")?;
            Construction::PolyQuot { field, exponent, vars }
        }
        _ => return Err(cur.err("one of 'GF(', 'M(', 'T(', 'P(', 'Q('")),
    };
    RingHandle::build(construction, max_size)
}

#[derive(Debug)]
enum Literal {
    Int(u64),
    List(Vec<Literal>),
}

fn literal(cur: &mut Cursor) -> Result<Literal, RingError> {
    if cur.eat("[") {
        let mut items = vec![literal(cur)?];
        while cur.eat(",") {
            items.push(literal(cur)?);
        }
        cur.expect("]")?;
        Ok(Literal::List(items))
    } else {
        Ok(Literal::Int(cur.int()?))
    }
}

/// Parses a decimal encoding or a nested bracket literal such as `[[1,1],[1,0]]`.
pub fn parse_element(ring: &RingHandle, text: &str) -> Result<RingElem, RingError> {
    let mut cur = Cursor::new(text);
    let lit = literal(&mut cur)?;
    cur.end()?;
    let code = encode(ring, &lit)?;
    ring.elem(code as u64)
}

fn bad(msg: impl Into<String>) -> RingError {
    RingError::BadLiteral(msg.into())
}

fn ints(lit: &Literal, len: usize, bound: u32) -> Result<Vec<u32>, RingError> {
    match lit {
        Literal::List(items) if items.len() == len => items
            .iter()
            .map(|it| match it {
                Literal::Int(v) if *v < bound as u64 => Ok(*v as u32),
                _ => Err(bad(format!("expected an integer below {bound}"))),
            })
            .collect(),
        _ => Err(bad(format!("expected a list of {len} entries"))),
    }
}

fn square(lit: &Literal, n: usize, q: u32) -> Result<Vec<Vec<u32>>, RingError> {
    match lit {
        Literal::List(rows) if rows.len() == n => rows.iter().map(|r| ints(r, n, q)).collect(),
        _ => Err(bad(format!("expected {n} rows"))),
    }
}

fn encode(ring: &RingHandle, lit: &Literal) -> Result<u32, RingError> {
    if let Literal::Int(v) = lit {
        if *v >= ring.size() as u64 {
            return Err(RingError::ElementOutOfRange { code: *v, size: ring.size() });
        }
        return Ok(*v as u32);
    }
    let join = |coeffs: &[u32], q: u32| coeffs.iter().rev().fold(0u32, |acc, &c| acc * q + c);
    match ring.construction() {
        Construction::Field(_) => Err(bad("field elements are plain integers")),
        Construction::Matrix { n, field } => {
            let rows = square(lit, *n, field.order())?;
            let flat: Vec<u32> = rows.into_iter().flatten().collect();
            Ok(join(&flat, field.order()))
        }
        Construction::Triangular { m, field } => {
            let rows = square(lit, *m, field.order())?;
            let mut flat = Vec::new();
            for (i, row) in rows.iter().enumerate() {
                if row[..i].iter().any(|&x| x != 0) {
                    return Err(bad("entries below the diagonal must be zero"));
                }
                flat.extend_from_slice(&row[i..]);
            }
            Ok(join(&flat, field.order()))
        }
        Construction::Product(factors) => match lit {
            Literal::List(items) if items.len() == factors.len() => {
                let places = ring.product_places().unwrap();
                let mut code = 0;
                for ((f, item), place) in factors.iter().zip(items).zip(places) {
                    code += encode(f, item)? * place;
                }
                Ok(code)
            }
            _ => Err(bad(format!("expected {} components", factors.len()))),
        },
        Construction::PolyQuot { field, .. } => {
            let len = ring.coefficient_count();
            let coeffs = ints(lit, len, field.order())?;
            Ok(join(&coeffs, field.order()))
        }
    }
}
