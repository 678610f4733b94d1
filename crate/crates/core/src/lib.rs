//! Exact search for (strongly) n-torsion clean decompositions in finite rings.
//!
//! An element `r` has an *n-torsion clean* decomposition when `r = e + u` with
//! `e` idempotent and `u` a unit satisfying `u^n = 1`; the decomposition is
//! *strong* when `e` and `u` commute. The (strong) index of a finite ring is
//! the least `n` for which every element has such a decomposition.
//!
//! The crate is organised bottom-up:
//!
//! * [`ffield`]: arithmetic in `GF(p^k)`.
//! * [`rings`]: fields, matrix rings, upper-triangular rings, finite products
//!   and truncated polynomial quotients, with a spec-string parser.
//! * [`analysis`]: idempotents, units, Jacobson radical, center, predicates.
//! * [`torsion`]: decompositions, achievable order sets and the index search.
//! * [`theorems`]: checks of the structural results on concrete rings.
//! * [`cli`]: batch runs and report rendering behind the `tcl` binary.

pub mod analysis;
pub mod arith;
pub mod cli;
pub mod ffield;
pub mod rings;
pub mod theorems;
pub mod torsion;

pub use ffield::{FieldElem, FieldError, FieldSpec};
pub use rings::{parse_element, Construction, Payload, RingElem, RingError, RingHandle};
pub use torsion::{decompose, order_set, torsion_clean_index, Certificate, IndexReport, Mode, SearchOptions};
