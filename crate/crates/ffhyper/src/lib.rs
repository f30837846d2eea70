//! Hypergeometric character sums over finite fields.
//!
//! The crate evaluates the character-sum analogues of hypergeometric series
//! over F_q (the Greene, McCarthy-starred and Fuselier 2P1/2F1 families,
//! plus the two-variable Appell F4 analogue) and ships a data-driven catalog
//! of product formulas, transformations and special-value theorems together
//! with a verification engine that checks every catalog entry over concrete
//! fields, exactly.
//!
//! Layout:
//! * [`value`] - the cyclotomic value domain (complex floats or residues
//!   modulo an auxiliary prime);
//! * [`field`] - F_{p^r} construction with discrete-log and trace tables;
//! * [`characters`] - the dual group, special characters, delta functions;
//! * [`char_sums`] - Gauss/Jacobi sums, binomial coefficients, caches;
//! * [`series`] - the four series families;
//! * [`identity`] - the identity catalog, scan engine and reports.

pub mod char_sums;
pub mod characters;
pub mod error;
pub mod field;
pub mod identity;
pub mod series;
pub mod value;

pub use char_sums::SumTable;
pub use characters::{CharIndex, Special};
pub use error::{Error, Result};
pub use field::{Elem, FieldCtx};
pub use value::{Backend, BackendKind, CycValue};
