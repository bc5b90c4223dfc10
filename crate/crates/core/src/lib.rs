//! Root and coset structure of sparse univariate polynomials over finite
//! fields, explicit extremal families, and an exhaustive search for
//! trinomials with many roots over prime fields.

pub mod arith;
pub mod cli;
pub mod coset;
pub mod dense;
pub mod error;
pub mod families;
pub mod field;
pub mod number_theory;
pub mod reference;
pub mod report;
pub mod search;
pub mod sparse;

pub use error::{Error, Result};
pub use field::{make_field, DlogTable, Element, Field, FieldSpec};
pub use sparse::{EnumerationBudget, RootSet, SparsePolynomial};
