//! Exact arithmetic over `Z[t, t^-1]`: polynomials, matrices, minors,
//! presentation reduction, and specialization to finite fields.

mod bezout;
mod field;
pub mod integer;
mod matrix;
mod multi;
mod poly;

use thiserror::Error;

pub use bezout::{bezout_pair, integer_in_ideal, resultant_combination};
pub use field::{
    common_root_field, default_battery, irreducible_factors_mod_p, rank_over_field, specialize, FieldElem, FieldSpec,
    DEFAULT_MAX_FACTOR_DEGREE, DEFAULT_PRIMES,
};
pub use matrix::{single, smith_reduce_heuristic, PolyMatrix};
pub use multi::{Monomial, MultiLaurent};
pub use poly::{gcd2, poly_gcd, LaurentPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("cannot parse Laurent polynomial {0:?}")]
    Parse(String),
    #[error("gcd of an empty family")]
    EmptyGcd,
    #[error("minor size {k} out of range for a {rows}x{cols} matrix")]
    MinorSize { k: usize, rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
}
