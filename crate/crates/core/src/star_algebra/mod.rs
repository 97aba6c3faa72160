//! The free *-algebra on a finite alphabet of generators, with coefficients in
//! any [`Coeff`](crate::scalars::Coeff) type.
//!
//! Polynomials are parsed from text, multiplied, conjugated and brought to
//! normal form by one of the rewrite families in [`Family`]. For the
//! Toeplitz-type families the vacuum functional and the Gram matrix of
//! creation words are available.

mod parse;
mod poly;
mod rewrite;
mod vacuum;
mod word;

use thiserror::Error;

use crate::scalars::ScalarError;

pub use parse::{parse_expression, parse_with_cap};
pub use poly::{PolyDisplay, StarPolynomial, DEFAULT_DEGREE_CAP};
pub use rewrite::{Family, RewriteSystem, Strategy};
pub use vacuum::{gram_matrix, vacuum_expectation, GramMatrix};
pub use word::{creation_words, Alphabet, Letter, Word, RESERVED};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AlgebraError {
    #[error("invalid generator name {0:?}")]
    BadAlphabet(String),
    #[error("{0}")]
    AlphabetMismatch(String),
    #[error("word of length {len} exceeds the degree cap {cap}")]
    DegreeCap { len: usize, cap: usize },
    #[error("syntax error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown generator {name:?} at byte {position}")]
    UnknownGenerator { name: String, position: usize },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("{operation} is not defined for the {family} relations")]
    UnsupportedFamily { operation: &'static str, family: String },
    #[error("the {family} relations need {requirement}; got q = {q}")]
    ModulusRequirement { family: String, requirement: &'static str, q: String },
}
