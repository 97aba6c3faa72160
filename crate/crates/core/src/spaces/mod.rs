//! Graded truncated Hilbert spaces and operators that remember where their
//! truncation is exact.
//!
//! An isometry that is not unitary has no finite-dimensional model, so a
//! truncated operator is only trusted on part of the space. Each
//! [`TruncatedOperator`] carries per-column and per-row exactness flags that
//! propagate through composition, adjoints, sums and tensor products; the
//! scalar [`TruncatedOperator::valid_depth`] is derived from them.
//!
//! Matrices are stored sparse in every size; dense copies are made only for
//! eigenvalue work.

mod operator;
mod space;
mod sparse;

use thiserror::Error;

pub use operator::{norm_bound, NormBound, Region, TruncatedOperator};
pub use space::{GradedSpace, InnerProduct, SpaceKind};
pub use sparse::SparseMatrix;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error("operators live on different spaces: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },
    #[error("conjugate transpose is not the adjoint on the non-orthonormal basis of {0}")]
    NonOrthonormal(String),
    #[error("depth {depth} exceeds the valid depth {valid}")]
    DepthBeyondValidity { depth: i64, valid: i64 },
    #[error("entry ({row}, {col}) changes the level by {diff}, outside [{lower}, {raise}]")]
    LevelViolation { row: usize, col: usize, diff: i64, raise: i64, lower: i64 },
    #[error("{0}")]
    Shape(String),
}
