//! Relation residuals, positivity, intertwiners and reports.
//!
//! Every residual is evaluated only on basis vectors whose level is
//! certified by the operators' truncation metadata, and every report item
//! records that depth. Exact coefficients pass only on an exact zero.
//!
//! Default tolerances: [`MODEL_TOL`] for constructed matrix models,
//! [`CLOSED_FORM_TOL`] for identities with a closed-form right side.

mod intertwiners;
mod norms;
mod psd;
mod relations;
mod report;
mod suites;

use thiserror::Error;

use crate::representations::RepresentationError;
use crate::spaces::SpaceError;
use crate::star_algebra::AlgebraError;

pub use intertwiners::{
    intertwiner_transport, rank, solve_intertwiners, solve_linear_intertwiners, tensor_factor_check, FactorCheck, Functor,
    IntertwinerSpace, Intertwining, Transport, MAX_UNKNOWNS,
};
pub use norms::{isometry_norm_test, isometry_safe_depth, random_safe_vector};
pub use psd::{determinant, is_eigenvalue, psd_check, PsdOutcome};
pub use relations::{check_relations, fault_injection, perturbation};
pub use report::{CheckKind, Environment, ReportItem, VerificationReport};
pub use suites::{
    defect_norm_suite, fock_vacuum_suite, gram_suite, lemma_suite, polynomial_item, qcun_suite, roundtrip_suite, transport_suite,
    wild_suite,
};

pub const MODEL_TOL: f64 = 1e-10;
pub const CLOSED_FORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum VerificationError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Representation(#[from] RepresentationError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("{0}")]
    Shape(String),
    #[error("{unknowns} unknowns exceed the limit of {limit}")]
    DimensionGuard { unknowns: usize, limit: usize },
    #[error("families differ: {left} vs {right}")]
    FamilyMismatch { left: String, right: String },
    #[error("sample vector {0} is zero")]
    ZeroVector(usize),
    #[error("sample vector {index} reaches level {level}, beyond the safe depth {depth}")]
    UnsafeVector { index: usize, level: usize, depth: i64 },
    #[error("the source operator does not intertwine: {name} has residual {residual:.3e}")]
    SourceNotIntertwiner { name: String, residual: f64 },
    #[error("{0} is not a tensor product space")]
    NotTensorPair(String),
}
