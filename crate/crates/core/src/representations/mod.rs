//! Concrete truncated representations.
//!
//! * the shift `S` and `D(q)` on `ℓ₂(ℕ)`;
//! * creation operators on full Fock spaces, for the Cuntz–Toeplitz pair,
//!   for `u_1 … u_k` and, with a Gram inner product, for the deformed pair;
//! * a permutative Cuntz pair on `Dyadic(L)`;
//! * the block matrix models built from `u_1 … u_k` ([`build_qcun`],
//!   [`build_cun`]) and the morphism map `Λ ↦ 1 ⊗ Λ`;
//! * the free-product and wildness representations on tensor spaces.
//!
//! Square roots of `1 − C²` are exact only when `C` is diagonal with
//! rational complements; otherwise they come from a Hermitian eigensolver
//! and are refused in exact mode.

mod fock;
mod generators;
mod models;

use thiserror::Error;

use crate::scalars::ScalarError;
use crate::spaces::SpaceError;
use crate::star_algebra::AlgebraError;

pub use fock::{cuntz_dyadic, diag_q, fock_cuntz_toeplitz, fock_deformed, o_infinity_fock, shift_operator, FockModelQ};
pub use generators::{GeneratorEntry, GeneratorManifest, GeneratorSet};
pub use models::{build_cun, build_free_product_rep, build_qcun, build_wild_rep, functor_f_morphism, spectrum_range};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RepresentationError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("{family} has {expected} generators, got {found} operators")]
    GeneratorCount { family: String, expected: usize, found: usize },
    #[error("{operation} needs {expected}, got {found}")]
    FamilyMismatch { operation: &'static str, expected: &'static str, found: String },
    #[error("need at least {needed} generators, have {available}")]
    InsufficientGenerators { needed: usize, available: usize },
    #[error("requires {requirement}, got q = {q}")]
    Modulus { requirement: &'static str, q: String },
    #[error("{name} is not a positive contraction: spectrum in [{min:.3e}, {max:.3e}]")]
    NotContraction { name: String, min: f64, max: f64 },
    #[error("spectrum [{min:.3e}, {max:.3e}] of C must lie strictly inside (0, 1)")]
    SpectrumBoundary { min: f64, max: f64 },
    #[error("{0} is not self-adjoint")]
    NotHermitian(String),
    #[error("{0}")]
    Invalid(String),
}
