//! Exact scalars in the quadratic extension ℚ(i)(r), `r² = 1 − q²`, for a
//! fixed Gaussian-rational deformation parameter `q`, plus a double-precision
//! complex fallback.
//!
//! Both kinds implement [`Coeff`], so polynomials and operators are written
//! once and run in either mode. A [`Field`] bundles the distinguished
//! elements `q`, `q̄`, `r` and `r⁻¹` for one session.

mod coeff;
mod gauss;
mod quadratic;

use thiserror::Error;

pub use coeff::{Coeff, CoeffText, ExactField, Field, FloatField, RootConvention, ScalarMode, FLOAT_MODULUS_TOL, FLOAT_PRUNE};
pub use gauss::{rational_sqrt, GaussQ};
pub use quadratic::{QContext, RootKind, ScalarQ};

use serde::Serialize;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("scalars from different q-contexts cannot be combined (q = {left} vs q = {right})")]
    ContextMismatch { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("(1 - q^2)^(1/2) has no exact representation for q = {q}; use float mode")]
    RootUnavailable { q: String },
    #[error("not representable in exact mode: {0}")]
    NotRepresentable(String),
    #[error("{0}")]
    Parse(String),
}

/// Report rendering of an exact scalar.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ScalarRecord {
    pub a: String,
    pub b: String,
    pub q: String,
    pub float: String,
}

impl ScalarRecord {
    pub fn exact(x: &ScalarQ) -> Self {
        let z = x.to_complex();
        ScalarRecord {
            a: x.rational_part().to_string(),
            b: x.root_part().to_string(),
            q: x.context().map(|c| c.q().to_string()).unwrap_or_else(|| "none".into()),
            float: format_complex(z),
        }
    }
}

pub fn format_complex(z: num_complex::Complex64) -> String {
    if z.im == 0.0 {
        format!("{:e}", z.re)
    } else {
        format!("{:e}{:+e}i", z.re, z.im)
    }
}

/// Builds `a + b·r` for the given `q` (all three Gaussian rationals).
pub fn scalar_make(a: GaussQ, b: GaussQ, q: GaussQ) -> Result<ScalarQ, ScalarError> {
    ScalarQ::make(a, b, &QContext::new(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gauss() -> impl Strategy<Value = GaussQ> {
        (-20i64..20, 1i64..9, -20i64..20, 1i64..9).prop_map(|(a, b, c, d)| GaussQ::from_parts((a, b), (c, d)))
    }

    fn field() -> ExactField {
        ExactField::new(GaussQ::from_ratio(1, 2))
    }

    fn scalar() -> impl Strategy<Value = ScalarQ> {
        (gauss(), gauss()).prop_map(|(a, b)| field().make(a, b).unwrap())
    }

    proptest! {
        #[test]
        fn field_axioms(x in scalar(), y in scalar(), z in scalar()) {
            prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
            prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
            prop_assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
            if !x.is_zero() {
                prop_assert!((x.clone() * x.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn conjugation_is_an_involutive_homomorphism(x in scalar(), y in scalar()) {
            prop_assert_eq!(x.conj().conj(), x.clone());
            prop_assert_eq!((x.clone() * y.clone()).conj(), x.conj() * y.conj());
        }

        #[test]
        fn float_rendering_is_a_homomorphism(x in scalar(), y in scalar()) {
            let tol = 1e-14 * (1.0 + x.to_complex().norm()) * (1.0 + y.to_complex().norm()) * 64.0;
            let p = (x.clone() * y.clone()).to_complex() - x.to_complex() * y.to_complex();
            let s = (x.clone() + y.clone()).to_complex() - (x.to_complex() + y.to_complex());
            prop_assert!(p.norm() <= tol && s.norm() <= tol);
        }
    }

    #[test]
    fn scalar_make_examples() {
        let half = GaussQ::from_ratio(1, 2);
        assert!(scalar_make(GaussQ::one(), GaussQ::zero(), half.clone()).unwrap().is_one());
        // 4/3·r is (1 − q²)^{-1/2}: its square is 4/3
        let x = scalar_make(GaussQ::zero(), GaussQ::from_ratio(4, 3), half).unwrap();
        assert_eq!(x.clone() * x, ScalarQ::ratio(4, 3));
        // q = 3/5: r² = 16/25, r itself folds to 4/5
        let r = scalar_make(GaussQ::zero(), GaussQ::one(), GaussQ::from_ratio(3, 5)).unwrap();
        let oracle = GaussQ::one() - GaussQ::from_ratio(9, 25);
        assert_eq!((r.clone() * r.clone()).as_gauss(), Some(&oracle));
        assert_eq!(r, ScalarQ::ratio(4, 5));
    }

    #[test]
    fn record_rendering() {
        let x = field().make(GaussQ::from_parts((1, 2), (-1, 3)), GaussQ::from_ratio(2, 1)).unwrap();
        let rec = ScalarRecord::exact(&x);
        assert_eq!(rec.a, "1/2 - 1/3 i");
        assert_eq!(rec.b, "2");
        assert_eq!(rec.q, "1/2");
    }
}
