//! Explicit formulas passing between the deformed pair `s1, s2` and the
//! Cuntz–Toeplitz pair `t1, t2`.
//!
//! Writing `P = s1 s1*`:
//!
//! * `t1 = s1`, `t2 = (1 − P) s2 (1 − P + r⁻¹ P)` turns a deformed pair into a
//!   Cuntz–Toeplitz pair ([`lemma1_generators`]);
//! * `t̃2 = t2 (1 − t1 t1* + r t1 t1*)` and the series
//!   `s2 = Σ q^i t1^i t̃2 (t1*)^i` go back ([`tilde_t2`], [`lemma2_partial_sum`]).
//!
//! The series is only ever truncated at order `N`; every identity is checked
//! at finite order against its exact remainder.

use num_complex::Complex64;
use serde::Serialize;

use crate::scalars::{Coeff, Field, FloatField, RootConvention};
use crate::star_algebra::{AlgebraError, Alphabet, Family, Letter, RewriteSystem, StarPolynomial, Word, DEFAULT_DEGREE_CAP};

/// Truncation order of the series for `s2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PartialSumSpec {
    pub order: usize,
}

impl PartialSumSpec {
    pub fn new(order: usize) -> Self {
        PartialSumSpec { order }
    }
}

pub fn s_alphabet() -> Alphabet {
    Family::DeformedCuntz2.default_alphabet()
}

pub fn t_alphabet() -> Alphabet {
    Family::CuntzToeplitz2.default_alphabet()
}

fn gen<C: Coeff>(g: u16) -> StarPolynomial<C> {
    StarPolynomial::letter(g)
}

fn range_projection<C: Coeff>() -> StarPolynomial<C> {
    StarPolynomial::word(Word(vec![Letter::plain(0), Letter::starred(0)]))
}

/// `x^k (x*)^j` for generator 0.
fn t1_power<C: Coeff>(k: usize, j: usize) -> StarPolynomial<C> {
    let mut v = vec![Letter::plain(0); k];
    v.extend(std::iter::repeat_n(Letter::starred(0), j));
    StarPolynomial::word(Word(v))
}

fn q_pow<F: Field>(field: &F, k: usize) -> F::Elem {
    (0..k).fold(F::Elem::one(), |acc, _| acc * field.q())
}

/// `(t1, t2)` as polynomials in `s1, s2`.
pub fn lemma1_generators<F: Field>(field: &F) -> Result<(StarPolynomial<F::Elem>, StarPolynomial<F::Elem>), AlgebraError> {
    let one = StarPolynomial::one();
    let p = range_projection();
    let right = &(&one - &p) + &p.scale(&field.rinv()?);
    let t2 = &(&(&one - &p) * &gen(1)) * &right;
    Ok((gen(0), t2))
}

/// `t̃2 = t2 (1 − t1 t1* + r t1 t1*)` over `t1, t2`.
pub fn tilde_t2<F: Field>(field: &F) -> Result<StarPolynomial<F::Elem>, AlgebraError> {
    let one = StarPolynomial::one();
    let p = range_projection();
    let right = &(&one - &p) + &p.scale(&field.r()?);
    Ok(&gen(1) * &right)
}

/// `s2^(N) = Σ_{i ≤ N} q^i t1^i t̃2 (t1*)^i`.
pub fn lemma2_partial_sum<F: Field>(field: &F, spec: PartialSumSpec) -> Result<StarPolynomial<F::Elem>, AlgebraError> {
    let tt = tilde_t2(field)?;
    let mut out = StarPolynomial::zero();
    for i in 0..=spec.order {
        let left = t1_power(i, 0).scale(&q_pow(field, i));
        let term = left.checked_mul(&tt, DEFAULT_DEGREE_CAP)?.checked_mul(&t1_power(0, i), DEFAULT_DEGREE_CAP)?;
        out = out + term;
    }
    Ok(out)
}

/// The partial sum with `t1, t2` replaced by their expressions in `s1, s2`,
/// in normal form for the deformed relations.
pub fn substituted_partial_sum<F: Field>(field: &F, spec: PartialSumSpec) -> Result<StarPolynomial<F::Elem>, AlgebraError> {
    let (t1, t2) = lemma1_generators(field)?;
    let rs = RewriteSystem::new(Family::DeformedCuntz2, field)?;
    let s2n = lemma2_partial_sum(field, spec)?;
    Ok(rs.normal_form(&s2n.substitute(&[t1, t2], DEFAULT_DEGREE_CAP)?))
}

/// `s2(t1(s), t2(s)) − s2` in deformed normal form.
pub fn roundtrip_defect<F: Field>(field: &F, spec: PartialSumSpec) -> Result<StarPolynomial<F::Elem>, AlgebraError> {
    Ok(substituted_partial_sum(field, spec)? - gen(1))
}

/// The predicted value of [`roundtrip_defect`]: `−q^{N+1} s1^{N+1} s2 (s1*)^{N+1}`.
pub fn roundtrip_defect_closed_form<F: Field>(field: &F, spec: PartialSumSpec) -> StarPolynomial<F::Elem> {
    let n = spec.order + 1;
    let mut v = vec![Letter::plain(0); n];
    v.push(Letter::plain(1));
    v.extend(std::iter::repeat_n(Letter::starred(0), n));
    StarPolynomial::monomial(-q_pow(field, n), Word(v))
}

/// `t̃2` with `t1, t2` replaced by their expressions in `s1, s2`; equals
/// `(1 − s1 s1*) s2`.
pub fn substituted_tilde_t2<F: Field>(field: &F) -> Result<StarPolynomial<F::Elem>, AlgebraError> {
    let (t1, t2) = lemma1_generators(field)?;
    let rs = RewriteSystem::new(Family::DeformedCuntz2, field)?;
    Ok(rs.normal_form(&tilde_t2(field)?.substitute(&[t1, t2], DEFAULT_DEGREE_CAP)?))
}

/// Normal form of `s2^(N)* s2^(N)` under the Cuntz–Toeplitz relations.
pub fn partial_sum_isometry<F: Field>(field: &F, spec: PartialSumSpec) -> Result<StarPolynomial<F::Elem>, AlgebraError> {
    let ct = RewriteSystem::new(Family::CuntzToeplitz2, field)?;
    let s = lemma2_partial_sum(field, spec)?;
    ct.product(&s.adjoint(), &s, DEFAULT_DEGREE_CAP)
}

/// `1 − |q|^{2N+2} t1^{N+1} (t1*)^{N+1}`; for real `q` this is `q^{2N+2}`.
pub fn partial_sum_isometry_closed_form<F: Field>(field: &F, spec: PartialSumSpec) -> StarPolynomial<F::Elem> {
    let n = spec.order + 1;
    let modulus = (0..n).fold(F::Elem::one(), |acc, _| acc * field.q() * field.qbar());
    StarPolynomial::one() - t1_power(n, n).scale(&modulus)
}

/// Normal form of `t1* s2^(N) − q s2^(N) t1*` under the Cuntz–Toeplitz relations.
pub fn partial_sum_commutation<F: Field>(field: &F, spec: PartialSumSpec) -> Result<StarPolynomial<F::Elem>, AlgebraError> {
    let ct = RewriteSystem::new(Family::CuntzToeplitz2, field)?;
    let s = lemma2_partial_sum(field, spec)?;
    let t1s = StarPolynomial::letter_star(0);
    let lhs = t1s.checked_mul(&s, DEFAULT_DEGREE_CAP)? - s.checked_mul(&t1s, DEFAULT_DEGREE_CAP)?.scale(&field.q());
    Ok(ct.normal_form(&lhs))
}

/// `−q^{N+1} t1^N t̃2 (t1*)^{N+1}`.
pub fn partial_sum_commutation_closed_form<F: Field>(
    field: &F,
    spec: PartialSumSpec,
) -> Result<StarPolynomial<F::Elem>, AlgebraError> {
    let n = spec.order;
    let left = t1_power(n, 0).scale(&-q_pow(field, n + 1));
    left.checked_mul(&tilde_t2(field)?, DEFAULT_DEGREE_CAP)?.checked_mul(&t1_power(0, n + 1), DEFAULT_DEGREE_CAP)
}

/// The other composite: `t2(t1, s2^(N)) − t2` under the Cuntz–Toeplitz
/// relations. It vanishes identically for every `N`.
pub fn inverse_defect<F: Field>(
    field: &F,
    spec: PartialSumSpec,
) -> Result<(StarPolynomial<F::Elem>, StarPolynomial<F::Elem>), AlgebraError> {
    let ct = RewriteSystem::new(Family::CuntzToeplitz2, field)?;
    let (t1, t2) = lemma1_generators(field)?;
    let images = [gen(0), lemma2_partial_sum(field, spec)?];
    let d1 = ct.normal_form(&t1.substitute(&images, DEFAULT_DEGREE_CAP)?) - gen(0);
    let d2 = ct.normal_form(&t2.substitute(&images, DEFAULT_DEGREE_CAP)?) - gen(1);
    Ok((d1, d2))
}

/// Outcome of the deformed-pair identities for one choice of root.
#[derive(Clone, Debug, Serialize)]
pub struct ConventionOutcome {
    pub convention: RootConvention,
    /// Largest coefficient of `t2* t2 − 1`, `t1* t2` and `t̃2* t̃2 − 1 + q q̄ t1 t1*`
    /// in normal form.
    pub max_residual: f64,
    pub satisfied: bool,
}

/// Evaluates the constructions for a complex `q` with both readings of
/// `(1 − q²)^{1/2}` and reports which one makes the relations hold.
pub fn probe_root_conventions(q: Complex64, tol: f64) -> Result<Vec<ConventionOutcome>, AlgebraError> {
    let mut out = vec![];
    for convention in [RootConvention::ModulusSquared, RootConvention::Literal] {
        let f = FloatField::with_convention(q, convention);
        let ds = RewriteSystem::new(Family::DeformedCuntz2, &f)?;
        let ct = RewriteSystem::new(Family::CuntzToeplitz2, &f)?;
        let (t1, t2) = lemma1_generators(&f)?;
        let a = ds.product(&t2.adjoint(), &t2, DEFAULT_DEGREE_CAP)? - StarPolynomial::one();
        let b = ds.product(&t1.adjoint(), &t2, DEFAULT_DEGREE_CAP)?;
        let tt = tilde_t2(&f)?;
        let expected = StarPolynomial::one() - range_projection().scale(&Complex64::new(q.norm_sqr(), 0.0));
        let c = ct.product(&tt.adjoint(), &tt, DEFAULT_DEGREE_CAP)? - expected;
        let max_residual = [a, b, c].iter().map(StarPolynomial::max_coeff_magnitude).fold(0.0, f64::max);
        out.push(ConventionOutcome { convention, max_residual, satisfied: max_residual <= tol });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{ExactField, GaussQ};
    use crate::star_algebra::parse_expression;

    fn exact(num: i64, den: i64) -> ExactField {
        ExactField::new(GaussQ::from_ratio(num, den))
    }

    fn show<C: Coeff>(p: &StarPolynomial<C>, al: &Alphabet) -> String {
        p.display(al).to_string()
    }

    #[test]
    fn q_zero_degenerations() {
        let f = exact(0, 1);
        let (_, t2) = lemma1_generators(&f).unwrap();
        assert_eq!(show(&t2, &s_alphabet()), "s2 - s1 s1* s2");
        assert_eq!(show(&tilde_t2(&f).unwrap(), &t_alphabet()), "t2");
        for n in 0..4 {
            assert!(roundtrip_defect(&f, PartialSumSpec::new(n)).unwrap().is_zero());
        }
    }

    #[test]
    fn lemma1_relations() {
        for f in [exact(1, 2), exact(-1, 2), exact(3, 5)] {
            let ds = RewriteSystem::new(Family::DeformedCuntz2, &f).unwrap();
            let (t1, t2) = lemma1_generators(&f).unwrap();
            assert!(ds.product(&t1.adjoint(), &t2, 64).unwrap().is_zero());
            assert!(ds.product(&t2.adjoint(), &t2, 64).unwrap().is_one());
        }
    }

    #[test]
    fn lemma2_order_zero_and_tilde_relations() {
        let f = exact(1, 2);
        let ct = RewriteSystem::new(Family::CuntzToeplitz2, &f).unwrap();
        let tt = tilde_t2(&f).unwrap();
        assert_eq!(lemma2_partial_sum(&f, PartialSumSpec::new(0)).unwrap(), tt);
        let got = ct.product(&tt.adjoint(), &tt, 64).unwrap();
        let want = parse_expression("1 - q^2 t1 t1*", &t_alphabet(), &f).unwrap();
        assert_eq!(got, want);
        assert!(ct.product(&StarPolynomial::letter_star(0), &tt, 64).unwrap().is_zero());
    }

    #[test]
    fn roundtrip_order_two() {
        let f = exact(1, 2);
        let d = roundtrip_defect(&f, PartialSumSpec::new(2)).unwrap();
        assert_eq!(show(&d, &s_alphabet()), "-q^3 s1^3 s2 s1*^3");
        let ds = RewriteSystem::new(Family::DeformedCuntz2, &f).unwrap();
        let want = parse_expression("(1 - s1 s1*) s2", &s_alphabet(), &f).unwrap();
        assert_eq!(substituted_tilde_t2(&f).unwrap(), ds.normal_form(&want));
    }

    #[test]
    fn inverse_direction_is_exact() {
        let f = exact(3, 5);
        for n in 0..3 {
            let (d1, d2) = inverse_defect(&f, PartialSumSpec::new(n)).unwrap();
            assert!(d1.is_zero() && d2.is_zero());
        }
    }

    #[test]
    fn modulus_convention_is_the_consistent_one() {
        let out = probe_root_conventions(Complex64::new(0.3, 0.4), 1e-12).unwrap();
        assert!(out[0].satisfied, "{out:?}");
        assert!(!out[1].satisfied, "{out:?}");
    }
}
