use num_complex::Complex64;
use proptest::prelude::*;
use qcuntz::representations::{build_cun, build_wild_rep, cuntz_dyadic, fock_cuntz_toeplitz, o_infinity_fock};
use qcuntz::scalars::{Coeff, ExactField, Field, FloatField, GaussQ, ScalarQ};
use qcuntz::spaces::{Region, SparseMatrix, TruncatedOperator};
use qcuntz::star_algebra::{gram_matrix, vacuum_expectation, Family, Letter, RewriteSystem, StarPolynomial, Word};
use qcuntz::transforms::{inverse_defect, lemma2_partial_sum, tilde_t2, PartialSumSpec};
use qcuntz::verification::{
    isometry_norm_test, isometry_safe_depth, psd_check, random_safe_vector, solve_intertwiners, CLOSED_FORM_TOL,
};

fn word(letters: &[(u16, bool)]) -> Word {
    Word(letters.iter().map(|&(g, s)| Letter { gen: g, star: s }).collect())
}

fn letters() -> impl proptest::strategy::Strategy<Value = Vec<(u16, bool)>> {
    prop::collection::vec((0u16..2, any::<bool>()), 0..=3)
}

fn half() -> (ExactField, RewriteSystem<ScalarQ>) {
    let f = ExactField::new(GaussQ::from_ratio(1, 2));
    let r = RewriteSystem::new(Family::DeformedCuntz2, &f).unwrap();
    (f, r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_rules_keep_vacuum_expectations(a in letters(), b in letters(), pick in 0usize..64) {
        for (f, q) in [(Family::DeformedCuntz2, GaussQ::from_ratio(1, 2)), (Family::CuntzToeplitz2, GaussQ::zero())] {
            let field = ExactField::new(q);
            let r = RewriteSystem::new(f, &field).unwrap();
            let rules = r.rules(2);
            let (lhs, rhs) = &rules[pick % rules.len()];
            let (wa, wb) = (StarPolynomial::word(word(&a)), StarPolynomial::word(word(&b)));
            let before = &(&wa * &StarPolynomial::word(lhs.clone())) * &wb;
            let after = &(&wa * rhs) * &wb;
            prop_assert_eq!(vacuum_expectation(&before, &r).unwrap(), vacuum_expectation(&after, &r).unwrap());
        }
    }

    #[test]
    fn vacuum_states_are_positive(terms in prop::collection::vec((-3i64..=3, letters()), 1..=3)) {
        let (f, r) = half();
        let mut p = StarPolynomial::zero();
        for (c, w) in &terms {
            p.add_term(word(w), f.gauss(&GaussQ::from_ratio(*c, 1)));
        }
        let v = vacuum_expectation(&(&p.adjoint() * &p), &r).unwrap().to_complex();
        prop_assert!(v.re >= -1e-12);
        prop_assert_eq!(v.im, 0.0);
    }

    #[test]
    fn commutant_dimension_survives_conjugation(m in 1i64..6, n in 1i64..6, i in 1usize..3) {
        // rotation by the Pythagorean triple (m² − n², 2mn, m² + n²) in a same-level plane
        prop_assume!(m != n);
        let f = ExactField::new(GaussQ::zero());
        let g = fock_cuntz_toeplitz(&f, 2, 2).unwrap();
        let (a, b, c) = (m * m - n * n, 2 * m * n, m * m + n * n);
        let (p, q) = if i == 1 { (1, 2) } else { (3, 6) };
        let dim = g.space().dim();
        let mut entries: Vec<(usize, usize, ScalarQ)> =
            (0..dim).filter(|&k| k != p && k != q).map(|k| (k, k, ScalarQ::ratio(1, 1))).collect();
        entries.extend([
            (p, p, ScalarQ::ratio(a, c)),
            (p, q, ScalarQ::ratio(-b, c)),
            (q, p, ScalarQ::ratio(b, c)),
            (q, q, ScalarQ::ratio(a, c)),
        ]);
        let u = TruncatedOperator::exact(g.space().clone(), SparseMatrix::from_triplets(dim, dim, entries), 0, 0).unwrap();
        let gc = g.conjugate(&u).unwrap();
        let base = solve_intertwiners(&g, &g).unwrap().dim();
        prop_assert_eq!(solve_intertwiners(&gc, &gc).unwrap().dim(), base);
    }

    #[test]
    fn wild_isometry_norms_are_rigid(seed in any::<u64>()) {
        let f = ExactField::new(GaussQ::from_parts((3, 5), (4, 5)));
        let pt = cuntz_dyadic(&f, 3).unwrap();
        let c = TruncatedOperator::diagonal(pt.space(), (0..8).map(|i| ScalarQ::ratio(if i % 3 == 0 { 3 } else { 4 }, 5)).collect()).unwrap();
        let g = build_wild_rep(&f, &pt, &c, 4).unwrap();
        let depth = isometry_safe_depth(&g).unwrap();
        let x = random_safe_vector::<ScalarQ>(g.space(), depth, seed);
        let r = isometry_norm_test(&g, &[x], CLOSED_FORM_TOL).unwrap();
        prop_assert!(r.pass, "{}", r.to_text());
    }
}

#[test]
fn float_gram_is_positive_definite() {
    for q in [0.9, -0.9, 0.5, -0.6] {
        let f = FloatField::new(Complex64::new(q, 0.0));
        let r = RewriteSystem::new(Family::DeformedCuntz2, &f).unwrap();
        for level in 1..=6 {
            let g = gram_matrix(level, &r).unwrap();
            assert!(g.is_hermitian());
            let o = psd_check(&g.entries, CLOSED_FORM_TOL).unwrap();
            assert!(o.pass && o.min_eigenvalue > 0.0, "q = {q}, L = {level}: {}", o.min_eigenvalue);
        }
    }
    let f = FloatField::new(Complex64::from_polar(0.9, 0.7));
    let r = RewriteSystem::new(Family::DeformedCuntz2, &f).unwrap();
    let g = gram_matrix(5, &r).unwrap();
    assert!(g.is_hermitian() && psd_check(&g.entries, CLOSED_FORM_TOL).unwrap().min_eigenvalue > 0.0);
}

#[test]
fn inverse_composite_is_the_identity() {
    for (n, d) in [(1, 2), (-1, 2), (3, 5)] {
        let f = ExactField::new(GaussQ::from_ratio(n, d));
        for order in 0..=4 {
            let (d1, d2) = inverse_defect(&f, PartialSumSpec::new(order)).unwrap();
            assert!(d1.is_zero() && d2.is_zero());
        }
    }
}

#[test]
fn partial_sum_defects_shrink_geometrically() {
    let level = 10;
    for q in [0.5, 0.9] {
        let f = FloatField::new(Complex64::new(q, 0.0));
        let g = fock_cuntz_toeplitz(&f, 2, level).unwrap();
        for order in 0..=2 {
            let s = lemma2_partial_sum(&f, PartialSumSpec::new(order)).unwrap();
            let iso = g.evaluate(&(&(&s.adjoint() * &s) - &StarPolynomial::one())).unwrap();
            let t1s = StarPolynomial::letter_star(0);
            let comm = g.evaluate(&(&(&t1s * &s) - &(&s * &t1s).scale(&f.q()))).unwrap();
            let bound = q.powi(order as i32 + 1) + 1e-12;
            for op in [iso, comm] {
                let d = op.valid_depth();
                assert!(d >= 0, "order {order}");
                let nb = op.residual_norm(Region::Depth(d)).unwrap();
                assert!(nb.bound <= bound, "q = {q}, N = {order}: {} > {bound}", nb.bound);
            }
        }
    }
}

#[test]
fn cun_fock_vacuum_is_annihilated() {
    let f = ExactField::new(GaussQ::from_ratio(1, 2));
    let g = build_cun(&f, &o_infinity_fock(&f, 4, 2).unwrap(), 5).unwrap();
    let mut omega = vec![ScalarQ::zero(); g.space().dim()];
    omega[0] = ScalarQ::one();
    for i in 0..2 {
        assert!(g.adjoint(i).unwrap().apply(&omega).iter().all(Coeff::is_zero));
    }
    let tt = tilde_t2(&f).unwrap();
    assert!(g.evaluate(&tt.adjoint()).unwrap().apply(&omega).iter().all(Coeff::is_zero));
    for order in 0..=2 {
        let s = lemma2_partial_sum(&f, PartialSumSpec::new(order)).unwrap();
        assert!(g.evaluate(&s.adjoint()).unwrap().apply(&omega).iter().all(Coeff::is_zero));
    }
}
