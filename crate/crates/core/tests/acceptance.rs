//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Expected values are rebuilt here letter by letter instead of
//! taken from the library's closed forms.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcuntz::representations::{
    build_cun, build_qcun, build_wild_rep, cuntz_dyadic, fock_cuntz_toeplitz, fock_deformed, o_infinity_fock, GeneratorSet,
};
use qcuntz::scalars::{Coeff, ExactField, Field, FloatField, GaussQ, ScalarQ};
use qcuntz::spaces::{GradedSpace, TruncatedOperator};
use qcuntz::star_algebra::{gram_matrix, parse_expression, Family, Letter, RewriteSystem, StarPolynomial, Word};
use qcuntz::transforms::{
    lemma1_generators, lemma2_partial_sum, partial_sum_commutation, partial_sum_isometry, roundtrip_defect, substituted_tilde_t2,
    PartialSumSpec,
};
use qcuntz::verification::{
    defect_norm_suite, fault_injection, intertwiner_transport, isometry_norm_test, polynomial_item, psd_check, qcun_suite,
    transport_suite, wild_suite, Functor, Intertwining, VerificationReport, CLOSED_FORM_TOL, MODEL_TOL,
};

type Outcome = Result<String, String>;

const EXACT_QS: [(i64, i64); 4] = [(0, 1), (1, 2), (-1, 2), (3, 5)];
const MAX_ORDER: usize = 8;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passed(r: &VerificationReport) -> Result<(), String> {
    match r.failures().next() {
        None if !r.items.is_empty() => Ok(()),
        None => Err(format!("{}: no items", r.suite)),
        Some(bad) => Err(format!("{}: {} (residual {:.3e})", r.suite, bad.name, bad.residual)),
    }
}

fn exact(n: i64, d: i64) -> ExactField {
    ExactField::new(GaussQ::from_ratio(n, d))
}

fn w(letters: &[(u16, bool, usize)]) -> Word {
    Word(letters.iter().flat_map(|&(g, star, k)| std::iter::repeat_n(Letter { gen: g, star }, k)).collect())
}

fn qpow<F: Field>(f: &F, k: usize) -> F::Elem {
    (0..k).fold(F::Elem::one(), |acc, _| acc * f.q())
}

/// Largest entry modulus of `op` over columns of level `≤ depth`.
fn max_on<C: Coeff>(op: &TruncatedOperator<C>, depth: i64) -> f64 {
    let space = op.space();
    (0..space.dim())
        .filter(|&c| space.level(c) as i64 <= depth)
        .flat_map(|c| op.matrix().col(c).iter().map(|(_, v)| v.to_complex().norm()))
        .fold(0.0, f64::max)
}

fn norm<C: Coeff>(x: &[C]) -> f64 {
    x.iter().map(|c| c.to_complex().norm_sqr()).sum::<f64>().sqrt()
}

fn pair_identities() -> Outcome {
    for (n, d) in EXACT_QS {
        let f = exact(n, d);
        let ds = RewriteSystem::new(Family::DeformedCuntz2, &f).map_err(|e| e.to_string())?;
        let (t1, t2) = lemma1_generators(&f).map_err(|e| e.to_string())?;
        for (a, b, want) in
            [(&t1, &t2, StarPolynomial::zero()), (&t2, &t2, StarPolynomial::one()), (&t1, &t1, StarPolynomial::one())]
        {
            let got = ds.normal_form(&(&a.adjoint() * b));
            ensure(got == want, || format!("q = {n}/{d}: got {}", got.display(ds.alphabet())))?;
        }
    }
    Ok("3 identities for each of 4 values of q, exact zero discrepancy".into())
}

fn partial_sums() -> Outcome {
    for (n, d) in EXACT_QS {
        let f = exact(n, d);
        let r = f.r().map_err(|e| e.to_string())?;
        for order in 0..=MAX_ORDER {
            let spec = PartialSumSpec::new(order);
            let m = order + 1;
            let mut iso = StarPolynomial::one();
            iso.add_term(w(&[(0, false, m), (0, true, m)]), -qpow(&f, 2 * m));
            let got = partial_sum_isometry(&f, spec).map_err(|e| e.to_string())?;
            ensure((got - iso).is_zero(), || format!("q = {n}/{d}, N = {order}: isometry defect"))?;
            // t1^N t̃2 (t1*)^(N+1) with t̃2 = t2 + (r − 1) t2 t1 t1*
            let c = -qpow(&f, m);
            let mut comm = StarPolynomial::zero();
            comm.add_term(w(&[(0, false, order), (1, false, 1), (0, true, m)]), c.clone());
            comm.add_term(
                w(&[(0, false, order), (1, false, 1), (0, false, 1), (0, true, m + 1)]),
                c * (r.clone() - ScalarQ::one()),
            );
            let got = partial_sum_commutation(&f, spec).map_err(|e| e.to_string())?;
            ensure((got - comm).is_zero(), || format!("q = {n}/{d}, N = {order}: commutation defect"))?;
        }
    }
    let mut worst: f64 = 0.0;
    for q in [0.0, 0.5, -0.5, 0.6] {
        let f = FloatField::new(Complex64::new(q, 0.0));
        let rep = defect_norm_suite(&f, MAX_ORDER, 1e-12).map_err(|e| e.to_string())?;
        passed(&rep)?;
        ensure(rep.items.len() == 2 * (MAX_ORDER + 1), || "missing norm items".into())?;
        for (k, item) in rep.items.iter().enumerate() {
            let order = (k / 2) as i32;
            worst = worst.max(item.residual - q.abs().powi(order + 1));
        }
    }
    Ok(format!("N ≤ {MAX_ORDER} exact; largest norm excess over |q|^(N+1) is {worst:.1e}"))
}

fn roundtrip() -> Outcome {
    for (n, d) in EXACT_QS {
        let f = exact(n, d);
        // (1 − s1 s1*) s2 = s2 − q s1 s2 s1*
        let mut tt = StarPolynomial::letter(1);
        tt.add_term(w(&[(0, false, 1), (1, false, 1), (0, true, 1)]), -f.q());
        let got = substituted_tilde_t2(&f).map_err(|e| e.to_string())?;
        ensure((got - tt).is_zero(), || format!("q = {n}/{d}: substituted t̃2"))?;
        for order in 0..=MAX_ORDER {
            let m = order + 1;
            let want = StarPolynomial::monomial(-qpow(&f, m), w(&[(0, false, m), (1, false, 1), (0, true, m)]));
            let got = roundtrip_defect(&f, PartialSumSpec::new(order)).map_err(|e| e.to_string())?;
            ensure(got == want, || {
                format!("q = {n}/{d}, N = {order}: defect {}", got.display(&Family::DeformedCuntz2.default_alphabet()))
            })?;
        }
    }
    Ok(format!("N ≤ {MAX_ORDER} for 4 values of q, exact"))
}

/// Cholesky of `G + εI` exists iff `G` has no eigenvalue below `−ε`.
fn cholesky_ok(g: &[Vec<Complex64>], eps: f64) -> bool {
    let n = g.len();
    let m = DMatrix::from_fn(n, n, |i, j| g[i][j] + if i == j { Complex64::new(eps, 0.0) } else { Complex64::new(0.0, 0.0) });
    Cholesky::new(m).is_some()
}

fn fock_positivity() -> Outcome {
    let mut mins = vec![];
    for (n, d) in [(1, 2), (-1, 2), (3, 5), (-3, 5)] {
        let f = exact(n, d);
        let rs = RewriteSystem::new(Family::DeformedCuntz2, &f).map_err(|e| e.to_string())?;
        for level in 1..=6 {
            let g = gram_matrix(level, &rs).map_err(|e| e.to_string())?;
            ensure(g.is_hermitian(), || format!("q = {n}/{d}, L = {level}: not Hermitian"))?;
            let o = psd_check(&g.entries, CLOSED_FORM_TOL).map_err(|e| e.to_string())?;
            ensure(o.pass && cholesky_ok(&g.to_complex(), CLOSED_FORM_TOL), || {
                format!("q = {n}/{d}, L = {level}: λ_min {}", o.min_eigenvalue)
            })?;
            if level == 6 {
                mins.push(o.min_eigenvalue);
            }
            if level >= 2 {
                let a = g.index_of(&w(&[(0, false, 1), (1, false, 1)])).ok_or("e12 missing")?;
                let b = g.index_of(&w(&[(1, false, 1), (0, false, 1)])).ok_or("e21 missing")?;
                let m = g.block(&[a, b]);
                for lambda in [ScalarQ::one() + f.q(), ScalarQ::one() - f.q()] {
                    let det = (m[0][0].clone() - lambda.clone()) * (m[1][1].clone() - lambda.clone())
                        - m[0][1].clone() * m[1][0].clone();
                    ensure(det.is_zero(), || format!("q = {n}/{d}: {lambda:?} is not a block eigenvalue"))?;
                }
            }
        }
    }
    let f = FloatField::new(Complex64::new(0.9, 0.0));
    let rs = RewriteSystem::new(Family::DeformedCuntz2, &f).map_err(|e| e.to_string())?;
    let g = gram_matrix(6, &rs).map_err(|e| e.to_string())?;
    let o = psd_check(&g.entries, CLOSED_FORM_TOL).map_err(|e| e.to_string())?;
    ensure(o.pass && cholesky_ok(&g.to_complex(), CLOSED_FORM_TOL), || format!("q = 0.9: λ_min {}", o.min_eigenvalue))?;
    mins.push(o.min_eigenvalue);
    let f = exact(0, 1);
    let g =
        gram_matrix(6, &RewriteSystem::new(Family::DeformedCuntz2, &f).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let identity = (0..g.dim()).all(|i| (0..g.dim()).all(|j| if i == j { g.get(i, j).is_one() } else { g.get(i, j).is_zero() }));
    ensure(identity, || "q = 0 Gram is not the identity".into())?;
    let lowest = mins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(format!("L ≤ 6 for 5 values of q, smallest eigenvalue {lowest:.4}; block eigenvalues 1 ± q exact; q = 0 identity"))
}

fn fock_vacuum() -> Outcome {
    let mut checked = 0;
    for (n, d) in EXACT_QS {
        let f = exact(n, d);
        let g = fock_cuntz_toeplitz(&f, 2, 6).map_err(|e| e.to_string())?;
        let space = g.space();
        let omega = (0..space.dim()).find(|&i| space.level(i) == 0).ok_or("no vacuum")?;
        let e0: Vec<ScalarQ> = (0..space.dim()).map(|i| if i == omega { ScalarQ::one() } else { ScalarQ::zero() }).collect();
        let mut ops = vec![
            ("t1*".to_string(), g.adjoint(0).map_err(|e| e.to_string())?),
            ("t2*".into(), g.adjoint(1).map_err(|e| e.to_string())?),
        ];
        for order in 0..=4 {
            let s = lemma2_partial_sum(&f, PartialSumSpec::new(order)).map_err(|e| e.to_string())?;
            ops.push((format!("s2^({order})*"), g.evaluate(&s.adjoint()).map_err(|e| e.to_string())?));
        }
        for (name, op) in &ops {
            ensure(op.col_exact()[omega], || format!("q = {n}/{d}: {name} Ω is not certified"))?;
            ensure(op.apply(&e0).iter().all(Coeff::is_zero), || format!("q = {n}/{d}: {name} Ω ≠ 0"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} annihilations exact on FockWords(2, 6)"))
}

fn matrix_model_with<F: Field>(f: &F, label: &str) -> Result<(f64, f64), String> {
    let pu = o_infinity_fock(f, 6, 2).map_err(|e| e.to_string())?;
    let g = build_qcun(f, &pu, 6).map_err(|e| e.to_string())?;
    let adj = |i| g.adjoint(i).map_err(|e| e.to_string());
    let (s1, s2) = (g.op(0), g.op(1));
    let id = TruncatedOperator::identity(g.space());
    let err = |e: qcuntz::spaces::SpaceError| e.to_string();
    let (a1, a2) = (adj(0)?, adj(1)?);
    let residuals = [
        a1.compose(s1).and_then(|x| x.sub(&id)).map_err(err)?,
        a2.compose(s2).and_then(|x| x.sub(&id)).map_err(err)?,
        a1.compose(s2).and_then(|x| x.sub(&s2.compose(&a1)?.scale(&f.q()))).map_err(err)?,
    ];
    let depth = residuals.iter().map(TruncatedOperator::valid_depth).min().unwrap_or(-1);
    ensure(depth >= 0, || format!("{label}: no certified column"))?;
    let rel = residuals.iter().map(|r| max_on(r, depth)).fold(0.0, f64::max);
    ensure(rel <= CLOSED_FORM_TOL, || format!("{label}: relation residual {rel:.3e}"))?;
    let cun = build_cun(f, &pu, 6).map_err(|e| e.to_string())?;
    let (t1, t2) = lemma1_generators(f).map_err(|e| e.to_string())?;
    let mut bridge: f64 = 0.0;
    for (p, want) in [(t1, cun.op(0)), (t2, cun.op(1))] {
        let diff = g.evaluate(&p).map_err(|e| e.to_string())?.sub(want).map_err(err)?;
        ensure(diff.valid_depth() >= 0, || format!("{label}: bridge has no certified column"))?;
        bridge = bridge.max(max_on(&diff, diff.valid_depth()));
    }
    ensure(bridge <= MODEL_TOL, || format!("{label}: bridge residual {bridge:.3e}"))?;
    passed(&qcun_suite(f, 6, 2, 6, CLOSED_FORM_TOL, MODEL_TOL).map_err(|e| e.to_string())?)?;
    Ok((rel, bridge))
}

fn matrix_model() -> Outcome {
    let (a, b) = matrix_model_with(&exact(1, 2), "exact q = 1/2")?;
    let (c, d) = matrix_model_with(&FloatField::new(Complex64::new(0.5, 0.0)), "float q = 0.5")?;
    let (e, g) = matrix_model_with(&FloatField::new(Complex64::new(0.9, 0.0)), "float q = 0.9")?;
    Ok(format!("k = 6, L = 6; relation residuals {:.1e}, bridge residuals {:.1e}", a.max(c).max(e), b.max(d).max(g)))
}

fn wildness() -> Outcome {
    let patterns: [&[(i64, i64)]; 4] = [&[(3, 5), (4, 5)], &[(4, 5), (3, 5)], &[(3, 5), (3, 5), (4, 5)], &[(4, 5)]];
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [GaussQ::one(), GaussQ::from_parts((3, 5), (4, 5))] {
        let f = ExactField::new(q.clone());
        for pattern in patterns {
            let label = format!("q = {}, C pattern {pattern:?}", f.describe_q());
            let values: Vec<ScalarQ> = pattern.iter().map(|&(n, d)| ScalarQ::ratio(n, d)).collect();
            let pt = cuntz_dyadic(&f, 5).map_err(|e| e.to_string())?;
            let c = TruncatedOperator::diagonal(
                pt.space(),
                (0..pt.space().dim()).map(|i| values[i % values.len()].clone()).collect(),
            )
            .map_err(|e| e.to_string())?;
            let g = build_wild_rep(&f, &pt, &c, 6).map_err(|e| e.to_string())?;
            let (s1, s2) = (g.op(0), g.op(1));
            let id = TruncatedOperator::identity(g.space());
            let err = |e: qcuntz::spaces::SpaceError| e.to_string();
            let s2s1 = s2.compose(s1).map_err(err)?;
            let s1s2 = s1.compose(s2).map_err(err)?;
            let residuals = [
                g.adjoint(1).map_err(|e| e.to_string())?.compose(s2).and_then(|x| x.sub(&id)).map_err(err)?,
                s2s1.sub(&s1s2.scale(&f.q())).map_err(err)?,
            ];
            let depth = residuals.iter().map(TruncatedOperator::valid_depth).min().unwrap_or(-1);
            ensure(depth >= 0, || format!("{label}: no certified column"))?;
            let rel = residuals.iter().map(|r| max_on(r, depth)).fold(0.0, f64::max);
            ensure(rel <= CLOSED_FORM_TOL, || format!("{label}: relation residual {rel:.3e}"))?;
            let safe = s2s1.valid_depth().min(s1s2.valid_depth());
            let space = g.space();
            for _ in 0..8 {
                let x: Vec<ScalarQ> = (0..space.dim())
                    .map(|i| {
                        if space.level(i) as i64 <= safe {
                            ScalarQ::ratio(rng.random_range(-8..=8), 8)
                        } else {
                            ScalarQ::zero()
                        }
                    })
                    .collect();
                let nx = norm(&x);
                if nx == 0.0 {
                    continue;
                }
                let n21 = norm(&s2s1.apply(&x));
                let n12 = norm(&s1s2.apply(&x));
                let modulus = q.to_complex().norm();
                worst = worst.max((n21 / nx - 1.0).abs()).max((n21 - modulus * n12).abs());
            }
            ensure(worst <= CLOSED_FORM_TOL, || format!("{label}: norm ratio error {worst:.3e}"))?;
            passed(&wild_suite(&f, 5, 6, &values, 4, 11, CLOSED_FORM_TOL).map_err(|e| e.to_string())?)?;
        }
    }
    Ok(format!("2 values of q × 4 patterns, L = 5, M = 6; worst norm ratio error {worst:.1e}"))
}

fn random_flat(rng: &mut ChaCha8Rng, n: usize) -> TruncatedOperator<ScalarQ> {
    let m = qcuntz::spaces::SparseMatrix::from_triplets(
        n,
        n,
        (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .map(|(r, c)| (r, c, ScalarQ::ratio(rng.random_range(-4..=4), 4)))
            .collect::<Vec<_>>(),
    );
    TruncatedOperator::exact(GradedSpace::flat(n), m, 0, 0).expect("flat")
}

/// Direct commutation residual of a transported operator against every
/// target generator and adjoint.
fn transported_commutes(lambda: &TruncatedOperator<ScalarQ>, target: &GeneratorSet<ScalarQ>) -> Result<(), String> {
    for (name, t) in target.all_with_adjoints().map_err(|e| e.to_string())? {
        let d = lambda.compose(&t).and_then(|a| a.sub(&t.compose(lambda)?)).map_err(|e| e.to_string())?;
        ensure(d.valid_depth() >= 0 && max_on(&d, d.valid_depth()) == 0.0, || {
            format!("transported Λ does not commute with {name}")
        })?;
    }
    Ok(())
}

fn transport() -> Outcome {
    let f = ExactField::new(GaussQ::from_parts((3, 5), (4, 5)));
    let mut total = 0;
    for (functor, samples, seed) in [(Functor::Cun, 7, 101), (Functor::FreeProduct, 7, 202), (Functor::Wild, 6, 303)] {
        let rep = transport_suite(&f, functor, samples, seed, CLOSED_FORM_TOL).map_err(|e| e.to_string())?;
        passed(&rep)?;
        total += rep.items.iter().filter(|i| i.name.contains("implies transported")).count();
    }
    ensure(total == 20, || format!("{total} samples transported"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let pu = o_infinity_fock(&f, 2, 2).map_err(|e| e.to_string())?.ampliate(2);
    let target = build_cun(&f, &pu, 3).map_err(|e| e.to_string())?;
    let (_, inner) = pu.space().factors().ok_or("not a tensor space")?;
    let source = Intertwining::of_set(&pu).map_err(|e| e.to_string())?;
    let goal = Intertwining::of_set(&target).map_err(|e| e.to_string())?;
    for _ in 0..3 {
        let lambda = random_flat(&mut rng, 2).tensor(&TruncatedOperator::identity(&std::sync::Arc::new(inner.clone())));
        let t = intertwiner_transport(&lambda, Functor::Cun, &source, &goal, CLOSED_FORM_TOL).map_err(|e| e.to_string())?;
        transported_commutes(&t.operator, &target)?;
        ensure(lambda.matrix().is_zero() || !t.operator.matrix().is_zero(), || "transport killed a nonzero Λ".into())?;
    }
    Ok(format!("{total} random intertwiners across 3 functors commute exactly; transport is injective"))
}

fn random_poly(rng: &mut ChaCha8Rng, f: &ExactField, gens: u16) -> StarPolynomial<ScalarQ> {
    let mut p = StarPolynomial::zero();
    for _ in 0..rng.random_range(0..=4) {
        let c = (0..rng.random_range(0..=2))
            .fold(f.gauss(&GaussQ::from_ratio(rng.random_range(-4..=4), rng.random_range(1..=3))), |acc, _| acc * f.q());
        let len = rng.random_range(0..=5);
        let word = Word((0..len).map(|_| Letter { gen: rng.random_range(0..gens), star: rng.random_bool(0.5) }).collect());
        p.add_term(word, c);
    }
    p
}

fn rewriter_health() -> Outcome {
    let systems = [
        (Family::CuntzToeplitz2, GaussQ::zero()),
        (Family::DeformedCuntz2, GaussQ::from_ratio(1, 2)),
        (Family::DeformedCuntz2, GaussQ::from_ratio(-3, 5)),
        (Family::QCommuting2, GaussQ::from_parts((3, 5), (4, 5))),
        (Family::Cuntz2, GaussQ::zero()),
        (Family::OInfinity(3), GaussQ::zero()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (family, q) in systems {
        let f = ExactField::new(q);
        let rs = RewriteSystem::new(family, &f).map_err(|e| e.to_string())?;
        let alphabet = rs.alphabet();
        for k in 0..1000 {
            let p = random_poly(&mut rng, &f, alphabet.len() as u16);
            let n = rs.normal_form(&p);
            let fail = |what: &str| format!("{family}, sample {k}: {what} for {}", p.display(alphabet));
            ensure(rs.normal_form(&n) == n && n.terms().all(|(w, _)| rs.is_normal(w)), || fail("not idempotent"))?;
            ensure(rs.normal_form(&n.adjoint()) == rs.normal_form(&p.adjoint()), || fail("adjoint mismatch"))?;
            let text = n.display(alphabet).to_string();
            let back = parse_expression(&text, alphabet, &f).map_err(|e| fail(&e.to_string()))?;
            ensure(back == n && back.display(alphabet).to_string() == text, || fail("parse round trip"))?;
        }
    }
    Ok("1000 random polynomials for each of 6 systems".into())
}

fn detects_all(label: &str, rep: VerificationReport) -> Result<usize, String> {
    passed(&rep).map_err(|e| format!("{label}: {e}"))?;
    Ok(rep.items.len())
}

fn fault_injection_all() -> Outcome {
    let mut caught = 0;
    let tol = CLOSED_FORM_TOL;
    let half = exact(1, 2);
    let float9 = FloatField::new(Complex64::new(0.9, 0.0));
    let unit = ExactField::new(GaussQ::from_parts((3, 5), (4, 5)));
    let e = |x: qcuntz::representations::RepresentationError| x.to_string();
    let v = |x: qcuntz::verification::VerificationError| x.to_string();
    caught +=
        detects_all("Cuntz–Toeplitz Fock", fault_injection(&fock_cuntz_toeplitz(&half, 2, 4).map_err(e)?, tol).map_err(v)?)?;
    caught += detects_all("O_∞ Fock", fault_injection(&o_infinity_fock(&half, 3, 3).map_err(e)?, tol).map_err(v)?)?;
    caught += detects_all("dyadic Cuntz pair", fault_injection(&cuntz_dyadic(&half, 4).map_err(e)?, tol).map_err(v)?)?;
    caught += detects_all("deformed Fock", fault_injection(&fock_deformed(&half, 4).map_err(e)?.generators, tol).map_err(v)?)?;
    let pu = o_infinity_fock(&half, 4, 2).map_err(e)?;
    caught += detects_all("exact block model", fault_injection(&build_qcun(&half, &pu, 4).map_err(e)?, tol).map_err(v)?)?;
    caught += detects_all("Cuntz–Toeplitz block model", fault_injection(&build_cun(&half, &pu, 4).map_err(e)?, tol).map_err(v)?)?;
    let pu9 = o_infinity_fock(&float9, 4, 2).map_err(e)?;
    caught += detects_all("float block model", fault_injection(&build_qcun(&float9, &pu9, 4).map_err(e)?, tol).map_err(v)?)?;
    let pt = cuntz_dyadic(&unit, 3).map_err(e)?;
    let c =
        TruncatedOperator::diagonal(pt.space(), (0..pt.space().dim()).map(|i| ScalarQ::ratio(3 + (i % 2) as i64, 5)).collect())
            .map_err(|x| x.to_string())?;
    let wild = build_wild_rep(&unit, &pt, &c, 4).map_err(e)?;
    caught += detects_all("wild model", fault_injection(&wild, tol).map_err(v)?)?;

    let fwild = build_wild_rep(
        &FloatField::new(unit.q().to_complex()),
        &cuntz_dyadic(&FloatField::new(unit.q().to_complex()), 3).map_err(e)?,
        &c.to_complex(),
        4,
    )
    .map_err(e)?;
    let bottom = (0..fwild.space().dim()).min_by_key(|&i| fwild.space().level(i)).ok_or("empty space")?;
    let low = vec![(0..fwild.space().dim())
        .map(|i| if i == bottom { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
        .collect::<Vec<_>>()];
    passed(&isometry_norm_test(&fwild, &low, tol).map_err(v)?)?;
    let bent = fwild.with_op(1, fwild.op(1).scale(&Complex64::new(1.0 + 10.0 * tol, 0.0)));
    ensure(!isometry_norm_test(&bent, &low, tol).map_err(v)?.pass, || "isometry norm test missed a scaled S2".into())?;
    caught += 1;

    let flat = [vec![Complex64::new(1.0, 0.0); 2], vec![Complex64::new(1.0, 0.0); 2]];
    ensure(psd_check(&flat, tol).map_err(v)?.pass, || "rank-one PSD matrix rejected".into())?;
    let shifted: Vec<Vec<Complex64>> = flat
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, &x)| if i == j { x - 10.0 * tol } else { x }).collect())
        .collect();
    ensure(!psd_check(&shifted, tol).map_err(v)?.pass, || "PSD check missed a negative eigenvalue".into())?;
    caught += 1;

    let p = StarPolynomial::monomial(Complex64::new(10.0 * tol, 0.0), Word::empty());
    ensure(!polynomial_item("perturbed identity", &p, tol).pass, || "polynomial check missed a perturbation".into())?;
    caught += 1;

    let pu = o_infinity_fock(&float9, 2, 2).map_err(e)?;
    let comm = Intertwining::of_set(&pu).map_err(v)?;
    let id = TruncatedOperator::identity(pu.space());
    passed(&comm.report(&id, tol, "identity").map_err(v)?)?;
    let n = pu.space().dim();
    let hit = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).any(|(r, c)| {
        comm.report(&id.perturbed(r, c, Complex64::new(10.0 * tol, 0.0)), tol, "perturbed").map(|rep| !rep.pass).unwrap_or(false)
    });
    ensure(hit, || "intertwiner check missed every perturbation".into())?;
    caught += 1;
    Ok(format!("{caught} relation and checker perturbations detected at 10 × tolerance"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("t-pair identities", pair_identities),
        ("partial-sum identities and defect norms", partial_sums),
        ("round trip", roundtrip),
        ("Fock positivity", fock_positivity),
        ("Fock vacuum", fock_vacuum),
        ("block matrix model", matrix_model),
        ("wild construction", wildness),
        ("intertwiner transport", transport),
        ("rewriter health", rewriter_health),
        ("fault injection", fault_injection_all),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(summary) => println!("PASS {:>2} {name}: {summary} [{secs:.1}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.1}s]", k + 1);
            }
        }
    }
    println!("{} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
