use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::representations::{
    build_cun, build_free_product_rep, build_qcun, build_wild_rep, cuntz_dyadic, fock_cuntz_toeplitz, o_infinity_fock,
};
use crate::scalars::{Coeff, Field};
use crate::spaces::{GradedSpace, Region, SparseMatrix, TruncatedOperator};
use crate::star_algebra::{gram_matrix, Family, Letter, RewriteSystem, StarPolynomial, Word, DEFAULT_DEGREE_CAP};
use crate::transforms::{
    lemma1_generators, lemma2_partial_sum, partial_sum_commutation, partial_sum_commutation_closed_form, partial_sum_isometry,
    partial_sum_isometry_closed_form, roundtrip_defect, roundtrip_defect_closed_form, substituted_tilde_t2, PartialSumSpec,
};

use super::intertwiners::{intertwiner_transport, Functor, Intertwining};
use super::norms::{isometry_norm_test, isometry_safe_depth, random_safe_vector};
use super::psd::{is_eigenvalue, psd_check};
use super::relations::check_relations;
use super::report::{CheckKind, Environment, ReportItem, VerificationReport};
use super::VerificationError;

/// A polynomial that should vanish: exact zero in exact mode, largest
/// coefficient at most `tol` otherwise.
pub fn polynomial_item<C: Coeff>(name: impl Into<String>, p: &StarPolynomial<C>, tol: f64) -> ReportItem {
    let m = p.max_coeff_magnitude();
    if C::EXACT {
        let zero = p.is_zero();
        ReportItem {
            name: name.into(),
            kind: CheckKind::Exact,
            residual: m,
            exact_zero: Some(zero),
            estimate: None,
            depth: None,
            tolerance: 0.0,
            pass: zero,
            detail: None,
        }
    } else {
        ReportItem::numeric(name, m, tol)
    }
}

/// `t_i* t_j = δ_ij` for the pair built from a deformed pair, then the two
/// partial-sum identities for every order up to `max_order`.
pub fn lemma_suite<F: Field>(field: &F, max_order: usize, tol: f64) -> Result<VerificationReport, VerificationError> {
    let ds = RewriteSystem::new(Family::DeformedCuntz2, field)?;
    let (t1, t2) = lemma1_generators(field)?;
    let one = StarPolynomial::one();
    let mut report = VerificationReport::new("lemmas");
    report.environment = Environment::for_field(field).with("N", max_order as i64);
    for (name, a, b, want) in [
        ("t1* t1 = 1", &t1, &t1, one.clone()),
        ("t2* t2 = 1", &t2, &t2, one.clone()),
        ("t1* t2 = 0", &t1, &t2, StarPolynomial::zero()),
    ] {
        let got = ds.product(&a.adjoint(), b, DEFAULT_DEGREE_CAP)?;
        report.push(polynomial_item(name, &(got - want), tol));
    }
    for n in 0..=max_order {
        let spec = PartialSumSpec::new(n);
        let iso = partial_sum_isometry(field, spec)? - partial_sum_isometry_closed_form(field, spec);
        report.push(polynomial_item(format!("N={n}: s2^(N)* s2^(N) = 1 − |q|^(2N+2) t1^(N+1) (t1*)^(N+1)"), &iso, tol));
        let comm = partial_sum_commutation(field, spec)? - partial_sum_commutation_closed_form(field, spec)?;
        report.push(polynomial_item(format!("N={n}: t1* s2^(N) − q s2^(N) t1* = −q^(N+1) t1^N t̃2 (t1*)^(N+1)"), &comm, tol));
    }
    Ok(report)
}

/// Substituting the pair back into the partial sum leaves exactly the
/// remainder `−q^(N+1) s1^(N+1) s2 (s1*)^(N+1)`.
pub fn roundtrip_suite<F: Field>(field: &F, max_order: usize, tol: f64) -> Result<VerificationReport, VerificationError> {
    let mut report = VerificationReport::new("roundtrip");
    report.environment = Environment::for_field(field).with("N", max_order as i64);
    let p = StarPolynomial::word(Word(vec![Letter::plain(0), Letter::starred(0)]));
    let ds = RewriteSystem::new(Family::DeformedCuntz2, field)?;
    let want = ds.normal_form(&(&(&StarPolynomial::one() - &p) * &StarPolynomial::letter(1)));
    report.push(polynomial_item("substituted t̃2 = (1 − s1 s1*) s2", &(substituted_tilde_t2(field)? - want), tol));
    for n in 0..=max_order {
        let spec = PartialSumSpec::new(n);
        let d = roundtrip_defect(field, spec)? - roundtrip_defect_closed_form(field, spec);
        report.push(polynomial_item(format!("N={n}: s2(t1, t2) − s2 = −q^(N+1) s1^(N+1) s2 (s1*)^(N+1)"), &d, tol));
    }
    Ok(report)
}

/// Operator norms of the two partial-sum defects in a Cuntz–Toeplitz
/// matrix model, on every certified column, against `|q|^(N+1)`.
pub fn defect_norm_suite<F: Field>(field: &F, max_order: usize, slack: f64) -> Result<VerificationReport, VerificationError> {
    let level = 2 * max_order + 4;
    let pu = o_infinity_fock(field, level, 2)?;
    let g = build_cun(field, &pu, level)?;
    let mut report = VerificationReport::new("partial-sum defect norms");
    report.environment = Environment::for_field(field).with("N", max_order as i64).with("L", level as i64).with("L'", 2);
    report.environment.space = Some(g.space().to_string());
    let qn = field.q().magnitude();
    let t1s = g.adjoint(0)?;
    let id = TruncatedOperator::identity(g.space());
    for n in 0..=max_order {
        let s = lemma2_partial_sum(field, PartialSumSpec::new(n))?;
        let sop = g.evaluate(&s)?;
        let sadj = g.evaluate(&s.adjoint())?;
        let iso = sadj.compose(&sop)?.sub(&id)?;
        let comm = t1s.compose(&sop)?.sub(&sop.compose(&t1s)?.scale(&field.q()))?;
        let bound = qn.powi(n as i32 + 1) + slack;
        for (name, op) in [("s2^(N)* s2^(N) − 1", iso), ("t1* s2^(N) − q s2^(N) t1*", comm)] {
            let nb = op.residual_norm(Region::Certified)?;
            let certified = op.col_exact().iter().filter(|&&b| b).count();
            report.push(
                ReportItem::numeric(format!("N={n}: ‖{name}‖ ≤ |q|^(N+1)"), nb.bound, bound)
                    .with_detail(format!("estimate {:.3e} on {certified} certified columns", nb.estimate)),
            );
        }
    }
    Ok(report)
}

/// Hermitian and positive semidefinite Gram matrix; for real `q` the
/// `{e12, e21}` block has eigenvalues `1 ± q`; at `q = 0` it is the identity.
pub fn gram_suite<F: Field>(field: &F, level: usize, tol: f64) -> Result<VerificationReport, VerificationError> {
    let rs = RewriteSystem::new(Family::DeformedCuntz2, field)?;
    let g = gram_matrix(level, &rs)?;
    let mut report = VerificationReport::new("gram");
    report.environment = Environment::for_field(field).with("L", level as i64);
    report.push(ReportItem::exact("Gram matrix is Hermitian", g.is_hermitian()));
    let o = psd_check(&g.entries, tol)?;
    report.push(
        ReportItem::numeric("smallest eigenvalue ≥ −tol", (-o.min_eigenvalue).max(0.0), tol)
            .with_detail(format!("dim {}, λ_min {:.6e}, certified lower bound {:.6e}", o.dim, o.min_eigenvalue, o.lower_bound)),
    );
    let q = field.q();
    let real = (q.clone() - q.conj()).is_negligible();
    if level >= 2 && real {
        let w12 = g.index_of(&Word::creation(&[0, 1]));
        let w21 = g.index_of(&Word::creation(&[1, 0]));
        if let (Some(a), Some(b)) = (w12, w21) {
            let block = g.block(&[a, b]);
            report.push(ReportItem::exact(
                "1 + q is an eigenvalue of the {e12, e21} block",
                is_eigenvalue(&block, &(F::Elem::one() + q.clone())),
            ));
            report.push(ReportItem::exact(
                "1 − q is an eigenvalue of the {e12, e21} block",
                is_eigenvalue(&block, &(F::Elem::one() - q.clone())),
            ));
        }
    }
    if q.is_zero() {
        report.push(ReportItem::exact("Gram matrix at q = 0 is the identity", g.is_identity()));
    }
    Ok(report)
}

/// `P_Ω`, the projection onto the first basis vector.
fn vacuum_projection<C: Coeff>(space: &std::sync::Arc<GradedSpace>) -> TruncatedOperator<C> {
    let n = space.dim();
    let m = SparseMatrix::from_triplets(n, n, [(0, 0, C::one())]);
    TruncatedOperator::exact(space.clone(), m, 0, 0).expect("diagonal")
}

/// The vacuum of the Cuntz–Toeplitz Fock model is killed by `t_i*` and by
/// the adjoint partial sums.
pub fn fock_vacuum_suite<F: Field>(
    field: &F,
    level: usize,
    max_order: usize,
    tol: f64,
) -> Result<VerificationReport, VerificationError> {
    let g = fock_cuntz_toeplitz(field, 2, level)?;
    let p0 = vacuum_projection(g.space());
    let mut report = VerificationReport::new("fock vacuum");
    report.environment = Environment::for_field(field).with("L", level as i64).with("N", max_order as i64);
    report.environment.space = Some(g.space().to_string());
    let mut push = |name: String, op: TruncatedOperator<F::Elem>| -> Result<(), VerificationError> {
        let at = op.compose(&p0)?;
        report.push(ReportItem::vanishing(name, &at, 0, tol)?);
        Ok(())
    };
    for i in 0..2 {
        push(format!("t{}* Ω = 0", i + 1), g.adjoint(i)?)?;
    }
    for n in 0..=max_order {
        let s = lemma2_partial_sum(field, PartialSumSpec::new(n))?;
        push(format!("N={n}: s2^(N)* Ω = 0"), g.evaluate(&s.adjoint())?)?;
    }
    Ok(report)
}

/// Relations of the block model built from a Fock `O_∞` input, and the
/// match between the transformed pair and the undeformed block model.
pub fn qcun_suite<F: Field>(
    field: &F,
    k: usize,
    fock_level: usize,
    level: usize,
    tol: f64,
    bridge_tol: f64,
) -> Result<VerificationReport, VerificationError> {
    let pu = o_infinity_fock(field, k, fock_level)?;
    let g = build_qcun(field, &pu, level)?;
    let mut report = VerificationReport::new("qcun");
    report.environment = Environment::for_field(field).with("k", k as i64).with("L'", fock_level as i64).with("L", level as i64);
    report.environment.space = Some(g.space().to_string());
    report.absorb(check_relations(&g, None, tol)?);
    let cun = build_cun(field, &pu, level)?;
    let (t1p, t2p) = lemma1_generators(field)?;
    for (name, p, want) in [("t1(s) = block t1", t1p, cun.op(0)), ("t2(s) = block t2", t2p, cun.op(1))] {
        let diff = g.evaluate(&p)?.sub(want)?;
        let depth = diff.valid_depth();
        report.push(ReportItem::vanishing(name, &diff, depth, bridge_tol)?);
    }
    Ok(report)
}

fn diagonal_pattern<C: Coeff>(
    space: &std::sync::Arc<GradedSpace>,
    pattern: &[C],
) -> Result<TruncatedOperator<C>, VerificationError> {
    let values = (0..space.dim()).map(|i| pattern[i % pattern.len()].clone()).collect();
    Ok(TruncatedOperator::diagonal(space, values)?)
}

/// Relations of the q-commuting pair built from a Cuntz pair on
/// `Dyadic(level)` and a diagonal `C`, then the isometry norm identities on
/// the lowest basis vector and `samples` seeded random safe vectors.
pub fn wild_suite<F: Field>(
    field: &F,
    level: usize,
    m: usize,
    pattern: &[F::Elem],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport, VerificationError> {
    if pattern.is_empty() {
        return Err(VerificationError::Shape("empty C pattern".into()));
    }
    let pt = cuntz_dyadic(field, level)?;
    let c = diagonal_pattern(pt.space(), pattern)?;
    let g = build_wild_rep(field, &pt, &c, m)?;
    let mut report = VerificationReport::new("wild");
    report.environment = Environment::for_field(field).with("L", level as i64).with("M", m as i64);
    report.environment.seed = Some(seed);
    report.environment.space = Some(g.space().to_string());
    report.absorb(check_relations(&g, None, tol)?);
    let depth = isometry_safe_depth(&g)?;
    let space = g.space();
    let low = (0..space.dim()).min_by_key(|&i| space.level(i)).unwrap_or(0);
    let mut vectors = vec![(0..space.dim()).map(|i| if i == low { F::Elem::one() } else { F::Elem::zero() }).collect::<Vec<_>>()];
    vectors.extend((0..samples as u64).map(|j| random_safe_vector(space, depth, seed.wrapping_add(j))));
    report.absorb(isometry_norm_test(&g, &vectors, tol)?);
    Ok(report)
}

fn random_elem<C: Coeff>(rng: &mut ChaCha8Rng, den: i64) -> C {
    C::from_ratio(rng.random_range(-den..=den), den)
}

fn random_flat<C: Coeff>(rng: &mut ChaCha8Rng, n: usize, diagonal: bool) -> TruncatedOperator<C> {
    loop {
        let entries: Vec<(usize, usize, C)> = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .filter(|(r, c)| !diagonal || r == c)
            .map(|(r, c)| (r, c, random_elem(rng, 4)))
            .collect();
        let m = SparseMatrix::from_triplets(n, n, entries);
        if !m.is_zero() {
            return TruncatedOperator::exact(GradedSpace::flat(n), m, 0, 0).expect("flat operator");
        }
    }
}

/// Transports `samples` seeded random intertwiners of the source data
/// through one functor and checks each image against the target generators.
pub fn transport_suite<F: Field>(
    field: &F,
    functor: Functor,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport, VerificationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new(format!("transport through {functor:?}"));
    report.environment = Environment::for_field(field);
    report.environment.seed = Some(seed);
    let one = |s: &std::sync::Arc<GradedSpace>| TruncatedOperator::<F::Elem>::identity(s);
    let (source_space, target_set, source) = match functor {
        Functor::Cun => {
            let pu = o_infinity_fock(field, 2, 2)?.ampliate(2);
            let target = build_cun(field, &pu, 3)?;
            let source = Intertwining::of_set(&pu)?;
            (pu.space().clone(), target, source)
        }
        Functor::FreeProduct => {
            let pt = cuntz_dyadic(field, 3)?;
            let a1 = random_contraction(&mut rng, 2);
            let a2 = random_contraction(&mut rng, 2);
            let c1 = a1.tensor(&one(&GradedSpace::flat(2)));
            let c2 = a2.tensor(&one(&GradedSpace::flat(2)));
            let target = build_free_product_rep(&c1, &c2, &pt, tol)?;
            let source = Intertwining::commutant(&[("C1", &c1), ("C2", &c2)])?;
            (c1.space().clone(), target, source)
        }
        Functor::Wild => {
            let pt = cuntz_dyadic(field, 3)?;
            let amp = pt.ampliate(2);
            let pattern = [F::Elem::from_ratio(3, 5), F::Elem::from_ratio(4, 5)];
            let c0: Vec<F::Elem> = (0..pt.space().dim()).map(|_| pattern[rng.random_range(0..2)].clone()).collect();
            let c = one(&GradedSpace::flat(2)).tensor(&TruncatedOperator::diagonal(pt.space(), c0)?);
            let target = build_wild_rep(field, &amp, &c, 4)?;
            let mut source = Intertwining::of_set(&amp)?;
            let cc = Intertwining::commutant(&[("C", &c)])?;
            source.from.extend(cc.from);
            source.to.extend(cc.to);
            (amp.space().clone(), target, source)
        }
    };
    report.environment.space = Some(target_set.space().to_string());
    let (_, inner) = source_space.factors().ok_or_else(|| VerificationError::NotTensorPair(source_space.to_string()))?;
    let inner = std::sync::Arc::new(inner.clone());
    let target = Intertwining::of_set(&target_set)?;
    for j in 0..samples {
        let lambda = match functor {
            Functor::FreeProduct => random_flat(&mut rng, 2, true).tensor(&random_flat(&mut rng, 2, false)),
            _ => random_flat(&mut rng, 2, false).tensor(&one(&inner)),
        };
        let t = intertwiner_transport(&lambda, functor, &source, &target, tol)?;
        for mut item in t.report.items {
            item.name = format!("sample {j}: {}", item.name);
            report.push(item);
        }
    }
    Ok(report)
}

fn random_contraction<C: Coeff>(rng: &mut ChaCha8Rng, n: usize) -> TruncatedOperator<C> {
    let values = (0..n).map(|_| C::from_ratio(rng.random_range(0..=8), 8)).collect();
    TruncatedOperator::diagonal(&GradedSpace::flat(n), values).expect("diagonal")
}
