use num_complex::Complex64;

use crate::scalars::{Coeff, Field};
use crate::spaces::{GradedSpace, InnerProduct, SparseMatrix, TruncatedOperator};
use crate::star_algebra::{Family, RewriteSystem};

use super::fock::{diag_q, shift_operator};
use super::{GeneratorSet, RepresentationError};

fn require_o_infinity<C: Coeff>(pi_u: &GeneratorSet<C>, operation: &'static str) -> Result<usize, RepresentationError> {
    match pi_u.family() {
        Family::OInfinity(_) if pi_u.space().inner() == InnerProduct::Orthonormal => {}
        other => {
            return Err(RepresentationError::FamilyMismatch {
                operation,
                expected: "OInfinity(k) on an orthonormal basis",
                found: other.to_string(),
            })
        }
    }
    if pi_u.is_empty() {
        return Err(RepresentationError::InsufficientGenerators { needed: 1, available: 0 });
    }
    Ok(pi_u.len())
}

/// `Σ_{j ≤ m} E_{jm} ⊗ coeff(j, m) u_{m−j+1}` on `NaturalNumbers(L) ⊗ H_u`.
///
/// `coeff` describes the untruncated block pattern, including `m > L`; it
/// decides which rows lose entries to the truncation. Generators beyond the
/// `k` supplied ones are taken to act outside the modelled subspace of
/// `H_u`, so they cost columns but no rows.
fn block_operator<C: Coeff>(
    l: usize,
    pi_u: &GeneratorSet<C>,
    coeff: impl Fn(usize, usize) -> C,
) -> Result<TruncatedOperator<C>, RepresentationError> {
    let k = pi_u.len();
    let hu = pi_u.space();
    let nb = hu.dim();
    let space = GradedSpace::tensor(&GradedSpace::natural_numbers(l), hu);
    let n = space.dim();
    let u = pi_u.ops();
    let row_used: Vec<Vec<bool>> = u
        .iter()
        .map(|op| {
            let mut used = vec![false; nb];
            for (r, _, _) in op.matrix().entries() {
                used[r] = true;
            }
            used
        })
        .collect();
    let mut entries = vec![];
    let (mut raise, mut lower) = (i64::MIN, i64::MAX);
    for m in 1..=l {
        for j in 1..=m {
            let c = coeff(j, m);
            let i = m - j + 1;
            if c.is_zero() || i > k {
                continue;
            }
            let ui = &u[i - 1];
            raise = raise.max(j as i64 - m as i64 + ui.raise());
            lower = lower.min(j as i64 - m as i64 + ui.lower());
            for (r, cc, v) in ui.matrix().entries() {
                entries.push(((j - 1) * nb + r, (m - 1) * nb + cc, c.clone() * v.clone()));
            }
        }
    }
    if raise == i64::MIN {
        (raise, lower) = (0, 0);
    }
    let mut col = vec![true; n];
    let mut row = vec![true; n];
    for a in 1..=l {
        for y in 0..nb {
            // column (e_a, y): blocks (j, a), j ≤ a
            col[(a - 1) * nb + y] = (1..=a).all(|j| coeff(j, a).is_zero() || (a - j < k && u[a - j].col_exact()[y]));
            // row (e_a, y): blocks (a, m), m ≥ a, using u_{m−a+1} with index ≤ k
            row[(a - 1) * nb + y] = (a..a + k).all(|m| {
                let i = m - a;
                coeff(a, m).is_zero() || (u[i].row_exact()[y] && (m <= l || !row_used[i][y]))
            });
        }
    }
    let matrix = SparseMatrix::from_triplets(n, n, entries);
    Ok(TruncatedOperator::new(space, matrix, raise, lower, col, row)?)
}

fn shift_amplified<C: Coeff>(l: usize, hu: &std::sync::Arc<GradedSpace>) -> TruncatedOperator<C> {
    shift_operator::<C>(l).tensor(&TruncatedOperator::identity(hu))
}

/// The matrix model of the deformed pair built from `u_1 … u_k`:
/// `s1 = S ⊗ 1` and `s2` upper block-triangular with block `(j, j) = q^{j−1} u_1`
/// and block `(j, m) = q^{j−1} r u_{m−j+1}` for `m > j`.
pub fn build_qcun<F: Field>(
    field: &F,
    pi_u: &GeneratorSet<F::Elem>,
    l: usize,
) -> Result<GeneratorSet<F::Elem>, RepresentationError> {
    require_o_infinity(pi_u, "build_qcun")?;
    let (q, r) = (field.q(), field.r()?);
    let coeff = |j: usize, m: usize| {
        let p = (1..j).fold(F::Elem::one(), |acc, _| acc * q.clone());
        if m > j {
            p * r.clone()
        } else {
            p
        }
    };
    let s2 = block_operator(l, pi_u, coeff)?;
    let s1 = shift_amplified(l, pi_u.space());
    GeneratorSet::new(RewriteSystem::new(Family::DeformedCuntz2, field)?, vec![s1, s2], None)
}

/// The Cuntz–Toeplitz matrix model: `t1 = S ⊗ 1`, `t2` with first block row
/// `(u_1 u_2 u_3 …)`.
pub fn build_cun<F: Field>(
    field: &F,
    pi_u: &GeneratorSet<F::Elem>,
    l: usize,
) -> Result<GeneratorSet<F::Elem>, RepresentationError> {
    require_o_infinity(pi_u, "build_cun")?;
    let t2 = block_operator(l, pi_u, |j, _| if j == 1 { F::Elem::one() } else { F::Elem::zero() })?;
    let t1 = shift_amplified(l, pi_u.space());
    GeneratorSet::new(RewriteSystem::new(Family::CuntzToeplitz2, field)?, vec![t1, t2], None)
}

/// Image of a morphism of `O_∞` representations: `Λ ↦ 1 ⊗ Λ`.
pub fn functor_f_morphism<C: Coeff>(lambda: &TruncatedOperator<C>, l: usize) -> TruncatedOperator<C> {
    TruncatedOperator::identity(&GradedSpace::natural_numbers(l)).tensor(lambda)
}

/// Smallest and largest eigenvalue, after checking self-adjointness.
pub fn spectrum_range<C: Coeff>(name: &str, op: &TruncatedOperator<C>, tol: f64) -> Result<(f64, f64), RepresentationError> {
    let m = op.matrix().to_complex();
    if m.hermitian_defect() > tol {
        return Err(RepresentationError::NotHermitian(name.to_string()));
    }
    let (ev, _) = m.hermitian_eigen();
    Ok((ev.first().copied().unwrap_or(0.0), ev.last().copied().unwrap_or(0.0)))
}

/// `t_i = 1 ⊗ T_i`, `c = C1 ⊗ T1 T1* + C2 ⊗ T2 T2*` on `H_C ⊗ H_T`.
pub fn build_free_product_rep<C: Coeff>(
    c1: &TruncatedOperator<C>,
    c2: &TruncatedOperator<C>,
    pi_tilde: &GeneratorSet<C>,
    tol: f64,
) -> Result<GeneratorSet<C>, RepresentationError> {
    if pi_tilde.family() != Family::Cuntz2 {
        return Err(RepresentationError::FamilyMismatch {
            operation: "build_free_product_rep",
            expected: "Cuntz2",
            found: pi_tilde.family().to_string(),
        });
    }
    if c1.space() != c2.space() {
        return Err(RepresentationError::Invalid(format!("C1 on {} and C2 on {}", c1.space(), c2.space())));
    }
    for (name, c) in [("C1", c1), ("C2", c2)] {
        let (lo, hi) = spectrum_range(name, c, tol)?;
        if lo < -tol || hi > 1.0 + tol {
            return Err(RepresentationError::NotContraction { name: name.to_string(), min: lo, max: hi });
        }
    }
    let one = TruncatedOperator::identity(c1.space());
    let proj =
        |i: usize| -> Result<TruncatedOperator<C>, RepresentationError> { Ok(pi_tilde.op(i).compose(&pi_tilde.adjoint(i)?)?) };
    let c = c1.tensor(&proj(0)?).add(&c2.tensor(&proj(1)?))?;
    let ops = vec![one.tensor(pi_tilde.op(0)), one.tensor(pi_tilde.op(1))];
    GeneratorSet::new(pi_tilde.relations().clone(), ops, None)?.with_extra("c", c)
}

/// `(1 − C²)^{1/2}`; entrywise for diagonal `C`, spectrally otherwise.
fn complement_root<F: Field>(
    field: &F,
    c: &TruncatedOperator<F::Elem>,
) -> Result<TruncatedOperator<F::Elem>, RepresentationError> {
    let n = c.dim();
    let diagonal = c.matrix().entries().all(|(r, cc, _)| r == cc);
    if diagonal {
        let d = (0..n)
            .map(|i| {
                let x = c.get(i, i);
                field.sqrt_nonneg(&(F::Elem::one() - x.clone() * x))
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(TruncatedOperator::diagonal(c.space(), d)?);
    }
    let (ev, v) = c.matrix().to_complex().hermitian_eigen();
    let roots = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new((1.0 - ev[i] * ev[i]).max(0.0).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let dense = &v * roots * v.adjoint();
    let mut entries = vec![];
    for (r, cc, z) in SparseMatrix::from_dense(&dense).entries() {
        if z.norm() > 1e-15 {
            entries.push((r, cc, field.from_float(*z)?));
        }
    }
    let m = SparseMatrix::from_triplets(n, n, entries);
    let sp = c.space();
    let diffs = m.entries().map(|(r, cc, _)| sp.level(r) as i64 - sp.level(cc) as i64);
    let (raise, lower) = diffs.fold((0, 0), |(a, b), d| (a.max(d), b.min(d)));
    Ok(TruncatedOperator::new(sp.clone(), m, raise, lower, c.col_exact().to_vec(), c.row_exact().to_vec())?)
}

/// The wildness construction for `|q| = 1`: with `A1 = T1 C` and
/// `A2 = T2 (1 − C²)^{1/2}`, `S1 = 1 ⊗ S` and `S2 = A1 ⊗ D(q) + A2 ⊗ S D(q)`
/// on `H_T ⊗ NaturalNumbers(M)`.
pub fn build_wild_rep<F: Field>(
    field: &F,
    pi_t: &GeneratorSet<F::Elem>,
    c: &TruncatedOperator<F::Elem>,
    m: usize,
) -> Result<GeneratorSet<F::Elem>, RepresentationError> {
    if field.q_modulus_class() != 0 {
        return Err(RepresentationError::Modulus { requirement: "|q| = 1", q: field.describe_q() });
    }
    if !matches!(pi_t.family(), Family::Cuntz2 | Family::CuntzToeplitz2) {
        return Err(RepresentationError::FamilyMismatch {
            operation: "build_wild_rep",
            expected: "a Cuntz pair",
            found: pi_t.family().to_string(),
        });
    }
    if c.space() != pi_t.space() {
        return Err(RepresentationError::Invalid(format!("C lives on {}, the pair on {}", c.space(), pi_t.space())));
    }
    let (lo, hi) = spectrum_range("C", c, 1e-12)?;
    if lo <= 1e-12 || hi >= 1.0 - 1e-12 {
        return Err(RepresentationError::SpectrumBoundary { min: lo, max: hi });
    }
    let a1 = pi_t.op(0).compose(c)?;
    let a2 = pi_t.op(1).compose(&complement_root(field, c)?)?;
    let s = shift_operator::<F::Elem>(m);
    let d = diag_q(field, m);
    let s1 = TruncatedOperator::identity(pi_t.space()).tensor(&s);
    let s2 = a1.tensor(&d).add(&a2.tensor(&s.compose(&d)?))?;
    GeneratorSet::new(RewriteSystem::new(Family::QCommuting2, field)?, vec![s1, s2], None)
}
