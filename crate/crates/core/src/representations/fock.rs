use std::collections::HashMap;
use std::sync::Arc;

use crate::scalars::{Coeff, Field};
use crate::spaces::{GradedSpace, InnerProduct, SparseMatrix, TruncatedOperator};
use crate::star_algebra::{creation_words, gram_matrix, Alphabet, Family, GramMatrix, RewriteSystem, Word};

use super::{GeneratorSet, RepresentationError};

/// `S e_n = e_{n+1}` on `NaturalNumbers(L)`; the last column is truncated.
pub fn shift_operator<C: Coeff>(l: usize) -> TruncatedOperator<C> {
    let space = GradedSpace::natural_numbers(l);
    let m = SparseMatrix::from_triplets(l, l, (0..l.saturating_sub(1)).map(|n| (n + 1, n, C::one())));
    let mut col = vec![true; l];
    if l > 0 {
        col[l - 1] = false;
    }
    TruncatedOperator::new(space, m, 1, 1, col, vec![true; l]).expect("shift levels")
}

/// `D(q) e_n = q^{n−1} e_n` on `NaturalNumbers(L)`.
pub fn diag_q<F: Field>(field: &F, l: usize) -> TruncatedOperator<F::Elem> {
    let space = GradedSpace::natural_numbers(l);
    let mut d = Vec::with_capacity(l);
    let mut p = F::Elem::one();
    for _ in 0..l {
        d.push(p.clone());
        p = p * field.q();
    }
    TruncatedOperator::diagonal(&space, d).expect("diagonal")
}

fn word_index(space: &GradedSpace, d: usize, l: usize) -> (Vec<Word>, HashMap<Word, usize>) {
    let words = creation_words(d, l);
    debug_assert_eq!(words.len(), space.dim());
    let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    (words, index)
}

/// `x_i e_w = e_{iw}`; columns of top length are truncated.
fn creation_ops<C: Coeff>(space: &Arc<GradedSpace>, d: usize, l: usize) -> Vec<TruncatedOperator<C>> {
    let (words, index) = word_index(space, d, l);
    let n = words.len();
    let col: Vec<bool> = words.iter().map(|w| w.len() < l).collect();
    (0..d as u16)
        .map(|g| {
            let entries = words.iter().enumerate().filter(|(_, w)| w.len() < l).map(|(c, w)| {
                let target = Word::creation(&[g]).concat(w);
                (index[&target], c, C::one())
            });
            let m = SparseMatrix::from_triplets(n, n, entries);
            TruncatedOperator::new(space.clone(), m, 1, 1, col.clone(), vec![true; n]).expect("creation levels")
        })
        .collect()
}

/// Creation operators on the full Fock space over `d` letters, words of
/// length `≤ L`. Two letters give the Cuntz–Toeplitz family; other counts
/// use the same relations under the `OInfinity(d)` rules, named `t1 … td`.
pub fn fock_cuntz_toeplitz<F: Field>(field: &F, d: usize, l: usize) -> Result<GeneratorSet<F::Elem>, RepresentationError> {
    if d == 0 {
        return Err(RepresentationError::Invalid("at least one generator is needed".into()));
    }
    let relations = if d == 2 {
        RewriteSystem::new(Family::CuntzToeplitz2, field)?
    } else {
        RewriteSystem::new(Family::OInfinity(d as u16), field)?.with_alphabet(Alphabet::numbered("t", d))?
    };
    let space = GradedSpace::fock_words(d, l);
    GeneratorSet::new(relations, creation_ops(&space, d, l), None)
}

/// Fock model of `u_1 … u_k` with words of length `≤ L`.
pub fn o_infinity_fock<F: Field>(field: &F, k: usize, l: usize) -> Result<GeneratorSet<F::Elem>, RepresentationError> {
    if k == 0 {
        return Err(RepresentationError::Invalid("at least one generator is needed".into()));
    }
    let relations = RewriteSystem::new(Family::OInfinity(k as u16), field)?;
    let space = GradedSpace::fock_words(k, l);
    GeneratorSet::new(relations, creation_ops(&space, k, l), None)
}

/// The Fock model of the deformed pair on the non-orthonormal word basis.
#[derive(Clone, Debug)]
pub struct FockModelQ<C> {
    pub q: C,
    pub level: usize,
    pub gram: GramMatrix<C>,
    pub generators: GeneratorSet<C>,
}

/// `s_i e_w = e_{iw}` on `FockWords(2, L)` with Gram inner product, and
/// adjoints `s1* e_{2^k 1 v} = q^k e_{2^k v}`, `s1* e_{2^k} = 0`,
/// `s2* e_{1^k 2 v} = q̄^k e_{1^k v}`, `s2* e_{1^k} = 0`.
pub fn fock_deformed<F: Field>(field: &F, l: usize) -> Result<FockModelQ<F::Elem>, RepresentationError> {
    if field.q_modulus_class() >= 0 {
        return Err(RepresentationError::Modulus { requirement: "|q| < 1", q: field.describe_q() });
    }
    let relations = RewriteSystem::new(Family::DeformedCuntz2, field)?;
    let space = GradedSpace::fock_with(2, l, InnerProduct::Gram);
    let ops = creation_ops(&space, 2, l);
    let (words, index) = word_index(&space, 2, l);
    let n = words.len();
    let factors = [field.q(), field.qbar()];
    let adjoint_ops = (0..2u16)
        .map(|g| {
            let other = 1 - g;
            let entries = words.iter().enumerate().filter_map(|(c, w)| {
                let letters = w.letters();
                let k = letters.iter().take_while(|x| x.gen == other).count();
                if k == letters.len() {
                    return None;
                }
                let mut rest = letters[..k].to_vec();
                rest.extend_from_slice(&letters[k + 1..]);
                let coeff = (0..k).fold(F::Elem::one(), |acc, _| acc * factors[g as usize].clone());
                Some((index[&Word(rest)], c, coeff))
            });
            let m = SparseMatrix::from_triplets(n, n, entries);
            let rows = words.iter().map(|w| w.len() < l).collect();
            TruncatedOperator::new(space.clone(), m, -1, -1, vec![true; n], rows).expect("annihilation levels")
        })
        .collect();
    let gram = gram_matrix(l, &relations)?;
    let generators = GeneratorSet::new(relations, ops, Some(adjoint_ops))?;
    Ok(FockModelQ { q: field.q(), level: l, gram, generators })
}

/// The permutative Cuntz pair `T1 e_n = e_{2n}`, `T2 e_n = e_{2n+1}` on
/// `Dyadic(L)`; `T1 T1* + T2 T2* = 1` holds exactly on the truncation.
pub fn cuntz_dyadic<F: Field>(field: &F, l: usize) -> Result<GeneratorSet<F::Elem>, RepresentationError> {
    let space = GradedSpace::dyadic(l);
    let n = space.dim();
    let ops = (0..2usize)
        .map(|b| {
            let entries = (0..n).filter(|k| 2 * k + b < n).map(|k| (2 * k + b, k, F::Elem::one()));
            let m = SparseMatrix::from_triplets(n, n, entries);
            let col = (0..n).map(|k| 2 * k + b < n).collect();
            TruncatedOperator::new(space.clone(), m, 1, 0, col, vec![true; n])
        })
        .collect::<Result<Vec<_>, _>>()?;
    GeneratorSet::new(RewriteSystem::new(Family::Cuntz2, field)?, ops, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{ExactField, GaussQ, ScalarQ};
    use crate::spaces::Region;
    use crate::star_algebra::{parse_expression, vacuum_expectation, StarPolynomial};

    fn exact(n: i64, d: i64) -> ExactField {
        ExactField::new(GaussQ::from_ratio(n, d))
    }

    #[test]
    fn shift_and_diagonal() {
        let f = exact(1, 2);
        let s = shift_operator::<ScalarQ>(3);
        assert_eq!(s.get(1, 0), ScalarQ::ratio(1, 1));
        assert_eq!(s.get(2, 1), ScalarQ::ratio(1, 1));
        assert_eq!(s.matrix().col(2).len(), 0);
        assert_eq!((s.raise(), s.valid_depth()), (1, 2));
        let d = diag_q(&f, 3);
        assert_eq!(d.get(2, 2), ScalarQ::ratio(1, 4));
        assert_eq!(d.valid_depth(), 3);
        assert_eq!(diag_q(&exact(1, 1), 4).matrix(), &SparseMatrix::identity(4));
        let dsq = d.compose(&s).unwrap().sub(&s.compose(&d).unwrap().scale(&f.q())).unwrap();
        assert!(dsq.is_zero_on(Region::Depth(2)).unwrap());
    }

    #[test]
    fn toeplitz_fock_relations() {
        let f = exact(0, 1);
        let g = fock_cuntz_toeplitz(&f, 2, 3).unwrap();
        let one = TruncatedOperator::identity(g.space());
        for i in 0..2 {
            for j in 0..2 {
                let p = g.adjoint(i).unwrap().compose(g.op(j)).unwrap();
                let want = if i == j { one.clone() } else { TruncatedOperator::zero(g.space()) };
                assert!(p.sub(&want).unwrap().is_zero_on(Region::Depth(2)).unwrap());
            }
        }
        // 1 − Σ t_i t_i* is the vacuum projection
        let mut sum = one.clone();
        for i in 0..2 {
            sum = sum.sub(&g.op(i).compose(&g.adjoint(i).unwrap()).unwrap()).unwrap();
        }
        let vac = TruncatedOperator::safe_projection(g.space(), 0);
        assert_eq!(sum.sub(&vac).unwrap().matrix().nnz(), 0);
        for i in 0..2 {
            assert!(g.adjoint(i).unwrap().matrix().col(0).is_empty());
        }
    }

    #[test]
    fn deformed_adjoint_examples() {
        let f = exact(1, 2);
        let m = fock_deformed(&f, 3).unwrap();
        let sp = m.generators.space().clone();
        let (e21, e2, e22) = (sp.index_of("e21").unwrap(), sp.index_of("e2").unwrap(), sp.index_of("e22").unwrap());
        let s1s = m.generators.adjoint(0).unwrap();
        assert_eq!(s1s.get(e2, e21), ScalarQ::ratio(1, 2));
        assert!(s1s.matrix().col(e22).is_empty());
        // oracle: rewriting s1* s2 s1 against the vacuum
        let rs = m.generators.relations();
        let nf = rs.normal_form(&parse_expression("s1* s2 s1", rs.alphabet(), &f).unwrap());
        assert_eq!(nf, parse_expression("q s2", rs.alphabet(), &f).unwrap());
    }

    #[test]
    fn deformed_at_zero_is_toeplitz() {
        let f = exact(0, 1);
        let m = fock_deformed(&f, 3).unwrap();
        let t = fock_cuntz_toeplitz(&f, 2, 3).unwrap();
        for i in 0..2 {
            assert_eq!(m.generators.adjoint(i).unwrap().matrix(), t.adjoint(i).unwrap().matrix());
            assert_eq!(m.generators.op(i).matrix(), t.op(i).matrix());
        }
        assert!(m.gram.is_identity());
    }

    #[test]
    fn deformed_adjoint_matches_gram() {
        // ⟨s_i* e_w, e_v⟩ = ⟨e_w, s_i e_v⟩ for |v| < L
        for (n, d) in [(1, 2), (-3, 5), (2, 3)] {
            let f = exact(n, d);
            let l = 4;
            let m = fock_deformed(&f, l).unwrap();
            let sp = m.generators.space();
            let dim = sp.dim();
            for i in 0..2 {
                let a = m.generators.op(i);
                let b = m.generators.adjoint(i).unwrap();
                for w in 0..dim {
                    for v in (0..dim).filter(|&v| sp.level(v) < l) {
                        let lhs =
                            (0..dim).fold(ScalarQ::ratio(0, 1), |acc, u| acc + b.get(u, w).conj() * m.gram.get(u, v).clone());
                        let rhs = (0..dim).fold(ScalarQ::ratio(0, 1), |acc, u| acc + m.gram.get(w, u).clone() * a.get(u, v));
                        assert_eq!(lhs, rhs, "w={w} v={v}");
                    }
                }
            }
        }
    }

    #[test]
    fn deformed_vacuum_is_annihilated() {
        let f = exact(3, 5);
        let m = fock_deformed(&f, 2).unwrap();
        for i in 0..2 {
            assert!(m.generators.adjoint(i).unwrap().matrix().col(0).is_empty());
        }
        let rs = m.generators.relations();
        let p: StarPolynomial<ScalarQ> = parse_expression("s1* s2", rs.alphabet(), &f).unwrap();
        assert_eq!(vacuum_expectation(&p, rs).unwrap(), ScalarQ::ratio(0, 1));
    }

    #[test]
    fn dyadic_pair_is_cuntz() {
        let f = exact(0, 1);
        let g = cuntz_dyadic(&f, 4).unwrap();
        let sum =
            g.op(0).compose(&g.adjoint(0).unwrap()).unwrap().add(&g.op(1).compose(&g.adjoint(1).unwrap()).unwrap()).unwrap();
        assert_eq!(sum.matrix(), &SparseMatrix::identity(16));
        assert_eq!(sum.valid_depth(), 3);
        assert_eq!(g.op(0).valid_depth(), 3);
    }
}
