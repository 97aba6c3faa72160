use crate::scalars::Coeff;

use super::poly::{StarPolynomial, DEFAULT_DEGREE_CAP};
use super::rewrite::RewriteSystem;
use super::word::{creation_words, Alphabet, Word};
use super::AlgebraError;

/// `⟨Ω, p Ω⟩`: the coefficient of the empty word in the normal form.
pub fn vacuum_expectation<C: Coeff>(p: &StarPolynomial<C>, r: &RewriteSystem<C>) -> Result<C, AlgebraError> {
    if !r.family().has_vacuum() {
        return Err(AlgebraError::UnsupportedFamily { operation: "the vacuum functional", family: r.family().to_string() });
    }
    Ok(r.normal_form(p).coeff(&Word::empty()))
}

/// Inner products of the creation-word vectors `s_w Ω`, `|w| ≤ level`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix<C> {
    pub words: Vec<Word>,
    pub entries: Vec<Vec<C>>,
}

impl<C: Coeff> GramMatrix<C> {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.entries[i][j]
    }

    pub fn is_hermitian(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let d = self.entries[i][j].clone() - self.entries[j][i].conj();
                d.is_negligible()
            })
        })
    }

    pub fn is_identity(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let e = &self.entries[i][j];
                if i == j {
                    (e.clone() - C::one()).is_negligible()
                } else {
                    e.is_negligible()
                }
            })
        })
    }

    /// Principal submatrix on the given word indices.
    pub fn block(&self, idx: &[usize]) -> Vec<Vec<C>> {
        idx.iter().map(|&i| idx.iter().map(|&j| self.entries[i][j].clone()).collect()).collect()
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.words.iter().position(|v| v == w)
    }

    pub fn to_complex(&self) -> Vec<Vec<num_complex::Complex64>> {
        self.entries.iter().map(|row| row.iter().map(Coeff::to_complex).collect()).collect()
    }

    pub fn labels(&self, alphabet: &Alphabet) -> Vec<String> {
        self.words.iter().map(|w| word_label(w, alphabet)).collect()
    }
}

/// `e_{12}` style label of a creation word; `Ω` for the empty word.
pub(crate) fn word_label(w: &Word, alphabet: &Alphabet) -> String {
    if w.is_empty() {
        return "Ω".into();
    }
    let idx: Vec<String> = w.letters().iter().map(|l| (l.gen + 1).to_string()).collect();
    format!("e{}", idx.join(if alphabet.len() > 9 { "," } else { "" }))
}

/// Gram matrix of creation words, level-major then lexicographic.
pub fn gram_matrix<C: Coeff>(level: usize, r: &RewriteSystem<C>) -> Result<GramMatrix<C>, AlgebraError> {
    if !r.family().has_vacuum() {
        return Err(AlgebraError::UnsupportedFamily { operation: "the Gram matrix", family: r.family().to_string() });
    }
    if 2 * level > DEFAULT_DEGREE_CAP {
        return Err(AlgebraError::DegreeCap { len: 2 * level, cap: DEFAULT_DEGREE_CAP });
    }
    let words = creation_words(r.family().generators(), level);
    let n = words.len();
    let mut entries = vec![vec![C::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let p = StarPolynomial::word(words[i].adjoint().concat(&words[j]));
            let v = vacuum_expectation(&p, r)?;
            entries[j][i] = v.conj();
            entries[i][j] = v;
        }
    }
    Ok(GramMatrix { words, entries })
}
