use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalars::{Coeff, CoeffText};

use super::word::{Alphabet, Letter, Word};
use super::AlgebraError;

/// Default bound on word length.
pub const DEFAULT_DEGREE_CAP: usize = 64;

/// A finite sum of coefficient-weighted words. Zero coefficients are never
/// stored; terms iterate in graded-lexicographic word order.
#[derive(Clone, Debug, PartialEq)]
pub struct StarPolynomial<C> {
    terms: BTreeMap<Word, C>,
}

impl<C: Coeff> Default for StarPolynomial<C> {
    fn default() -> Self {
        StarPolynomial::zero()
    }
}

impl<C: Coeff> StarPolynomial<C> {
    pub fn zero() -> Self {
        StarPolynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        StarPolynomial::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        StarPolynomial::monomial(c, Word::empty())
    }

    pub fn monomial(c: C, w: Word) -> Self {
        let mut p = StarPolynomial::zero();
        p.add_term(w, c);
        p
    }

    pub fn word(w: Word) -> Self {
        StarPolynomial::monomial(C::one(), w)
    }

    pub fn letter(gen: u16) -> Self {
        StarPolynomial::word(Word(vec![Letter::plain(gen)]))
    }

    pub fn letter_star(gen: u16) -> Self {
        StarPolynomial::word(Word(vec![Letter::starred(gen)]))
    }

    /// Adds `c·w`, dropping the term if it cancels.
    pub fn add_term(&mut self, w: Word, c: C) {
        if c.is_negligible() {
            return;
        }
        match self.terms.remove(&w) {
            Some(old) => {
                let s = old + c;
                if !s.is_negligible() {
                    self.terms.insert(w, s);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, C> {
        self.terms
    }

    pub fn coeff(&self, w: &Word) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Same as [`StarPolynomial::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether this is the unit polynomial.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Word::empty()).is_some_and(|c| (c.clone() - C::one()).is_negligible())
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = StarPolynomial::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x.clone() * c.clone());
        }
        out
    }

    /// Word reversal with star toggling and coefficient conjugation.
    pub fn adjoint(&self) -> Self {
        let mut out = StarPolynomial::zero();
        for (w, c) in &self.terms {
            out.add_term(w.adjoint(), c.conj());
        }
        out
    }

    pub fn checked_mul(&self, other: &Self, cap: usize) -> Result<Self, AlgebraError> {
        let mut out = StarPolynomial::zero();
        for (w, a) in &self.terms {
            for (v, b) in &other.terms {
                let len = w.len() + v.len();
                if len > cap {
                    return Err(AlgebraError::DegreeCap { len, cap });
                }
                out.add_term(w.concat(v), a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    pub fn checked_pow(&self, k: u32, cap: usize) -> Result<Self, AlgebraError> {
        let mut acc = StarPolynomial::one();
        for _ in 0..k {
            acc = acc.checked_mul(self, cap)?;
        }
        Ok(acc)
    }

    /// Replaces generator `g` by `images[g]` (and `g*` by its adjoint).
    pub fn substitute(&self, images: &[StarPolynomial<C>], cap: usize) -> Result<Self, AlgebraError> {
        let adjoints: Vec<StarPolynomial<C>> = images.iter().map(|p| p.adjoint()).collect();
        let mut out = StarPolynomial::zero();
        for (w, c) in &self.terms {
            let mut acc = StarPolynomial::constant(c.clone());
            for l in w.letters() {
                let img = match (images.get(l.gen as usize), l.star) {
                    (Some(_), true) => &adjoints[l.gen as usize],
                    (Some(p), false) => p,
                    (None, _) => return Err(AlgebraError::AlphabetMismatch(format!("no image for generator {}", l.gen))),
                };
                acc = acc.checked_mul(img, cap)?;
            }
            out = out + acc;
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> StarPolynomial<D> {
        let mut out = StarPolynomial::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff_magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> PolyDisplay<'a, C> {
        PolyDisplay { poly: self, alphabet }
    }
}

impl<C: Coeff> Add for StarPolynomial<C> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (w, c) in o.terms {
            self.add_term(w, c);
        }
        self
    }
}

impl<C: Coeff> Add for &StarPolynomial<C> {
    type Output = StarPolynomial<C>;
    fn add(self, o: Self) -> StarPolynomial<C> {
        self.clone() + o.clone()
    }
}

impl<C: Coeff> Neg for StarPolynomial<C> {
    type Output = Self;
    fn neg(self) -> Self {
        let terms = self.terms.into_iter().map(|(w, c)| (w, -c)).collect();
        StarPolynomial { terms }
    }
}

impl<C: Coeff> Neg for &StarPolynomial<C> {
    type Output = StarPolynomial<C>;
    fn neg(self) -> StarPolynomial<C> {
        -self.clone()
    }
}

impl<C: Coeff> Sub for StarPolynomial<C> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<C: Coeff> Sub for &StarPolynomial<C> {
    type Output = StarPolynomial<C>;
    fn sub(self, o: Self) -> StarPolynomial<C> {
        self.clone() - o.clone()
    }
}

/// Panics when the product exceeds [`DEFAULT_DEGREE_CAP`]; use
/// [`StarPolynomial::checked_mul`] to handle that case.
impl<C: Coeff> Mul for &StarPolynomial<C> {
    type Output = StarPolynomial<C>;
    fn mul(self, o: Self) -> StarPolynomial<C> {
        self.checked_mul(o, DEFAULT_DEGREE_CAP).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<C: Coeff> Mul for StarPolynomial<C> {
    type Output = StarPolynomial<C>;
    fn mul(self, o: Self) -> StarPolynomial<C> {
        &self * &o
    }
}

/// Canonical text form; parses back to the same polynomial.
pub struct PolyDisplay<'a, C> {
    poly: &'a StarPolynomial<C>,
    alphabet: &'a Alphabet,
}

impl<C: Coeff> fmt::Display for PolyDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (idx, (w, c)) in self.poly.terms().enumerate() {
            let (negative, coeff) = match c.render() {
                CoeffText::One => (false, None),
                CoeffText::MinusOne => (true, None),
                CoeffText::Atom { negative, body } => (negative, Some(body)),
                CoeffText::Compound(s) => (false, Some(s)),
            };
            let word = self.alphabet.format_word(w);
            let body = match (coeff, word.is_empty()) {
                (None, true) => "1".to_string(),
                (None, false) => word,
                (Some(c), true) => c,
                (Some(c), false) => format!("{c} {word}"),
            };
            match (idx, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}
