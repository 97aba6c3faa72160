use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalars::{Coeff, Field};

use super::poly::StarPolynomial;
use super::word::{Alphabet, Letter, Word};
use super::AlgebraError;

/// The relation families with a built-in rewrite system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family", content = "k")]
pub enum Family {
    /// `t_i* t_j = δ_ij` for two generators.
    CuntzToeplitz2,
    /// `s_i* s_i = 1`, `s1* s2 = q s2 s1*`.
    DeformedCuntz2,
    /// `s_i* s_i = 1`, `s2 s1 = q s1 s2`, `|q| = 1`.
    QCommuting2,
    /// Cuntz–Toeplitz plus `t1 t1* + t2 t2* = 1`.
    Cuntz2,
    /// `u_i* u_j = δ_ij` for `k` generators.
    OInfinity(u16),
}

impl Family {
    pub fn generators(&self) -> usize {
        match self {
            Family::OInfinity(k) => *k as usize,
            _ => 2,
        }
    }

    pub fn default_alphabet(&self) -> Alphabet {
        match self {
            Family::CuntzToeplitz2 | Family::Cuntz2 => Alphabet::numbered("t", 2),
            Family::DeformedCuntz2 | Family::QCommuting2 => Alphabet::numbered("s", 2),
            Family::OInfinity(k) => Alphabet::numbered("u", *k as usize),
        }
    }

    /// Families whose normal forms are spans of `s_w (s_v)*`.
    pub fn has_vacuum(&self) -> bool {
        matches!(self, Family::CuntzToeplitz2 | Family::DeformedCuntz2 | Family::OInfinity(_))
    }

    /// Whether the family's coefficients depend on `q`.
    pub fn uses_q(&self) -> bool {
        matches!(self, Family::DeformedCuntz2 | Family::QCommuting2)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::CuntzToeplitz2 => f.write_str("CuntzToeplitz2"),
            Family::DeformedCuntz2 => f.write_str("DeformedCuntz2"),
            Family::QCommuting2 => f.write_str("QCommuting2"),
            Family::Cuntz2 => f.write_str("Cuntz2"),
            Family::OInfinity(k) => write!(f, "OInfinity({k})"),
        }
    }
}

/// Which redex is contracted first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

type Rhs<C> = Vec<(C, Word)>;

/// An oriented, *-closed rule set for one [`Family`] and one field.
///
/// Besides two-letter rules, the q-commuting family carries the completion
/// rules `s2* s1^k s2 → q̄^k s1^k` and `s2* (s1*)^k s2 → q^k (s1*)^k`
/// (`k ≥ 1`), which follow from `s2 s1 = q s1 s2` when `|q| = 1` and make
/// normal forms unique.
#[derive(Clone, Debug)]
pub struct RewriteSystem<C> {
    family: Family,
    alphabet: Alphabet,
    pairs: HashMap<(Letter, Letter), Rhs<C>>,
    bridge: Option<(C, C)>,
}

const S1: Letter = Letter::plain(0);
const S1S: Letter = Letter::starred(0);
const S2: Letter = Letter::plain(1);
const S2S: Letter = Letter::starred(1);

impl<C: Coeff> RewriteSystem<C> {
    pub fn new<F: Field<Elem = C>>(family: Family, field: &F) -> Result<Self, AlgebraError> {
        let mut pairs: HashMap<(Letter, Letter), Rhs<C>> = HashMap::new();
        let mut bridge = None;
        let unit = Word::empty;
        let isometries = |pairs: &mut HashMap<(Letter, Letter), Rhs<C>>, d: usize, orthogonal: bool| {
            for i in 0..d as u16 {
                for j in 0..d as u16 {
                    let rhs = if i == j { vec![(C::one(), unit())] } else { vec![] };
                    if i == j || orthogonal {
                        pairs.insert((Letter::starred(i), Letter::plain(j)), rhs);
                    }
                }
            }
        };
        match family {
            Family::CuntzToeplitz2 | Family::OInfinity(_) => isometries(&mut pairs, family.generators(), true),
            Family::Cuntz2 => {
                isometries(&mut pairs, 2, true);
                pairs.insert((S2, S2S), vec![(C::one(), unit()), (-C::one(), Word(vec![S1, S1S]))]);
            }
            Family::DeformedCuntz2 => {
                isometries(&mut pairs, 2, false);
                pairs.insert((S1S, S2), vec![(field.q(), Word(vec![S2, S1S]))]);
                pairs.insert((S2S, S1), vec![(field.qbar(), Word(vec![S1, S2S]))]);
            }
            Family::QCommuting2 => {
                if field.q_modulus_class() != 0 {
                    return Err(AlgebraError::ModulusRequirement {
                        family: family.to_string(),
                        requirement: "|q| = 1",
                        q: field.describe_q(),
                    });
                }
                isometries(&mut pairs, 2, false);
                pairs.insert((S2, S1), vec![(field.q(), Word(vec![S1, S2]))]);
                pairs.insert((S1S, S2S), vec![(field.qbar(), Word(vec![S2S, S1S]))]);
                bridge = Some((field.qbar(), field.q()));
            }
        }
        Ok(RewriteSystem { family, alphabet: family.default_alphabet(), pairs, bridge })
    }

    /// Same rules, different generator names (same count).
    pub fn with_alphabet(mut self, alphabet: Alphabet) -> Result<Self, AlgebraError> {
        if alphabet.len() != self.alphabet.len() {
            return Err(AlgebraError::AlphabetMismatch(format!(
                "{} needs {} generators, alphabet {alphabet} has {}",
                self.family,
                self.alphabet.len(),
                alphabet.len()
            )));
        }
        self.alphabet = alphabet;
        Ok(self)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Rules as `(lhs, rhs)` polynomials; bridge rules are listed for `k ≤ kmax`.
    pub fn rules(&self, kmax: usize) -> Vec<(Word, StarPolynomial<C>)> {
        let mut out: Vec<(Word, StarPolynomial<C>)> =
            self.pairs.iter().map(|((a, b), rhs)| (Word(vec![*a, *b]), rhs_poly(rhs))).collect();
        if let Some((plain, starred)) = &self.bridge {
            for k in 1..=kmax {
                for (mid, c) in [(S1, plain), (S1S, starred)] {
                    let mut lhs = vec![S2S];
                    lhs.extend(std::iter::repeat_n(mid, k));
                    lhs.push(S2);
                    out.push((Word(lhs), StarPolynomial::monomial(pow(c, k), Word(vec![mid; k]))));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Locates a redex: `(start, len, rhs)`.
    fn find_redex(&self, w: &Word, strategy: Strategy) -> Option<(usize, usize, Rhs<C>)> {
        let l = w.letters();
        let n = l.len();
        let at = |i: usize| -> Option<(usize, usize, Rhs<C>)> {
            if i + 1 >= n {
                return None;
            }
            if let Some(rhs) = self.pairs.get(&(l[i], l[i + 1])) {
                return Some((i, 2, rhs.clone()));
            }
            let (plain, starred) = self.bridge.as_ref()?;
            if l[i] != S2S || (l[i + 1] != S1 && l[i + 1] != S1S) {
                return None;
            }
            let mid = l[i + 1];
            let mut j = i + 1;
            while j < n && l[j] == mid {
                j += 1;
            }
            if j < n && l[j] == S2 {
                let k = j - i - 1;
                let c = if mid == S1 { plain } else { starred };
                return Some((i, k + 2, vec![(pow(c, k), Word(vec![mid; k]))]));
            }
            None
        };
        match strategy {
            Strategy::Leftmost => (0..n).find_map(at),
            Strategy::Rightmost => (0..n).rev().find_map(at),
        }
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.find_redex(w, Strategy::Leftmost).is_none()
    }

    /// Exhaustive leftmost rewriting.
    pub fn normal_form(&self, p: &StarPolynomial<C>) -> StarPolynomial<C> {
        self.normal_form_with(p, Strategy::Leftmost)
    }

    /// Rewrites in rounds: every reducible term takes one step, then like
    /// terms are merged before the next round.
    pub fn normal_form_with(&self, p: &StarPolynomial<C>, strategy: Strategy) -> StarPolynomial<C> {
        let mut done = StarPolynomial::zero();
        let mut pending: BTreeMap<Word, C> = p.clone().into_terms();
        while !pending.is_empty() {
            let mut next = StarPolynomial::zero();
            for (w, c) in pending {
                match self.find_redex(&w, strategy) {
                    None => done.add_term(w, c),
                    Some((start, len, rhs)) => {
                        let l = w.letters();
                        for (k, mid) in rhs {
                            let mut v = Vec::with_capacity(l.len());
                            v.extend_from_slice(&l[..start]);
                            v.extend_from_slice(&mid.0);
                            v.extend_from_slice(&l[start + len..]);
                            next.add_term(Word(v), c.clone() * k);
                        }
                    }
                }
            }
            pending = next.into_terms();
        }
        done
    }

    /// Normal form of a product, checking the degree cap.
    pub fn product(&self, a: &StarPolynomial<C>, b: &StarPolynomial<C>, cap: usize) -> Result<StarPolynomial<C>, AlgebraError> {
        Ok(self.normal_form(&a.checked_mul(b, cap)?))
    }
}

fn rhs_poly<C: Coeff>(rhs: &Rhs<C>) -> StarPolynomial<C> {
    let mut p = StarPolynomial::zero();
    for (c, w) in rhs {
        p.add_term(w.clone(), c.clone());
    }
    p
}

fn pow<C: Coeff>(c: &C, k: usize) -> C {
    (0..k).fold(C::one(), |acc, _| acc * c.clone())
}
