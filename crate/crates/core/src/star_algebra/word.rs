use std::cmp::Ordering;
use std::fmt;

use super::AlgebraError;

/// Keywords of the expression language; they cannot name generators.
pub const RESERVED: [&str; 5] = ["q", "qbar", "r", "rinv", "i"];

/// A generator or its adjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u16,
    pub star: bool,
}

impl Letter {
    pub const fn plain(gen: u16) -> Letter {
        Letter { gen, star: false }
    }

    pub const fn starred(gen: u16) -> Letter {
        Letter { gen, star: true }
    }

    pub fn adjoint(self) -> Letter {
        Letter { gen: self.gen, star: !self.star }
    }
}

/// A word in the letters; the empty word is the unit.
///
/// Words order graded-lexicographically: shorter first, then letter by letter
/// with `g < g* < h < h*` for `g < h`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.adjoint()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// A word made of unstarred letters, e.g. the creation word `s_w`.
    pub fn creation(gens: &[u16]) -> Word {
        Word(gens.iter().map(|&g| Letter::plain(g)).collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Generator names of a session, indexed by `Letter::gen`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Alphabet, AlgebraError> {
        let mut out: Vec<String> = vec![];
        for n in names {
            let n = n.as_ref();
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || RESERVED.contains(&n) || out.iter().any(|m| m == n) {
                return Err(AlgebraError::BadAlphabet(n.to_string()));
            }
            out.push(n.to_string());
        }
        if out.len() > u16::MAX as usize {
            return Err(AlgebraError::BadAlphabet("too many generators".into()));
        }
        Ok(Alphabet { names: out })
    }

    /// `prefix1 … prefixk`.
    pub fn numbered(prefix: &str, k: usize) -> Alphabet {
        let names: Vec<String> = (1..=k).map(|i| format!("{prefix}{i}")).collect();
        Alphabet::new(&names).expect("numbered alphabet")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, gen: u16) -> &str {
        &self.names[gen as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<u16> {
        self.names.iter().position(|n| n == name).map(|i| i as u16)
    }

    /// Formats a word, compressing runs: `s1^3 s2 s1*^3`.
    pub fn format_word(&self, w: &Word) -> String {
        let mut parts: Vec<String> = vec![];
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == l {
                run += 1;
            }
            let mut s = self.name(l.gen).to_string();
            if l.star {
                s.push('*');
            }
            if run > 1 {
                s.push_str(&format!("^{run}"));
            }
            parts.push(s);
            i += run;
        }
        parts.join(" ")
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names.join(", "))
    }
}

/// All creation words of length `≤ max_len` over `d` generators, level-major
/// then lexicographic.
pub fn creation_words(d: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * d);
        for w in &layer {
            for g in 0..d {
                let mut v = w.0.clone();
                v.push(Letter::plain(g as u16));
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
