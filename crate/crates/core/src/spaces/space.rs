use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::star_algebra::creation_words;

/// Which inner product the basis carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InnerProduct {
    Orthonormal,
    /// Word vectors whose inner products are given by a Gram matrix.
    Gram,
}

/// Shape of a graded truncated space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SpaceKind {
    /// `e_1 … e_L`, level of `e_n` is `n`.
    NaturalNumbers { l: usize },
    /// Words of length `≤ l` over `d` letters; level is the length.
    FockWords { d: usize, l: usize },
    /// Kronecker product; level is the sum of the factor levels.
    TensorPair { left: Box<GradedSpace>, right: Box<GradedSpace> },
    /// `m` basis vectors, all at level 0.
    Flat { m: usize },
    /// `e_0 … e_{2^l − 1}`, level is the bit length of the index.
    Dyadic { l: usize },
}

/// An ordered basis with a level per vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GradedSpace {
    kind: SpaceKind,
    inner: InnerProduct,
    #[serde(skip)]
    labels: Vec<String>,
    #[serde(skip)]
    levels: Vec<usize>,
}

fn fock_label(w: &crate::star_algebra::Word, d: usize) -> String {
    if w.is_empty() {
        return "Ω".into();
    }
    let sep = if d > 9 { "," } else { "" };
    let idx: Vec<String> = w.letters().iter().map(|l| (l.gen + 1).to_string()).collect();
    format!("e{}", idx.join(sep))
}

impl GradedSpace {
    pub fn natural_numbers(l: usize) -> Arc<GradedSpace> {
        let labels = (1..=l).map(|n| format!("e{n}")).collect();
        let levels = (1..=l).collect();
        Arc::new(GradedSpace { kind: SpaceKind::NaturalNumbers { l }, inner: InnerProduct::Orthonormal, labels, levels })
    }

    pub fn fock_words(d: usize, l: usize) -> Arc<GradedSpace> {
        GradedSpace::fock_with(d, l, InnerProduct::Orthonormal)
    }

    pub fn fock_with(d: usize, l: usize, inner: InnerProduct) -> Arc<GradedSpace> {
        let words = creation_words(d, l);
        let labels = words.iter().map(|w| fock_label(w, d)).collect();
        let levels = words.iter().map(|w| w.len()).collect();
        Arc::new(GradedSpace { kind: SpaceKind::FockWords { d, l }, inner, labels, levels })
    }

    pub fn flat(m: usize) -> Arc<GradedSpace> {
        let labels = (1..=m).map(|n| format!("f{n}")).collect();
        Arc::new(GradedSpace { kind: SpaceKind::Flat { m }, inner: InnerProduct::Orthonormal, labels, levels: vec![0; m] })
    }

    pub fn dyadic(l: usize) -> Arc<GradedSpace> {
        let n = 1usize << l;
        let labels = (0..n).map(|k| format!("e{k}")).collect();
        let levels = (0..n).map(|k| (usize::BITS - k.leading_zeros()) as usize).collect();
        Arc::new(GradedSpace { kind: SpaceKind::Dyadic { l }, inner: InnerProduct::Orthonormal, labels, levels })
    }

    /// Basis `a ⊗ b` in Kronecker order (left index major).
    pub fn tensor(left: &GradedSpace, right: &GradedSpace) -> Arc<GradedSpace> {
        let mut labels = Vec::with_capacity(left.dim() * right.dim());
        let mut levels = Vec::with_capacity(left.dim() * right.dim());
        for (la, va) in left.labels.iter().zip(&left.levels) {
            for (lb, vb) in right.labels.iter().zip(&right.levels) {
                labels.push(format!("{la}⊗{lb}"));
                levels.push(va + vb);
            }
        }
        let inner = if left.inner == InnerProduct::Orthonormal && right.inner == InnerProduct::Orthonormal {
            InnerProduct::Orthonormal
        } else {
            InnerProduct::Gram
        };
        let kind = SpaceKind::TensorPair { left: Box::new(left.clone()), right: Box::new(right.clone()) };
        Arc::new(GradedSpace { kind, inner, labels, levels })
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn inner(&self) -> InnerProduct {
        self.inner
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> usize {
        self.levels[i]
    }

    /// Highest level present.
    pub fn max_level(&self) -> usize {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    pub fn factors(&self) -> Option<(&GradedSpace, &GradedSpace)> {
        match &self.kind {
            SpaceKind::TensorPair { left, right } => Some((left, right)),
            _ => None,
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

impl fmt::Display for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SpaceKind::NaturalNumbers { l } => write!(f, "NaturalNumbers({l})"),
            SpaceKind::FockWords { d, l } => match self.inner {
                InnerProduct::Orthonormal => write!(f, "FockWords({d}, {l})"),
                InnerProduct::Gram => write!(f, "FockWords({d}, {l}; gram)"),
            },
            SpaceKind::TensorPair { left, right } => write!(f, "{left} ⊗ {right}"),
            SpaceKind::Flat { m } => write!(f, "Flat({m})"),
            SpaceKind::Dyadic { l } => write!(f, "Dyadic({l})"),
        }
    }
}
