use std::sync::Arc;

use serde::Serialize;

use crate::scalars::Coeff;
use crate::spaces::{GradedSpace, InnerProduct, TruncatedOperator};
use crate::star_algebra::{Alphabet, Family, RewriteSystem, StarPolynomial};

use super::RepresentationError;

/// Truncated images of the generators of one relation family.
///
/// `ops[i]` is the image of generator `i` of the alphabet. On a Gram-weighted
/// basis the conjugate transpose is not the adjoint, so the adjoint images
/// are supplied in `adjoint_ops`. `extras` holds named operators that belong
/// to the model but not to the relation family, such as the coefficient `c`
/// of a free-product representation.
#[derive(Clone, Debug)]
pub struct GeneratorSet<C> {
    relations: RewriteSystem<C>,
    ops: Vec<TruncatedOperator<C>>,
    adjoint_ops: Option<Vec<TruncatedOperator<C>>>,
    extras: Vec<(String, TruncatedOperator<C>)>,
}

/// JSON description of a generator set; matrices are exported separately.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratorManifest {
    pub family: Family,
    pub generators: Vec<GeneratorEntry>,
    pub space: String,
    pub dim: usize,
    pub inner_product: InnerProduct,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorEntry {
    pub name: String,
    pub raise: i64,
    pub valid_depth: i64,
    pub nnz: usize,
}

impl<C: Coeff> GeneratorSet<C> {
    pub fn new(
        relations: RewriteSystem<C>,
        ops: Vec<TruncatedOperator<C>>,
        adjoint_ops: Option<Vec<TruncatedOperator<C>>>,
    ) -> Result<Self, RepresentationError> {
        let want = relations.alphabet().len();
        if ops.len() != want {
            return Err(RepresentationError::GeneratorCount {
                family: relations.family().to_string(),
                expected: want,
                found: ops.len(),
            });
        }
        let space = ops[0].space().clone();
        let gram = space.inner() == InnerProduct::Gram;
        match (&adjoint_ops, gram) {
            (Some(a), true) if a.len() == want => {}
            (None, false) => {}
            _ => {
                return Err(RepresentationError::Invalid(format!(
                    "adjoint images must be given exactly when the basis of {space} is not orthonormal"
                )))
            }
        }
        for op in ops.iter().chain(adjoint_ops.iter().flatten()) {
            if **op.space() != *space {
                return Err(RepresentationError::Invalid(format!("generators live on {} and {space}", op.space())));
            }
        }
        Ok(GeneratorSet { relations, ops, adjoint_ops, extras: vec![] })
    }

    /// Adds a named operator outside the relation family.
    pub fn with_extra(mut self, name: &str, op: TruncatedOperator<C>) -> Result<Self, RepresentationError> {
        if **op.space() != **self.space() {
            return Err(RepresentationError::Invalid(format!("{name} lives on {}, not {}", op.space(), self.space())));
        }
        self.extras.push((name.to_string(), op));
        Ok(self)
    }

    pub fn relations(&self) -> &RewriteSystem<C> {
        &self.relations
    }

    pub fn family(&self) -> Family {
        self.relations.family()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.relations.alphabet()
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        self.ops[0].space()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[TruncatedOperator<C>] {
        &self.ops
    }

    pub fn op(&self, i: usize) -> &TruncatedOperator<C> {
        &self.ops[i]
    }

    pub fn by_name(&self, name: &str) -> Option<&TruncatedOperator<C>> {
        if let Some(i) = self.alphabet().index_of(name) {
            return Some(&self.ops[i as usize]);
        }
        self.extras.iter().find(|(n, _)| n == name).map(|(_, op)| op)
    }

    pub fn extras(&self) -> &[(String, TruncatedOperator<C>)] {
        &self.extras
    }

    pub fn has_native_adjoints(&self) -> bool {
        self.adjoint_ops.is_some()
    }

    /// Adjoint image of generator `i`.
    pub fn adjoint(&self, i: usize) -> Result<TruncatedOperator<C>, RepresentationError> {
        match &self.adjoint_ops {
            Some(a) => Ok(a[i].clone()),
            None => Ok(self.ops[i].adjoint()?),
        }
    }

    /// Every generator, extra and adjoint, with display names.
    pub fn all_with_adjoints(&self) -> Result<Vec<(String, TruncatedOperator<C>)>, RepresentationError> {
        let mut out = vec![];
        for (i, op) in self.ops.iter().enumerate() {
            let name = self.alphabet().name(i as u16).to_string();
            out.push((format!("{name}*"), self.adjoint(i)?));
            out.push((name, op.clone()));
        }
        for (name, op) in &self.extras {
            out.push((format!("{name}*"), op.adjoint()?));
            out.push((name.clone(), op.clone()));
        }
        Ok(out)
    }

    /// Replaces generator `i`; used by fault injection.
    pub fn with_op(&self, i: usize, op: TruncatedOperator<C>) -> Self {
        let mut out = self.clone();
        out.ops[i] = op;
        out
    }

    /// Same set with `delta` added to one entry of generator `i` or of its
    /// adjoint image. Without native adjoints a starred perturbation is
    /// applied to the generator at the transposed position.
    pub fn perturbed(&self, i: usize, star: bool, r: usize, c: usize, delta: C) -> Result<Self, RepresentationError> {
        let mut out = self.clone();
        match (&mut out.adjoint_ops, star) {
            (Some(a), true) => a[i] = a[i].perturbed(r, c, delta),
            (None, true) => out.ops[i] = out.ops[i].perturbed(c, r, delta.conj()),
            (_, false) => out.ops[i] = out.ops[i].perturbed(r, c, delta),
        }
        Ok(out)
    }

    /// Smallest valid depth among the generators and their adjoints.
    pub fn valid_depth(&self) -> Result<i64, RepresentationError> {
        let mut d = i64::MAX;
        for i in 0..self.ops.len() {
            d = d.min(self.ops[i].valid_depth()).min(self.adjoint(i)?.valid_depth());
        }
        Ok(d)
    }

    /// The operator of a polynomial in the generators.
    pub fn evaluate(&self, p: &StarPolynomial<C>) -> Result<TruncatedOperator<C>, RepresentationError> {
        let space = self.space();
        let adjoints: Vec<TruncatedOperator<C>> = (0..self.ops.len()).map(|i| self.adjoint(i)).collect::<Result<_, _>>()?;
        let mut acc: Option<TruncatedOperator<C>> = None;
        for (w, c) in p.terms() {
            let mut term = TruncatedOperator::identity(space);
            for l in w.letters() {
                let g = l.gen as usize;
                if g >= self.ops.len() {
                    return Err(RepresentationError::Invalid(format!("generator index {g} out of range")));
                }
                let f = if l.star { &adjoints[g] } else { &self.ops[g] };
                term = term.compose(f)?;
            }
            let term = term.scale(c);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        Ok(acc.unwrap_or_else(|| TruncatedOperator::zero(space)))
    }

    /// `Flat(m) ⊗ H` with every operator acting as `1 ⊗ op`.
    pub fn ampliate(&self, m: usize) -> Self {
        let one = TruncatedOperator::identity(&GradedSpace::flat(m));
        GeneratorSet {
            relations: self.relations.clone(),
            ops: self.ops.iter().map(|op| one.tensor(op)).collect(),
            adjoint_ops: self.adjoint_ops.as_ref().map(|a| a.iter().map(|op| one.tensor(op)).collect()),
            extras: self.extras.iter().map(|(n, op)| (n.clone(), one.tensor(op))).collect(),
        }
    }

    /// `U x U*` for every operator, `U` unitary on an orthonormal basis.
    pub fn conjugate(&self, u: &TruncatedOperator<C>) -> Result<Self, RepresentationError> {
        let ut = u.adjoint()?;
        let conj =
            |op: &TruncatedOperator<C>| -> Result<TruncatedOperator<C>, RepresentationError> { Ok(u.compose(op)?.compose(&ut)?) };
        Ok(GeneratorSet {
            relations: self.relations.clone(),
            ops: self.ops.iter().map(conj).collect::<Result<_, _>>()?,
            adjoint_ops: None,
            extras: self.extras.iter().map(|(n, op)| Ok((n.clone(), conj(op)?))).collect::<Result<_, RepresentationError>>()?,
        })
    }

    pub fn manifest(&self) -> GeneratorManifest {
        let mut generators: Vec<GeneratorEntry> = self
            .ops
            .iter()
            .enumerate()
            .map(|(i, op)| GeneratorEntry {
                name: self.alphabet().name(i as u16).to_string(),
                raise: op.raise(),
                valid_depth: op.valid_depth(),
                nnz: op.matrix().nnz(),
            })
            .collect();
        generators.extend(self.extras.iter().map(|(n, op)| GeneratorEntry {
            name: n.clone(),
            raise: op.raise(),
            valid_depth: op.valid_depth(),
            nnz: op.matrix().nnz(),
        }));
        GeneratorManifest {
            family: self.family(),
            generators,
            space: self.space().to_string(),
            dim: self.space().dim(),
            inner_product: self.space().inner(),
        }
    }
}
