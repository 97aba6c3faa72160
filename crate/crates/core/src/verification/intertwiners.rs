use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::representations::GeneratorSet;
use crate::scalars::Coeff;
use crate::spaces::{GradedSpace, SparseMatrix, TruncatedOperator};

use super::report::{ReportItem, VerificationReport};
use super::VerificationError;

/// Largest number of unknowns `solve_intertwiners` accepts.
pub const MAX_UNKNOWNS: usize = 4096;

type Row<C> = Vec<(usize, C)>;

/// Incremental row echelon form over sparse rows. Each stored row has its
/// pivot as smallest column and a unit pivot entry.
struct Echelon<C> {
    pivots: HashMap<usize, Row<C>>,
    threshold: f64,
}

impl<C: Coeff> Echelon<C> {
    fn new(threshold: f64) -> Self {
        Echelon { pivots: HashMap::new(), threshold }
    }

    fn negligible(&self, c: &C) -> bool {
        if C::EXACT {
            c.is_zero()
        } else {
            c.magnitude() <= self.threshold
        }
    }

    /// Reduces `row` and stores it if it is independent.
    fn insert(&mut self, mut row: Row<C>) -> bool {
        loop {
            row.retain(|(_, c)| !self.negligible(c));
            let Some(&(lead, _)) = row.first() else { return false };
            match self.pivots.get(&lead) {
                None => {
                    let inv = row[0].1.inv().expect("nonzero lead");
                    let row = row.into_iter().map(|(j, c)| (j, c * inv.clone())).collect();
                    self.pivots.insert(lead, row);
                    return true;
                }
                Some(p) => {
                    let f = row[0].1.clone();
                    row = axpy(&row, p, &f);
                }
            }
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the null space, one vector per free column.
    fn null_space(&self, n: usize) -> Vec<Vec<C>> {
        let mut pivot_cols: Vec<usize> = self.pivots.keys().copied().collect();
        pivot_cols.sort_unstable_by(|a, b| b.cmp(a));
        (0..n)
            .filter(|j| !self.pivots.contains_key(j))
            .map(|free| {
                let mut x = vec![C::zero(); n];
                x[free] = C::one();
                for &p in &pivot_cols {
                    let s = self.pivots[&p].iter().skip(1).fold(C::zero(), |acc, (j, c)| acc + c.clone() * x[*j].clone());
                    x[p] = -s;
                }
                x
            })
            .collect()
    }
}

/// `a − f·b` on sorted sparse rows.
fn axpy<C: Coeff>(a: &Row<C>, b: &Row<C>, f: &C) -> Row<C> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let kb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ka < kb {
            out.push(a[i].clone());
            i += 1;
        } else if kb < ka {
            out.push((kb, -(f.clone() * b[j].1.clone())));
            j += 1;
        } else {
            out.push((ka, a[i].1.clone() - f.clone() * b[j].1.clone()));
            i += 1;
            j += 1;
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Rank of a matrix (exact in exact mode; relative threshold otherwise).
pub fn rank<C: Coeff>(m: &SparseMatrix<C>) -> usize {
    let threshold = 1e-10 * m.max_abs().max(f64::MIN_POSITIVE);
    let mut e = Echelon::new(threshold);
    for c in 0..m.ncols() {
        e.insert(m.col(c).to_vec());
    }
    e.rank()
}

/// Solutions of the joint linear system of an intertwiner problem.
#[derive(Clone, Debug)]
pub struct IntertwinerSpace<C> {
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub basis: Vec<TruncatedOperator<C>>,
}

impl<C> IntertwinerSpace<C> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn operator_from_entries<C: Coeff>(
    space: &Arc<GradedSpace>,
    m: SparseMatrix<C>,
) -> Result<TruncatedOperator<C>, VerificationError> {
    let diffs: Vec<i64> = m.entries().map(|(r, c, _)| space.level(r) as i64 - space.level(c) as i64).collect();
    let raise = diffs.iter().copied().max().unwrap_or(0);
    let lower = diffs.iter().copied().min().unwrap_or(0);
    Ok(TruncatedOperator::exact(space.clone(), m, raise, lower)?)
}

/// All `Λ` with `Λ a = b Λ` for every listed pair `(a, b)`.
pub fn solve_linear_intertwiners<C: Coeff>(
    pairs: &[(TruncatedOperator<C>, TruncatedOperator<C>)],
    space: &Arc<GradedSpace>,
    threshold: f64,
) -> Result<IntertwinerSpace<C>, VerificationError> {
    let n = space.dim();
    let unknowns = n * n;
    if unknowns > MAX_UNKNOWNS {
        return Err(VerificationError::DimensionGuard { unknowns, limit: MAX_UNKNOWNS });
    }
    let var = |i: usize, j: usize| i * n + j;
    let mut e = Echelon::new(threshold);
    let mut equations = 0;
    for (a, b) in pairs {
        let mut b_rows: Vec<Vec<(usize, C)>> = vec![vec![]; n];
        for (r, k, v) in b.matrix().entries() {
            b_rows[r].push((k, v.clone()));
        }
        for r in 0..n {
            for c in 0..n {
                // (Λ a − b Λ)_{rc}
                let mut row: Vec<(usize, C)> = a.matrix().col(c).iter().map(|(k, v)| (var(r, *k), v.clone())).collect();
                row.extend(b_rows[r].iter().map(|(k, v)| (var(*k, c), -v.clone())));
                if row.is_empty() {
                    continue;
                }
                row.sort_by_key(|e| e.0);
                let mut merged: Row<C> = Vec::with_capacity(row.len());
                for (j, v) in row {
                    match merged.last_mut() {
                        Some((lj, lv)) if *lj == j => *lv = lv.clone() + v,
                        _ => merged.push((j, v)),
                    }
                }
                equations += 1;
                e.insert(merged);
            }
        }
    }
    let basis = e
        .null_space(unknowns)
        .into_iter()
        .map(|x| {
            // float vectors are scaled so the largest entry is 1
            let norm = if C::EXACT {
                C::one()
            } else {
                let big = x.iter().max_by(|a, b| a.magnitude().total_cmp(&b.magnitude())).cloned().unwrap_or_else(C::one);
                big.inv().unwrap_or_else(C::one)
            };
            let x = &x;
            let norm = &norm;
            let entries = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter_map(move |(i, j)| {
                let v = x[var(i, j)].clone() * norm.clone();
                (!v.is_negligible()).then_some((i, j, v))
            });
            operator_from_entries(space, SparseMatrix::from_triplets(n, n, entries))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntertwinerSpace { unknowns, equations, rank: e.rank(), basis })
}

/// Intertwiners from `ga` to `gb`: `Λ x_A = x_B Λ` for every generator and
/// adjoint. Both sets must live on the same space and family.
pub fn solve_intertwiners<C: Coeff>(
    ga: &GeneratorSet<C>,
    gb: &GeneratorSet<C>,
) -> Result<IntertwinerSpace<C>, VerificationError> {
    if ga.family() != gb.family() {
        return Err(VerificationError::FamilyMismatch { left: ga.family().to_string(), right: gb.family().to_string() });
    }
    if ga.space() != gb.space() {
        return Err(VerificationError::Shape(format!("intertwiners between {} and {}", ga.space(), gb.space())));
    }
    let a = ga.all_with_adjoints()?;
    let b = gb.all_with_adjoints()?;
    let pairs: Vec<_> = a.into_iter().zip(b).map(|((_, x), (_, y))| (x, y)).collect();
    solve_linear_intertwiners(&pairs, ga.space(), 1e-9)
}

#[derive(Clone, Debug)]
pub struct FactorCheck<C> {
    /// `‖Λ − Λ₁ ⊗ 1‖_F / ‖Λ‖_F`.
    pub relative_error: f64,
    pub pass: bool,
    pub factor: Option<TruncatedOperator<C>>,
}

/// Whether `Λ` on `A ⊗ B` is within `tol` (relative Frobenius) of some
/// `Λ₁ ⊗ 1`; `Λ₁` is the partial trace over `B` divided by `dim B`.
pub fn tensor_factor_check<C: Coeff>(lambda: &TruncatedOperator<C>, tol: f64) -> Result<FactorCheck<C>, VerificationError> {
    let space = lambda.space();
    let (left, right) = space.factors().ok_or_else(|| VerificationError::NotTensorPair(space.to_string()))?;
    let (ma, mb) = (left.dim(), right.dim());
    let weight = C::from_ratio(1, mb as i64);
    let mut entries = vec![];
    for (r, c, v) in lambda.matrix().entries() {
        let (i, j) = (r / mb, r % mb);
        let (k, l) = (c / mb, c % mb);
        if j == l {
            entries.push((i, k, v.clone() * weight.clone()));
        }
    }
    let left = Arc::new(left.clone());
    let right = Arc::new(right.clone());
    let factor = operator_from_entries(&left, SparseMatrix::from_triplets(ma, ma, entries))?;
    let rebuilt = factor.tensor(&TruncatedOperator::identity(&right));
    let diff = lambda.matrix().add(&rebuilt.matrix().neg());
    let norm = lambda.matrix().frobenius();
    let relative_error = if norm == 0.0 { 0.0 } else { diff.frobenius() / norm };
    let pass = if C::EXACT { diff.is_zero() || relative_error <= tol } else { relative_error <= tol };
    Ok(FactorCheck { relative_error, pass, factor: pass.then_some(factor) })
}

/// Which construction carries source intertwiners to target ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Functor {
    /// `Λ ↦ 1 ⊗ Λ` on `ℓ₂(ℕ) ⊗ H_u`.
    Cun,
    /// `Λ ↦ Λ ⊗ 1` on `H_C ⊗ H_T`.
    FreeProduct,
    /// `Λ ↦ Λ ⊗ 1` on `H_T ⊗ ℓ₂(ℕ)`.
    Wild,
}

/// Named operator images of two representations, matched by position.
#[derive(Clone, Debug)]
pub struct Intertwining<C> {
    pub from: Vec<(String, TruncatedOperator<C>)>,
    pub to: Vec<(String, TruncatedOperator<C>)>,
}

impl<C: Coeff> Intertwining<C> {
    /// The commutant problem for one list of operators (adjoints added).
    pub fn commutant(ops: &[(&str, &TruncatedOperator<C>)]) -> Result<Self, VerificationError> {
        let mut from = vec![];
        for (name, op) in ops {
            from.push((name.to_string(), (*op).clone()));
            from.push((format!("{name}*"), op.adjoint()?));
        }
        Ok(Intertwining { to: from.clone(), from })
    }

    pub fn between(a: &GeneratorSet<C>, b: &GeneratorSet<C>) -> Result<Self, VerificationError> {
        Ok(Intertwining { from: a.all_with_adjoints()?, to: b.all_with_adjoints()? })
    }

    pub fn of_set(g: &GeneratorSet<C>) -> Result<Self, VerificationError> {
        Intertwining::between(g, g)
    }

    /// One item per operator: `Λ x_from − x_to Λ` at the certified depth.
    pub fn report(&self, lambda: &TruncatedOperator<C>, tol: f64, suite: &str) -> Result<VerificationReport, VerificationError> {
        let mut report = VerificationReport::new(suite);
        for ((name, a), (_, b)) in self.from.iter().zip(&self.to) {
            let d = lambda.compose(a)?.sub(&b.compose(lambda)?)?;
            let depth = d.valid_depth();
            report.push(ReportItem::vanishing(format!("Λ {name} = {name} Λ"), &d, depth, tol)?);
        }
        Ok(report)
    }
}

#[derive(Clone, Debug)]
pub struct Transport<C> {
    pub operator: TruncatedOperator<C>,
    pub report: VerificationReport,
}

/// Carries a source intertwiner through a functor and checks the image
/// against the target generators. The source condition is checked first.
pub fn intertwiner_transport<C: Coeff>(
    lambda1: &TruncatedOperator<C>,
    functor: Functor,
    source: &Intertwining<C>,
    target: &Intertwining<C>,
    tol: f64,
) -> Result<Transport<C>, VerificationError> {
    let pre = source.report(lambda1, tol, "source")?;
    if let Some(bad) = pre.failures().next() {
        return Err(VerificationError::SourceNotIntertwiner { name: bad.name.clone(), residual: bad.residual });
    }
    let target_space =
        target.from.first().map(|(_, op)| op.space().clone()).ok_or_else(|| VerificationError::Shape("empty target".into()))?;
    let (left, right) = target_space.factors().ok_or_else(|| VerificationError::NotTensorPair(target_space.to_string()))?;
    let operator = match functor {
        Functor::Cun => TruncatedOperator::identity(&Arc::new(left.clone())).tensor(lambda1),
        Functor::FreeProduct | Functor::Wild => lambda1.tensor(&TruncatedOperator::identity(&Arc::new(right.clone()))),
    };
    if operator.space() != &target_space {
        return Err(VerificationError::Shape(format!(
            "transported operator lives on {}, target on {target_space}",
            operator.space()
        )));
    }
    let mut report = target.report(&operator, tol, &format!("transport through {functor:?}"))?;
    report.environment.space = Some(target_space.to_string());
    report.push(ReportItem::exact("Λ ≠ 0 implies transported Λ ≠ 0", lambda1.matrix().is_zero() == operator.matrix().is_zero()));
    Ok(Transport { operator, report })
}
