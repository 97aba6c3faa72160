use crate::representations::GeneratorSet;
use crate::scalars::Coeff;
use crate::spaces::{GradedSpace, SpaceError, TruncatedOperator};
use crate::star_algebra::{StarPolynomial, Word};

use super::report::{ReportItem, VerificationReport};
use super::VerificationError;

/// A defining relation as `lhs − rhs`, with its display name.
struct Relation<C> {
    name: String,
    lhs: Word,
    difference: StarPolynomial<C>,
}

fn relations<C: Coeff>(g: &GeneratorSet<C>) -> Vec<Relation<C>> {
    let alphabet = g.alphabet();
    g.relations()
        .rules(0)
        .into_iter()
        .map(|(lhs, rhs)| Relation {
            name: format!("{} = {}", alphabet.format_word(&lhs), rhs.display(alphabet)),
            difference: &StarPolynomial::word(lhs.clone()) - &rhs,
            lhs,
        })
        .collect()
}

/// One item per defining relation: the norm of `lhs − rhs` on basis vectors
/// of level `≤ depth`. Without a depth, the largest depth certified for
/// every relation is used.
pub fn check_relations<C: Coeff>(
    g: &GeneratorSet<C>,
    depth: Option<i64>,
    tol: f64,
) -> Result<VerificationReport, VerificationError> {
    let rels = relations(g);
    let residuals = rels.iter().map(|r| g.evaluate(&r.difference)).collect::<Result<Vec<_>, _>>()?;
    let valid = residuals.iter().map(TruncatedOperator::valid_depth).min().unwrap_or(-1);
    let depth = match depth {
        Some(d) if d > valid => return Err(SpaceError::DepthBeyondValidity { depth: d, valid }.into()),
        Some(d) => d,
        None => valid,
    };
    let mut report = VerificationReport::new(format!("relations of {}", g.family()));
    report.environment.space = Some(g.space().to_string());
    for (rel, op) in rels.iter().zip(&residuals) {
        report.push(ReportItem::vanishing(rel.name.clone(), op, depth, tol)?);
    }
    if depth < 0 {
        report.note("no basis vector is certified at this truncation; every item is vacuous");
    }
    Ok(report)
}

/// Perturbation of size `size` in the scalar type; `1/n` in exact mode.
pub fn perturbation<C: Coeff>(size: f64) -> C {
    let den = (1.0 / size).round().clamp(1.0, 1e18) as i64;
    C::from_ratio(1, den)
}

/// Positions whose level shift stays inside `[lower, raise]`, one row per
/// column, in order of column level.
fn candidates(space: &GradedSpace, raise: i64, lower: i64) -> Vec<(usize, usize)> {
    let mut cols: Vec<usize> = (0..space.dim()).collect();
    cols.sort_by_key(|&c| space.level(c));
    cols.into_iter()
        .filter_map(|c| {
            let lc = space.level(c) as i64;
            (0..space.dim()).find(|&r| (lower..=raise).contains(&(space.level(r) as i64 - lc))).map(|r| (r, c))
        })
        .collect()
}

/// For each defining relation, searches for a single-entry perturbation of
/// size `10 · tol` of one of the operators it involves, inside that
/// operator's level band, that makes the residual check fail. An item passes
/// when such a perturbation is found. Each letter gets its own trial budget.
pub fn fault_injection<C: Coeff>(g: &GeneratorSet<C>, tol: f64) -> Result<VerificationReport, VerificationError> {
    const MAX_TRIALS: usize = 64;
    let baseline = check_relations(g, None, tol)?;
    let depth = baseline.items.first().and_then(|i| i.depth).unwrap_or(-1);
    let delta: C = perturbation(10.0 * tol);
    let mut report = VerificationReport::new(format!("fault injection on {}", g.family()));
    report.environment.space = Some(g.space().to_string());
    for rel in relations(g) {
        let mut letters: Vec<(usize, bool)> = rel.lhs.letters().iter().map(|l| (l.gen as usize, l.star)).collect();
        letters.dedup();
        let mut found = None;
        let mut trials = 0;
        'search: for &(i, star) in &letters {
            let op = if star { g.adjoint(i)? } else { g.op(i).clone() };
            for (r, c) in candidates(g.space(), op.raise(), op.lower()).into_iter().take(MAX_TRIALS) {
                trials += 1;
                let faulty = g.perturbed(i, star, r, c, delta.clone())?;
                let res = faulty.evaluate(&rel.difference)?;
                if res.valid_depth() < depth {
                    continue;
                }
                let item = ReportItem::vanishing(rel.name.clone(), &res, depth, tol)?;
                if !item.pass {
                    found = Some((i, star, r, c, item.residual));
                    break 'search;
                }
            }
        }
        let name = format!("perturbed {}", rel.name);
        let item = match found {
            Some((i, star, r, c, residual)) => {
                let gen = format!("{}{}", g.alphabet().name(i as u16), if star { "*" } else { "" });
                ReportItem::exact(name, true).with_detail(format!(
                    "{gen} entry ({}, {}) moved by {:.1e}: residual {residual:.3e} > {tol:.1e}",
                    g.space().label(r),
                    g.space().label(c),
                    10.0 * tol
                ))
            }
            None => ReportItem::exact(name, false).with_detail(format!("no detecting perturbation in {trials} trials")),
        };
        report.push(item.with_depth(depth));
    }
    Ok(report)
}
