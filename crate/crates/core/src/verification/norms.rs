use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::representations::GeneratorSet;
use crate::scalars::Coeff;
use crate::spaces::GradedSpace;
use crate::star_algebra::{Family, Letter, Word};

use super::report::{ReportItem, VerificationReport};
use super::VerificationError;

fn norm<C: Coeff>(x: &[C]) -> f64 {
    x.iter().map(|c| c.to_complex().norm_sqr()).sum::<f64>().sqrt()
}

/// The coefficient `q` of `s2 s1 → q s1 s2`.
fn commutation_factor<C: Coeff>(g: &GeneratorSet<C>) -> Option<Complex64> {
    let lhs = Word(vec![Letter::plain(1), Letter::plain(0)]);
    let rhs = Word(vec![Letter::plain(0), Letter::plain(1)]);
    g.relations().rules(0).into_iter().find(|(l, _)| *l == lhs).map(|(_, p)| p.coeff(&rhs).to_complex())
}

/// Largest level at which both `S2 S1` and `S1 S2` are certified.
pub fn isometry_safe_depth<C: Coeff>(g: &GeneratorSet<C>) -> Result<i64, VerificationError> {
    let a = g.op(1).compose(g.op(0))?;
    let b = g.op(0).compose(g.op(1))?;
    Ok(a.valid_depth().min(b.valid_depth()))
}

/// For q-commuting isometries: `‖S2 S1 x‖ = ‖x‖` and
/// `‖S2 S1 x‖ = |q| ‖S1 S2 x‖` for each sample vector.
pub fn isometry_norm_test<C: Coeff>(
    g: &GeneratorSet<C>,
    vectors: &[Vec<C>],
    tol: f64,
) -> Result<VerificationReport, VerificationError> {
    if g.family() != Family::QCommuting2 {
        return Err(VerificationError::FamilyMismatch { left: g.family().to_string(), right: Family::QCommuting2.to_string() });
    }
    let q = commutation_factor(g).expect("q-commuting rule").norm();
    let depth = isometry_safe_depth(g)?;
    let space = g.space();
    let a = g.op(1).compose(g.op(0))?;
    let b = g.op(0).compose(g.op(1))?;
    let mut report = VerificationReport::new("isometry norms");
    report.environment.space = Some(space.to_string());
    for (k, x) in vectors.iter().enumerate() {
        if x.len() != space.dim() {
            return Err(VerificationError::Shape(format!("vector {k} has length {}, space {}", x.len(), space.dim())));
        }
        let nx = norm(x);
        if nx == 0.0 {
            return Err(VerificationError::ZeroVector(k));
        }
        if let Some(i) = (0..x.len()).find(|&i| !x[i].is_zero() && space.level(i) as i64 > depth) {
            return Err(VerificationError::UnsafeVector { index: k, level: space.level(i), depth });
        }
        let n21 = norm(&a.apply(x));
        let n12 = norm(&b.apply(x));
        report.push(ReportItem::numeric(format!("x{k}: ‖S2 S1 x‖ / ‖x‖ = 1"), (n21 / nx - 1.0).abs(), tol).with_depth(depth));
        report
            .push(ReportItem::numeric(format!("x{k}: ‖S2 S1 x‖ = |q| ‖S1 S2 x‖"), (n21 - q * n12).abs(), tol).with_depth(depth));
    }
    Ok(report)
}

/// Seeded random nonzero vector supported on levels `≤ depth`, with
/// entries `k/8`, `|k| ≤ 8`. Empty support gives the zero vector.
pub fn random_safe_vector<C: Coeff>(space: &GradedSpace, depth: i64, seed: u64) -> Vec<C> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<C> = space
        .levels()
        .iter()
        .map(|&l| if l as i64 > depth { C::zero() } else { C::from_ratio(rng.random_range(-8..=8), 8) })
        .collect();
    if x.iter().all(Coeff::is_zero) {
        if let Some(i) = space.levels().iter().position(|&l| l as i64 <= depth) {
            x[i] = C::one();
        }
    }
    x
}
