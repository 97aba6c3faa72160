use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::scalars::Coeff;

use super::space::{GradedSpace, InnerProduct};
use super::sparse::SparseMatrix;
use super::SpaceError;

/// Where a residual is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "region", content = "depth")]
pub enum Region {
    /// Basis vectors of level `≤ depth`; must not exceed the valid depth.
    Depth(i64),
    /// Exactly the columns certified exact by the operator's metadata.
    Certified,
}

/// Certified upper bound on a spectral norm, with a power-iteration estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormBound {
    /// `min(‖A‖_F, (‖A‖₁ ‖A‖_∞)^{1/2})`, never below the spectral norm.
    pub bound: f64,
    pub estimate: f64,
}

/// A truncated operator on a graded space.
///
/// Besides the matrix it records the level range of its entries
/// (`lower ≤ level(row) − level(col) ≤ raise`) and which columns and rows
/// agree exactly with the untruncated operator. A column is exact when the
/// truncated image of that basis vector is the true image; a row is exact
/// when the truncated row holds every nonzero entry of the true row, which
/// is what the adjoint's columns need.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedOperator<C> {
    space: Arc<GradedSpace>,
    matrix: SparseMatrix<C>,
    raise: i64,
    lower: i64,
    col_exact: Vec<bool>,
    row_exact: Vec<bool>,
}

fn same_space(a: &Arc<GradedSpace>, b: &Arc<GradedSpace>) -> Result<(), SpaceError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(SpaceError::SpaceMismatch { left: a.to_string(), right: b.to_string() })
    }
}

impl<C: Coeff> TruncatedOperator<C> {
    pub fn new(
        space: Arc<GradedSpace>,
        matrix: SparseMatrix<C>,
        raise: i64,
        lower: i64,
        col_exact: Vec<bool>,
        row_exact: Vec<bool>,
    ) -> Result<Self, SpaceError> {
        let n = space.dim();
        if matrix.nrows() != n || matrix.ncols() != n || col_exact.len() != n || row_exact.len() != n {
            return Err(SpaceError::Shape(format!("operator data does not match {space} (dimension {n})")));
        }
        for (r, c, _) in matrix.entries() {
            let diff = space.level(r) as i64 - space.level(c) as i64;
            if diff > raise || diff < lower {
                return Err(SpaceError::LevelViolation { row: r, col: c, diff, raise, lower });
            }
        }
        Ok(TruncatedOperator { space, matrix, raise, lower, col_exact, row_exact })
    }

    /// An operator whose truncation is exact everywhere.
    pub fn exact(space: Arc<GradedSpace>, matrix: SparseMatrix<C>, raise: i64, lower: i64) -> Result<Self, SpaceError> {
        let n = space.dim();
        TruncatedOperator::new(space, matrix, raise, lower, vec![true; n], vec![true; n])
    }

    pub fn identity(space: &Arc<GradedSpace>) -> Self {
        let n = space.dim();
        TruncatedOperator::exact(space.clone(), SparseMatrix::identity(n), 0, 0).expect("identity")
    }

    pub fn zero(space: &Arc<GradedSpace>) -> Self {
        let n = space.dim();
        TruncatedOperator::exact(space.clone(), SparseMatrix::zeros(n, n), 0, 0).expect("zero")
    }

    pub fn diagonal(space: &Arc<GradedSpace>, d: Vec<C>) -> Result<Self, SpaceError> {
        TruncatedOperator::exact(space.clone(), SparseMatrix::diagonal(d), 0, 0)
    }

    /// Orthogonal projection onto the levels `≤ depth`.
    pub fn safe_projection(space: &Arc<GradedSpace>, depth: i64) -> Self {
        let d = space.levels().iter().map(|&l| if l as i64 <= depth { C::one() } else { C::zero() }).collect();
        TruncatedOperator::diagonal(space, d).expect("projection")
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &SparseMatrix<C> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn raise(&self) -> i64 {
        self.raise
    }

    pub fn lower(&self) -> i64 {
        self.lower
    }

    pub fn col_exact(&self) -> &[bool] {
        &self.col_exact
    }

    pub fn row_exact(&self) -> &[bool] {
        &self.row_exact
    }

    pub fn get(&self, r: usize, c: usize) -> C {
        self.matrix.get(r, c)
    }

    /// Largest `d` such that every column of level `≤ d` is exact, capped
    /// at `L − max(raise, 0)`; `-1` when nothing is certified.
    pub fn valid_depth(&self) -> i64 {
        let top = self.space.max_level() as i64;
        let first_bad =
            (0..self.dim()).filter(|&c| !self.col_exact[c]).map(|c| self.space.level(c) as i64).min().unwrap_or(top + 1);
        (first_bad - 1).min(top - self.raise.max(0)).max(-1)
    }

    /// Columns inside the region.
    pub fn region_mask(&self, region: Region) -> Result<Vec<bool>, SpaceError> {
        match region {
            Region::Certified => Ok(self.col_exact.clone()),
            Region::Depth(d) => {
                let valid = self.valid_depth();
                if d > valid {
                    return Err(SpaceError::DepthBeyondValidity { depth: d, valid });
                }
                Ok(self.space.levels().iter().map(|&l| l as i64 <= d).collect())
            }
        }
    }

    /// Matrix with the columns outside the region zeroed.
    pub fn restricted(&self, region: Region) -> Result<SparseMatrix<C>, SpaceError> {
        let mask = self.region_mask(region)?;
        Ok(self.matrix.select_columns(|c| mask[c]))
    }

    pub fn is_zero_on(&self, region: Region) -> Result<bool, SpaceError> {
        Ok(self.restricted(region)?.is_zero())
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self, SpaceError> {
        same_space(&self.space, &other.space)?;
        let n = self.dim();
        let matrix = self.matrix.mul(&other.matrix);
        let col_exact =
            (0..n).map(|c| other.col_exact[c] && other.matrix.col(c).iter().all(|(k, _)| self.col_exact[*k])).collect();
        let mut row_exact = self.row_exact.clone();
        for (r, k, _) in self.matrix.entries() {
            if !other.row_exact[k] {
                row_exact[r] = false;
            }
        }
        Ok(TruncatedOperator {
            space: self.space.clone(),
            matrix,
            raise: self.raise + other.raise,
            lower: self.lower + other.lower,
            col_exact,
            row_exact,
        })
    }

    /// Product of a sequence, left to right.
    pub fn product(ops: &[&Self]) -> Result<Self, SpaceError> {
        let (first, rest) = ops.split_first().ok_or_else(|| SpaceError::Shape("empty product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, op| acc.compose(op))
    }

    /// Conjugate transpose; only for orthonormal bases.
    pub fn adjoint(&self) -> Result<Self, SpaceError> {
        if self.space.inner() != InnerProduct::Orthonormal {
            return Err(SpaceError::NonOrthonormal(self.space.to_string()));
        }
        Ok(TruncatedOperator {
            space: self.space.clone(),
            matrix: self.matrix.adjoint(),
            raise: -self.lower,
            lower: -self.raise,
            col_exact: self.row_exact.clone(),
            row_exact: self.col_exact.clone(),
        })
    }

    /// Kronecker product on the tensor-pair space.
    pub fn tensor(&self, other: &Self) -> Self {
        let space = GradedSpace::tensor(&self.space, &other.space);
        let matrix = self.matrix.kron(&other.matrix);
        let (na, nb) = (self.dim(), other.dim());
        let mask = |a_ok: &[bool], b_ok: &[bool], a_empty: &dyn Fn(usize) -> bool, b_empty: &dyn Fn(usize) -> bool| {
            let mut out = Vec::with_capacity(na * nb);
            for i in 0..na {
                for j in 0..nb {
                    out.push((a_ok[i] && b_ok[j]) || (a_ok[i] && a_empty(i)) || (b_ok[j] && b_empty(j)));
                }
            }
            out
        };
        let a_adj = self.matrix.adjoint();
        let b_adj = other.matrix.adjoint();
        let col_exact =
            mask(&self.col_exact, &other.col_exact, &|i| self.matrix.col(i).is_empty(), &|j| other.matrix.col(j).is_empty());
        let row_exact = mask(&self.row_exact, &other.row_exact, &|i| a_adj.col(i).is_empty(), &|j| b_adj.col(j).is_empty());
        TruncatedOperator {
            space,
            matrix,
            raise: self.raise + other.raise,
            lower: self.lower + other.lower,
            col_exact,
            row_exact,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SpaceError> {
        same_space(&self.space, &other.space)?;
        let and = |a: &[bool], b: &[bool]| a.iter().zip(b).map(|(x, y)| *x && *y).collect();
        Ok(TruncatedOperator {
            space: self.space.clone(),
            matrix: self.matrix.add(&other.matrix),
            raise: self.raise.max(other.raise),
            lower: self.lower.min(other.lower),
            col_exact: and(&self.col_exact, &other.col_exact),
            row_exact: and(&self.row_exact, &other.row_exact),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SpaceError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        TruncatedOperator { matrix: self.matrix.scale(c), ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    /// Same operator with `delta` added at `(r, c)`; metadata unchanged
    /// except for the level range.
    pub fn perturbed(&self, r: usize, c: usize, delta: C) -> Self {
        let mut out = self.clone();
        let v = out.matrix.get(r, c) + delta;
        out.matrix.set(r, c, v);
        let diff = self.space.level(r) as i64 - self.space.level(c) as i64;
        out.raise = out.raise.max(diff);
        out.lower = out.lower.min(diff);
        out
    }

    pub fn apply(&self, x: &[C]) -> Vec<C> {
        self.matrix.mul_vec(x)
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncatedOperator<D> {
        TruncatedOperator {
            space: self.space.clone(),
            matrix: self.matrix.map(f),
            raise: self.raise,
            lower: self.lower,
            col_exact: self.col_exact.clone(),
            row_exact: self.row_exact.clone(),
        }
    }

    pub fn to_complex(&self) -> TruncatedOperator<Complex64> {
        self.map(Coeff::to_complex)
    }

    /// Spectral-norm bound of the operator restricted to the region.
    pub fn residual_norm(&self, region: Region) -> Result<NormBound, SpaceError> {
        Ok(norm_bound(&self.restricted(region)?.to_complex()))
    }

    /// Coordinate-format text export with a JSON header line.
    pub fn to_matrix_market(&self) -> String {
        let header = serde_json::json!({
            "space": self.space.to_string(),
            "kind": self.space.kind(),
            "L": self.space.max_level(),
            "raise": self.raise,
            "lower": self.lower,
            "valid_depth": self.valid_depth(),
        });
        let mut out = String::from("%%MatrixMarket matrix coordinate complex general\n");
        out.push_str(&format!("% {header}\n"));
        out.push_str(&format!("{} {} {}\n", self.dim(), self.dim(), self.matrix.nnz()));
        for (r, c, v) in self.matrix.entries() {
            let z = v.to_complex();
            out.push_str(&format!("{} {} {:e} {:e}\n", r + 1, c + 1, z.re, z.im));
        }
        out
    }
}

/// Certified bound plus a deterministic power-iteration estimate.
pub fn norm_bound(m: &SparseMatrix<Complex64>) -> NormBound {
    if m.is_zero() {
        return NormBound { bound: 0.0, estimate: 0.0 };
    }
    let bound = m.frobenius().min((m.norm_one() * m.norm_inf()).sqrt());
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let n = m.ncols();
    let mut x: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let adj = m.adjoint();
    let mut estimate = 0.0;
    for _ in 0..60 {
        let nx = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nx == 0.0 {
            break;
        }
        for z in &mut x {
            *z /= nx;
        }
        let y = m.mul_vec(&x);
        estimate = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        x = adj.mul_vec(&y);
    }
    NormBound { bound, estimate: estimate.min(bound) }
}
