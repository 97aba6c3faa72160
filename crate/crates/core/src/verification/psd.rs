use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::scalars::Coeff;

use super::VerificationError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PsdOutcome {
    pub dim: usize,
    /// Smallest eigenvalue from the Hermitian eigensolver.
    pub min_eigenvalue: f64,
    /// Rigorous lower bound on the smallest eigenvalue, from the
    /// decomposition residual and the loss of orthogonality.
    pub lower_bound: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Positive semidefiniteness of a Hermitian matrix: passes when the
/// smallest eigenvalue is at least `−tol`.
pub fn psd_check<C: Coeff>(g: &[Vec<C>], tol: f64) -> Result<PsdOutcome, VerificationError> {
    let n = g.len();
    if g.iter().any(|row| row.len() != n) {
        return Err(VerificationError::Shape(format!("{n}-row matrix is not square")));
    }
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in 0..=i {
            let d = g[i][j].clone() - g[j][i].conj();
            if C::EXACT && !d.is_zero() {
                return Err(VerificationError::NotHermitian { defect: d.magnitude() });
            }
            defect = defect.max(d.magnitude());
        }
    }
    if defect > tol {
        return Err(VerificationError::NotHermitian { defect });
    }
    if n == 0 {
        return Ok(PsdOutcome { dim: 0, min_eigenvalue: f64::INFINITY, lower_bound: f64::INFINITY, tolerance: tol, pass: true });
    }
    let a = DMatrix::from_fn(n, n, |i, j| g[i][j].to_complex());
    let h = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let lam = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| Complex64::new(x, 0.0)));
    let recon = (&h - v * &lam * v.adjoint()).norm();
    let ortho = (v.adjoint() * v - DMatrix::<Complex64>::identity(n, n)).norm();
    let spread = eig.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    // Weyl: h = VΛV* + E; V is unitary up to `ortho`
    let lower_bound = min - recon - spread * ortho - defect;
    Ok(PsdOutcome { dim: n, min_eigenvalue: min, lower_bound, tolerance: tol, pass: min >= -tol })
}

/// Determinant by Gaussian elimination in the coefficient field.
pub fn determinant<C: Coeff>(m: &[Vec<C>]) -> C {
    let n = m.len();
    let mut a: Vec<Vec<C>> = m.to_vec();
    let mut det = C::one();
    for col in 0..n {
        let pivot = if C::EXACT {
            (col..n).find(|&r| !a[r][col].is_zero())
        } else {
            (col..n).max_by(|&x, &y| a[x][col].magnitude().total_cmp(&a[y][col].magnitude())).filter(|&r| !a[r][col].is_zero())
        };
        let Some(p) = pivot else { return C::zero() };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let inv = a[col][col].inv().expect("nonzero pivot");
        det = det * a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() * inv.clone();
            for c in col..n {
                let v = a[r][c].clone() - f.clone() * a[col][c].clone();
                a[r][c] = v;
            }
        }
    }
    det
}

/// Whether `λ` is an eigenvalue, decided by `det(B − λ) = 0`.
pub fn is_eigenvalue<C: Coeff>(b: &[Vec<C>], lambda: &C) -> bool {
    let shifted: Vec<Vec<C>> = b
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter().enumerate().map(|(j, x)| if i == j { x.clone() - lambda.clone() } else { x.clone() }).collect()
        })
        .collect();
    let d = determinant(&shifted);
    if C::EXACT {
        d.is_zero()
    } else {
        d.magnitude() < 1e-12
    }
}
