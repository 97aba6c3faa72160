use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::scalars::Coeff;

/// Column-major sparse matrix; each column lists `(row, value)` by row,
/// without exact zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<C> {
    nrows: usize,
    cols: Vec<Vec<(usize, C)>>,
}

impl<C: Coeff> SparseMatrix<C> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, cols: vec![vec![]; ncols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix::diagonal((0..n).map(|_| C::one()).collect())
    }

    pub fn diagonal(d: Vec<C>) -> Self {
        let n = d.len();
        let cols = d.into_iter().enumerate().map(|(i, c)| if c.is_zero() { vec![] } else { vec![(i, c)] }).collect();
        SparseMatrix { nrows: n, cols }
    }

    /// Sums duplicate entries.
    pub fn from_triplets(nrows: usize, ncols: usize, entries: impl IntoIterator<Item = (usize, usize, C)>) -> Self {
        let mut cols: Vec<Vec<(usize, C)>> = vec![vec![]; ncols];
        for (r, c, v) in entries {
            assert!(r < nrows && c < ncols, "entry ({r}, {c}) outside {nrows}×{ncols}");
            cols[c].push((r, v));
        }
        for col in &mut cols {
            *col = merge_sorted(std::mem::take(col));
        }
        SparseMatrix { nrows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn col(&self, c: usize) -> &[(usize, C)] {
        &self.cols[c]
    }

    pub fn get(&self, r: usize, c: usize) -> C {
        match self.cols[c].binary_search_by_key(&r, |e| e.0) {
            Ok(k) => self.cols[c][k].1.clone(),
            Err(_) => C::zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: C) {
        let col = &mut self.cols[c];
        match col.binary_search_by_key(&r, |e| e.0) {
            Ok(k) if v.is_zero() => {
                col.remove(k);
            }
            Ok(k) => col[k].1 = v,
            Err(_) if v.is_zero() => {}
            Err(k) => col.insert(k, (r, v)),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &C)> {
        self.cols.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols(), other.nrows, "inner dimensions differ");
        let mut acc: Vec<Option<C>> = vec![None; self.nrows];
        let mut touched: Vec<usize> = vec![];
        let cols = other
            .cols
            .iter()
            .map(|bcol| {
                for (k, b) in bcol {
                    for (r, a) in &self.cols[*k] {
                        let prod = a.clone() * b.clone();
                        match &mut acc[*r] {
                            Some(x) => *x = x.clone() + prod,
                            slot @ None => {
                                *slot = Some(prod);
                                touched.push(*r);
                            }
                        }
                    }
                }
                touched.sort_unstable();
                let mut col = Vec::with_capacity(touched.len());
                for r in touched.drain(..) {
                    let v = acc[r].take().expect("touched slot");
                    if !v.is_zero() {
                        col.push((r, v));
                    }
                }
                col
            })
            .collect();
        SparseMatrix { nrows: self.nrows, cols }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut cols: Vec<Vec<(usize, C)>> = vec![vec![]; self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                cols[*r].push((c, v.conj()));
            }
        }
        SparseMatrix { nrows: self.ncols(), cols }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (other.nrows, other.ncols());
        let mut cols = Vec::with_capacity(self.ncols() * q);
        for acol in &self.cols {
            for bcol in &other.cols {
                let mut col = Vec::with_capacity(acol.len() * bcol.len());
                for (ra, a) in acol {
                    for (rb, b) in bcol {
                        let v = a.clone() * b.clone();
                        if !v.is_zero() {
                            col.push((ra * p + rb, v));
                        }
                    }
                }
                cols.push(col);
            }
        }
        SparseMatrix { nrows: self.nrows * p, cols }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.nrows == other.nrows && self.ncols() == other.ncols(), "shape mismatch");
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut v: Vec<(usize, C)> = a.iter().chain(b.iter()).cloned().collect();
                v.sort_by_key(|e| e.0);
                merge_sorted(v)
            })
            .collect();
        SparseMatrix { nrows: self.nrows, cols }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return SparseMatrix::zeros(self.nrows, self.ncols());
        }
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, v.clone() * c.clone())).filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { nrows: self.nrows, cols }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn mul_vec(&self, x: &[C]) -> Vec<C> {
        assert_eq!(x.len(), self.ncols());
        let mut y = vec![C::zero(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            if x[c].is_zero() {
                continue;
            }
            for (r, v) in col {
                y[*r] = y[*r].clone() + v.clone() * x[c].clone();
            }
        }
        y
    }

    /// Keeps the columns where `keep` holds.
    pub fn select_columns(&self, keep: impl Fn(usize) -> bool) -> Self {
        let cols = self.cols.iter().enumerate().map(|(c, col)| if keep(c) { col.clone() } else { vec![] }).collect();
        SparseMatrix { nrows: self.nrows, cols }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> SparseMatrix<D> {
        let cols =
            self.cols.iter().map(|col| col.iter().map(|(r, v)| (*r, f(v))).filter(|(_, v)| !v.is_zero()).collect()).collect();
        SparseMatrix { nrows: self.nrows, cols }
    }

    pub fn to_complex(&self) -> SparseMatrix<Complex64> {
        self.map(Coeff::to_complex)
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::<Complex64>::zeros(self.nrows, self.ncols());
        for (r, c, v) in self.entries() {
            m[(r, c)] = v.to_complex();
        }
        m
    }

    pub fn frobenius(&self) -> f64 {
        self.entries().map(|(_, _, v)| v.to_complex().norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute column sum.
    pub fn norm_one(&self) -> f64 {
        self.cols.iter().map(|col| col.iter().map(|(_, v)| v.magnitude()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0; self.nrows];
        for (r, _, v) in self.entries() {
            rows[r] += v.magnitude();
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|(_, _, v)| v.magnitude()).fold(0.0, f64::max)
    }
}

impl SparseMatrix<Complex64> {
    /// Eigenvalues (ascending) and eigenvectors of the Hermitian part.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, DMatrix<Complex64>) {
        let a = self.to_dense();
        let h = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(a.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    /// Largest entry of `A − A*`.
    pub fn hermitian_defect(&self) -> f64 {
        self.add(&self.adjoint().neg()).max_abs()
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> SparseMatrix<Complex64> {
        let entries = (0..m.ncols()).flat_map(|c| (0..m.nrows()).map(move |r| (r, c))).filter_map(|(r, c)| {
            let v = m[(r, c)];
            (v != Complex64::new(0.0, 0.0)).then_some((r, c, v))
        });
        SparseMatrix::from_triplets(m.nrows(), m.ncols(), entries)
    }
}

fn merge_sorted<C: Coeff>(mut v: Vec<(usize, C)>) -> Vec<(usize, C)> {
    v.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, C)> = Vec::with_capacity(v.len());
    for (r, x) in v {
        match out.last_mut() {
            Some((lr, lx)) if *lr == r => *lx = lx.clone() + x,
            _ => out.push((r, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}
