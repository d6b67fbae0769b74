//! Dense linear-algebra kernel.
//!
//! Matrices here are small (a few hundred rows at most), so everything is dense
//! and row-major. Rank decisions go through a single [`RankPolicy`] so that all
//! dimension reports in the crate agree with each other.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::{Error, Result};

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    /// Builds a matrix from equally long rows. `cols` is needed for the empty case.
    pub fn from_rows(cols: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(DenseMatrix { rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.len() });
            }
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        Ok(m)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// `selfᵀ · x` without materializing the transpose.
    pub fn tr_mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: x.len() });
        }
        let mut out = vec![0.0; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * xi;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &DenseMatrix, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(DenseMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: f64) -> Self {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &DenseMatrix) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(DenseMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn select_columns(&self, range: core::ops::Range<usize>) -> Self {
        let start = range.start;
        Self::from_fn(self.rows, range.len(), |i, j| self[(i, start + j)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|x| x * x).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Threshold below which a pivot counts as zero.
///
/// A pivot is negligible when it falls below `relative * max(largest, 1)`, where
/// `largest` is the largest column norm of the input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankPolicy {
    pub relative: f64,
}

impl Default for RankPolicy {
    fn default() -> Self {
        RankPolicy { relative: 1e-9 }
    }
}

impl RankPolicy {
    pub fn threshold(&self, largest: f64) -> f64 {
        self.relative * largest.max(1.0)
    }
}

/// Householder QR with column pivoting: `A·P = Q·R`.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    /// Full orthogonal factor, `rows × rows`.
    pub q: DenseMatrix,
    /// Upper trapezoidal factor of the column-permuted input.
    pub r: DenseMatrix,
    /// `perm[k]` is the original index of the k-th column of `r`.
    pub perm: Vec<usize>,
    pub rank: usize,
}

pub fn pivoted_qr(a: &DenseMatrix, policy: RankPolicy) -> PivotedQr {
    let (m, n) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut q = DenseMatrix::identity(m);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    let mut threshold = None;
    let mut v = vec![0.0; m];

    for k in 0..m.min(n) {
        // pick the remaining column with the largest residual norm
        let mut best = k;
        let mut best_norm = -1.0;
        for j in k..n {
            let s: f64 = (k..m).map(|i| r[(i, j)] * r[(i, j)]).sum();
            if s > best_norm {
                best_norm = s;
                best = j;
            }
        }
        let best_norm = libm::sqrt(best_norm);
        let tol = *threshold.get_or_insert_with(|| policy.threshold(best_norm));
        if best_norm <= tol {
            break;
        }
        if best != k {
            for i in 0..m {
                let t = r[(i, k)];
                r[(i, k)] = r[(i, best)];
                r[(i, best)] = t;
            }
            perm.swap(k, best);
        }

        let x0 = r[(k, k)];
        let alpha = if x0 >= 0.0 { -best_norm } else { best_norm };
        for i in k..m {
            v[i] = r[(i, k)];
        }
        v[k] -= alpha;
        let vnorm = libm::sqrt((k..m).map(|i| v[i] * v[i]).sum());
        if vnorm > 0.0 {
            for vi in &mut v[k..m] {
                *vi /= vnorm;
            }
            // R <- (I - 2vvᵀ) R
            for j in k..n {
                let s: f64 = (k..m).map(|i| v[i] * r[(i, j)]).sum();
                for i in k..m {
                    r[(i, j)] -= 2.0 * v[i] * s;
                }
            }
            // Q <- Q (I - 2vvᵀ)
            for i in 0..m {
                let s: f64 = (k..m).map(|l| q[(i, l)] * v[l]).sum();
                for l in k..m {
                    q[(i, l)] -= 2.0 * s * v[l];
                }
            }
        }
        for i in k + 1..m {
            r[(i, k)] = 0.0;
        }
        rank = k + 1;
    }

    PivotedQr { q, r, perm, rank }
}

pub fn rank(a: &DenseMatrix, policy: RankPolicy) -> usize {
    if a.rows() == 0 || a.cols() == 0 {
        return 0;
    }
    pivoted_qr(a, policy).rank
}

/// Orthonormal basis (as columns) of the null space of `a`.
///
/// Columns are sign-normalized: the first coordinate with magnitude above
/// `1e-10` is positive.
pub fn nullspace_basis(a: &DenseMatrix, policy: RankPolicy) -> DenseMatrix {
    let n = a.cols();
    if a.rows() == 0 {
        return DenseMatrix::identity(n);
    }
    // the row space of `a` is the range of `aᵀ`; its complement is the null space
    let qr = pivoted_qr(&a.transpose(), policy);
    let mut basis = qr.q.select_columns(qr.rank..n);
    sign_normalize_columns(&mut basis);
    basis
}

/// Orthonormal basis (as columns) of the column space of `a`.
pub fn range_basis(a: &DenseMatrix, policy: RankPolicy) -> DenseMatrix {
    if a.cols() == 0 {
        return DenseMatrix::zeros(a.rows(), 0);
    }
    let qr = pivoted_qr(a, policy);
    let mut basis = qr.q.select_columns(0..qr.rank);
    sign_normalize_columns(&mut basis);
    basis
}

pub fn sign_normalize_columns(basis: &mut DenseMatrix) {
    for j in 0..basis.cols() {
        let lead = (0..basis.rows()).map(|i| basis[(i, j)]).find(|x| x.abs() > 1e-10);
        if matches!(lead, Some(x) if x < 0.0) {
            for i in 0..basis.rows() {
                basis[(i, j)] = -basis[(i, j)];
            }
        }
    }
}

/// `max |BᵀB − I|`.
pub fn orthonormality_residual(basis: &DenseMatrix) -> f64 {
    let k = basis.cols();
    let mut worst: f64 = 0.0;
    for a in 0..k {
        for b in a..k {
            let s: f64 = (0..basis.rows()).map(|i| basis[(i, a)] * basis[(i, b)]).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((s - target).abs());
        }
    }
    worst
}

/// `P = B·Bᵀ` for a basis with orthonormal columns.
pub fn orthogonal_projector(basis: &DenseMatrix) -> Result<DenseMatrix> {
    let residual = orthonormality_residual(basis);
    if residual > 1e-10 {
        return Err(Error::NotOrthonormal { residual });
    }
    basis.matmul(&basis.transpose())
}

/// Solves `M x = rhs` for symmetric positive semidefinite `M` whose kernel is
/// spanned by `deflation`, returning the solution orthogonal to that kernel.
///
/// `rhs` must be orthogonal to the deflation vectors: the component along each
/// normalized deflation vector may not exceed `1e-9·(1 + max|rhs|)`.
pub fn deflated_solve(m: &DenseMatrix, rhs: &[f64], deflation: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.cols() });
    }
    if rhs.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: rhs.len() });
    }
    let kernel = range_basis(&DenseMatrix::from_columns(n, deflation)?, RankPolicy::default());
    let scale = 1.0 + rhs.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let along = kernel.tr_mul_vec(rhs)?;
    let residual = along.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    if residual > 1e-9 * scale {
        return Err(Error::RhsNotOrthogonal { residual });
    }

    // M + α·KKᵀ is positive definite exactly when ker M = span K
    let alpha = (0..n).fold(1.0_f64, |a, i| a.max(m[(i, i)]));
    let shifted = m.add(&kernel.matmul(&kernel.transpose())?.scale(alpha))?;
    let chol = cholesky(&shifted).ok_or(Error::SingularBeyondDeflation)?;
    let mut x = cholesky_solve(&chol, rhs);

    // remove roundoff along the kernel
    let along = kernel.tr_mul_vec(&x)?;
    let back = kernel.mul_vec(&along)?;
    for (xi, bi) in x.iter_mut().zip(back) {
        *xi -= bi;
    }
    Ok(x)
}

/// Lower-triangular Cholesky factor, or `None` if a pivot is not safely positive.
fn cholesky(a: &DenseMatrix) -> Option<DenseMatrix> {
    let n = a.rows();
    let scale = (0..n).fold(0.0_f64, |s, i| s.max(a[(i, i)].abs()));
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= 1e-12 * scale {
            return None;
        }
        let d = libm::sqrt(d);
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

fn cholesky_solve(l: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l[(i, k)] * y[k];
        }
        y[i] /= l[(i, i)];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= l[(k, i)] * y[k];
        }
        y[i] /= l[(i, i)];
    }
    y
}
