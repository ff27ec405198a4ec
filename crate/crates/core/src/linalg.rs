//! Dense complex matrices, plus the two factorizations the detectors need
//! (delegated to nalgebra).

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};
#[allow(unused_imports)]
use num_traits::Float;

use nalgebra::{DMatrix, DVector, Dyn};

use crate::error::check_len;
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from its columns; every column must have the same length.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            check_len(rows, col.len())?;
            for (r, &v) in col.iter().enumerate() {
                m[(r, c)] = v;
            }
        }
        Ok(m)
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [C64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, values: &[C64]) {
        for (r, &v) in values.iter().enumerate() {
            self[(r, c)] = v;
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn scaled(mut self, s: C64) -> Self {
        self.data.iter_mut().for_each(|v| *v *= s);
        self
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        check_len(self.cols, rhs.rows)?;
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[C64]) -> Result<Vec<C64>> {
        check_len(self.cols, x.len())?;
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// `self^H * x`.
    pub fn adjoint_mul_vec(&self, x: &[C64]) -> Result<Vec<C64>> {
        check_len(self.rows, x.len())?;
        let mut out = vec![ZERO; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(r)) {
                *o += a.conj() * xr;
            }
        }
        Ok(out)
    }

    /// `self^H * self`, computed on the upper triangle and mirrored.
    pub fn gram(&self) -> CMatrix {
        let n = self.cols;
        let mut g = CMatrix::zeros(n, n);
        for k in 0..self.rows {
            let row = self.row(k);
            for i in 0..n {
                let c = row[i].conj();
                if c == ZERO {
                    continue;
                }
                let g_row = &mut g.data[i * n + i..(i + 1) * n];
                for (o, &b) in g_row.iter_mut().zip(&row[i..]) {
                    *o += c * b;
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                g.data[i * n + j] = g.data[j * n + i].conj();
            }
        }
        g
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |(A^H A - I)_{ij}|`.
    pub fn unitarity_error(&self) -> f64 {
        self.gram().max_abs_diff(&CMatrix::identity(self.cols))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Cholesky factorization of a Hermitian positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    inner: nalgebra::Cholesky<C64, Dyn>,
}

impl Cholesky {
    /// Fails with [`Error::Singular`] when a pivot falls below
    /// `max_diag * eps * n`.
    pub fn new(a: &CMatrix) -> Result<Self> {
        check_square(a)?;
        let n = a.rows();
        let max_diag = (0..n).map(|i| a[(i, i)].re.abs()).fold(0.0, f64::max);
        let tol = max_diag * f64::EPSILON * n.max(1) as f64;
        let inner = nalgebra::Cholesky::new(to_dense(a)).ok_or(Error::Singular)?;
        if inner
            .l_dirty()
            .diagonal()
            .iter()
            .any(|d| d.re.is_nan() || d.re * d.re <= tol)
        {
            return Err(Error::Singular);
        }
        Ok(Self { inner })
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        check_len(self.inner.l_dirty().nrows(), b.len())?;
        Ok(self
            .inner
            .solve(&DVector::from_column_slice(b))
            .iter()
            .copied()
            .collect())
    }
}

/// Solves `a x = b` by LU with partial pivoting; pivots below
/// `max|a| * eps * n` count as singular.
pub fn lu_solve(a: &CMatrix, b: &[C64]) -> Result<Vec<C64>> {
    check_square(a)?;
    let n = a.rows();
    check_len(n, b.len())?;
    let tol = a.max_abs() * f64::EPSILON * n.max(1) as f64;
    let lu = nalgebra::LU::new(to_dense(a));
    if lu
        .u()
        .diagonal()
        .iter()
        .any(|d| d.norm().is_nan() || d.norm() <= tol)
    {
        return Err(Error::Singular);
    }
    let x = lu
        .solve(&DVector::from_column_slice(b))
        .ok_or(Error::Singular)?;
    Ok(x.iter().copied().collect())
}

/// Minimizes `|a x - b|^2 + lambda |x|^2` through a QR factorization of the
/// stacked matrix `[a; sqrt(lambda) I]`, so the conditioning is that of `a`
/// rather than of `a^H a`. Pivots below `max|R| * eps * n` count as singular.
pub fn regularized_least_squares(a: &CMatrix, b: &[C64], lambda: f64) -> Result<Vec<C64>> {
    check_len(a.rows(), b.len())?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(
            "regularization must be finite and >= 0".into(),
        ));
    }
    let (m, n) = (a.rows(), a.cols());
    let root = C64::new(lambda.sqrt(), 0.0);
    let stacked = DMatrix::from_fn(m + n, n, |r, c| {
        if r < m {
            a[(r, c)]
        } else if r - m == c {
            root
        } else {
            ZERO
        }
    });
    let rhs = DVector::from_fn(m + n, |r, _| if r < m { b[r] } else { ZERO });
    let qr = stacked.qr();
    let r = qr.r();
    let diag_max = r.diagonal().iter().map(|d| d.norm()).fold(0.0, f64::max);
    let tol = diag_max * f64::EPSILON * n.max(1) as f64;
    if r.diagonal()
        .iter()
        .any(|d| d.norm().is_nan() || d.norm() <= tol)
    {
        return Err(Error::Singular);
    }
    let qtb = qr.q().adjoint() * rhs;
    let x = r.solve_upper_triangular(&qtb).ok_or(Error::Singular)?;
    Ok(x.iter().copied().collect())
}

fn check_square(a: &CMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected: a.rows(),
            found: a.cols(),
        })
    }
}

fn to_dense(a: &CMatrix) -> DMatrix<C64> {
    DMatrix::from_row_slice(a.rows, a.cols, &a.data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample() -> CMatrix {
        CMatrix::from_fn(4, 4, |r, k| {
            let base = c((r * 3 + k) as f64 * 0.1, (r as f64 - k as f64) * 0.2);
            if r == k {
                base + c(3.0, 0.0)
            } else {
                base
            }
        })
    }

    #[test]
    fn gram_matches_adjoint_product() {
        let a = sample();
        let want = a.adjoint().matmul(&a).unwrap();
        assert!(a.gram().max_abs_diff(&want) < 1e-13);
    }

    #[test]
    fn cholesky_solves_spd_system() {
        let mut g = sample().gram();
        for i in 0..4 {
            g[(i, i)] += c(0.5, 0.0);
        }
        let b = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 2.0), c(0.5, 0.5)];
        let x = Cholesky::new(&g).unwrap().solve(&b).unwrap();
        let back = g.mul_vec(&x).unwrap();
        for (u, v) in back.iter().zip(&b) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn cholesky_rejects_semidefinite() {
        let g = CMatrix::from_fn(2, 2, |_, _| c(1.0, 0.0));
        assert_eq!(Cholesky::new(&g).unwrap_err(), Error::Singular);
    }

    #[test]
    fn lu_solves_and_detects_singularity() {
        let a = sample();
        let b = [c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 0.5)];
        let x = lu_solve(&a, &b).unwrap();
        let back = a.mul_vec(&x).unwrap();
        for (u, v) in back.iter().zip(&b) {
            assert!((u - v).norm() < 1e-12);
        }
        let mut s = CMatrix::identity(3);
        s[(2, 2)] = ZERO;
        assert_eq!(lu_solve(&s, &b[..3]).unwrap_err(), Error::Singular);
    }

    #[test]
    fn regularized_least_squares_satisfies_optimality() {
        let a = CMatrix::from_fn(5, 3, |r, k| {
            c(
                ((r + 1) * (k + 2)) as f64 * 0.3 - (r * r) as f64 * 0.1,
                (r + 2 * k * k) as f64 * 0.1,
            )
        });
        let b = [
            c(1.0, 0.0),
            c(0.0, 1.0),
            c(-1.0, 2.0),
            c(0.5, 0.5),
            c(2.0, -1.0),
        ];
        for lambda in [0.0, 0.3] {
            let x = regularized_least_squares(&a, &b, lambda).unwrap();
            let residual: Vec<C64> = a
                .mul_vec(&x)
                .unwrap()
                .iter()
                .zip(&b)
                .map(|(u, v)| u - v)
                .collect();
            let grad = a.adjoint_mul_vec(&residual).unwrap();
            for (g, xi) in grad.iter().zip(&x) {
                assert!((g + xi * lambda).norm() < 1e-12, "{lambda}");
            }
        }
        let rank_one = CMatrix::from_fn(3, 2, |_, _| c(1.0, 0.0));
        assert_eq!(
            regularized_least_squares(&rank_one, &b[..3], 0.0).unwrap_err(),
            Error::Singular
        );
        assert!(regularized_least_squares(&rank_one, &b[..3], 0.1).is_ok());
    }

    #[test]
    fn lu_rejects_zero_pivot() {
        let b = [c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0)];
        let mut s = CMatrix::identity(3);
        s[(2, 2)] = ZERO;
        assert_eq!(lu_solve(&s, &b).unwrap_err(), Error::Singular);
    }
}
