//! Small column-major dense matrix used for factors, oracles and tests.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_traits::Float;

use crate::error::{Error, Result};
use crate::scalar::{RealScalar, Scalar};

/// Column-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Wraps a column-major buffer.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Mat { rows, cols, data })
    }

    /// Copies a strided column-major block out of a flat buffer.
    pub fn from_block(buf: &[T], offset: usize, rows: usize, cols: usize, ld: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| buf[offset + i + j * ld])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn col(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            for p in 0..self.cols {
                let b = rhs[(p, j)];
                if b == T::zero() {
                    continue;
                }
                let a = self.col(p);
                let c = out.col_mut(j);
                for (ci, &ai) in c.iter_mut().zip(a) {
                    *ci += ai * b;
                }
            }
        }
        out
    }

    /// `self · rhs*`, the form of every off-diagonal block.
    pub fn mul_adjoint(&self, rhs: &Mat<T>) -> Mat<T> {
        self.matmul(&rhs.adjoint())
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![T::zero(); self.rows];
        for (j, &xj) in x.iter().enumerate() {
            for (yi, &a) in y.iter_mut().zip(self.col(j)) {
                *yi += a * xj;
            }
        }
        y
    }

    pub fn sub(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn norm_fro(&self) -> T::Real {
        norm2(&self.data)
    }

    /// Copies `src` into the block starting at (`row`, `col`).
    pub fn set_block(&mut self, row: usize, col: usize, src: &Mat<T>) {
        for j in 0..src.cols {
            for i in 0..src.rows {
                self[(row + i, col + j)] = src[(i, j)];
            }
        }
    }

    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> Mat<T> {
        Mat::from_fn(rows, cols, |i, j| self[(row + i, col + j)])
    }

    /// Keeps the first `k` columns.
    pub fn truncate_cols(&mut self, k: usize) {
        assert!(k <= self.cols);
        self.cols = k;
        self.data.truncate(self.rows * k);
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline(always)]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i + j * self.rows]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    #[inline(always)]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i + j * self.rows]
    }
}

/// Euclidean norm with scaling against overflow.
pub fn norm2<T: Scalar>(x: &[T]) -> T::Real {
    let zero = <T::Real as Scalar>::zero();
    let scale = x.iter().fold(zero, |m, v| Float::max(m, v.modulus()));
    if scale == zero || !Float::is_finite(scale) {
        return scale;
    }
    let inv = <T::Real as Scalar>::one() / scale;
    let sum: T::Real = x
        .iter()
        .map(|v| {
            let s = v.modulus() * inv;
            s * s
        })
        .sum();
    scale * Float::sqrt(sum)
}

/// `‖a − b‖₂ / ‖b‖₂`, or the absolute difference when `b` vanishes.
pub fn rel_diff<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    assert_eq!(a.len(), b.len());
    let diff: Vec<T> = a.iter().zip(b).map(|(&x, &y)| x - y).collect();
    let den = norm2(b).to_f64();
    let num = norm2(&diff).to_f64();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;

    #[test]
    fn matmul_and_adjoint() {
        let a = Mat::from_fn(2, 3, |i, j| (i * 3 + j) as f64);
        let b = Mat::from_fn(3, 2, |i, j| (i + 2 * j) as f64);
        let c = a.matmul(&b);
        assert_eq!(c[(0, 0)], 0.0 * 0.0 + 1.0 * 1.0 + 2.0 * 2.0);
        assert_eq!(c[(1, 1)], 3.0 * 2.0 + 4.0 * 3.0 + 5.0 * 4.0);
        let z = Mat::from_fn(1, 1, |_, _| C64::new(0.0, 1.0));
        assert_eq!(z.adjoint()[(0, 0)], C64::new(0.0, -1.0));
    }

    #[test]
    fn norm2_scales() {
        assert_eq!(norm2(&[3.0f64, 4.0]), 5.0);
        assert_eq!(norm2::<f64>(&[]), 0.0);
        let big = norm2(&[1e300f64, 1e300]);
        assert!((big / 1e300 - 2f64.sqrt()).abs() < 1e-15);
    }
}
