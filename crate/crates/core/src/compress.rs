//! Low-rank compression of off-diagonal blocks.
//!
//! A block is represented as `u · v*` (conjugate transpose on `v`), the
//! convention used for every basis pair in the crate. Three methods are
//! available:
//!
//! * [`Method::AcaPartial`]: adaptive cross approximation with partial
//!   pivoting (row pivot from the previous column, column pivot from the
//!   current row).
//! * [`Method::AcaRook`]: the same cross scheme, but each pivot is refined by
//!   alternating row/column argmax sweeps until it is maximal in both its
//!   row and column.
//! * [`Method::DenseSvd`]: materializes the block and truncates its SVD at
//!   `σ_k ≤ tol · σ_1`. This is the reference the ACA ranks are checked
//!   against.
//!
//! ACA stops when the newest cross term satisfies
//! `‖u_k‖ ‖v_k‖ ≤ tol · ‖S_k‖_F`, where `‖S_k‖_F` is the running Frobenius
//! estimate of the approximant.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::dense::{norm2, Mat};
use crate::error::{Error, Result};
use crate::scalar::{RealScalar, Scalar};
use crate::svd::{frobenius_rank, relative_rank, svd, thin_qr};
use crate::tree::IndexRange;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    AcaPartial,
    AcaRook,
    DenseSvd,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::AcaPartial => "aca_partial_pivot",
            Method::AcaRook => "aca_rook_pivot",
            Method::DenseSvd => "dense_svd",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s {
            "aca_partial_pivot" | "aca_partial" | "aca" => Some(Method::AcaPartial),
            "aca_rook_pivot" | "aca_rook" | "rook" => Some(Method::AcaRook),
            "dense_svd" | "svd" => Some(Method::DenseSvd),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionConfig {
    /// Relative accuracy target.
    pub tol: f64,
    pub max_rank: Option<usize>,
    pub method: Method,
    /// Run [`recompress`] on ACA output.
    pub recompress: bool,
}

impl Default for CompressionConfig {
    fn default() -> Self {
        CompressionConfig { tol: 1e-12, max_rank: None, method: Method::AcaRook, recompress: true }
    }
}

impl CompressionConfig {
    pub fn with_tol(tol: f64) -> Self {
        CompressionConfig { tol, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) && self.max_rank.is_none() {
            return Err(Error::Contract("compression needs tol > 0 or a rank cap"));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::Contract("tolerance must be nonnegative"));
        }
        Ok(())
    }
}

/// `block ≈ u · v*`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankFactor<T: Scalar> {
    pub u: Mat<T>,
    pub v: Mat<T>,
    /// Set when the rank cap stopped the compression before `tol` was met.
    pub truncated: bool,
}

impl<T: Scalar> LowRankFactor<T> {
    pub fn empty(rows: usize, cols: usize) -> Self {
        LowRankFactor { u: Mat::zeros(rows, 0), v: Mat::zeros(cols, 0), truncated: false }
    }

    pub fn from_parts(u: Mat<T>, v: Mat<T>) -> Result<Self> {
        if u.cols() != v.cols() {
            return Err(Error::RankMismatch { left: u.cols(), right: v.cols() });
        }
        Ok(LowRankFactor { u, v, truncated: false })
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.u.cols()
    }

    pub fn rows(&self) -> usize {
        self.u.rows()
    }

    pub fn cols(&self) -> usize {
        self.v.rows()
    }

    pub fn to_dense(&self) -> Mat<T> {
        self.u.mul_adjoint(&self.v)
    }
}

/// Compresses the block `rows × cols` of `entry`.
pub fn compress<T, F>(entry: F, rows: IndexRange, cols: IndexRange, config: &CompressionConfig) -> Result<LowRankFactor<T>>
where
    T: Scalar,
    F: Fn(usize, usize) -> T,
{
    config.validate()?;
    let tol = <T::Real as Scalar>::from_f64(config.tol);
    let cap = config.max_rank.unwrap_or(usize::MAX).min(rows.len()).min(cols.len());
    let checked = |i: usize, j: usize| -> Result<T> {
        let x = entry(rows.start + i, cols.start + j);
        if x.all_finite() {
            Ok(x)
        } else {
            Err(Error::NonFiniteEntry { row: rows.start + i, col: cols.start + j })
        }
    };
    match config.method {
        Method::DenseSvd => {
            let mut block = Mat::zeros(rows.len(), cols.len());
            for j in 0..cols.len() {
                for i in 0..rows.len() {
                    block[(i, j)] = checked(i, j)?;
                }
            }
            Ok(svd_truncate(&block, tol, cap, relative_rank))
        }
        Method::AcaPartial | Method::AcaRook => {
            let rook = config.method == Method::AcaRook;
            let f = aca(&checked, rows.len(), cols.len(), tol, cap, rook)?;
            if config.recompress && f.rank() > 1 {
                let truncated = f.truncated;
                let mut r = recompress(&f, config.tol);
                r.truncated = truncated;
                Ok(r)
            } else {
                Ok(f)
            }
        }
    }
}

fn svd_truncate<T: Scalar>(
    block: &Mat<T>,
    tol: T::Real,
    cap: usize,
    rule: fn(&[T::Real], T::Real) -> usize,
) -> LowRankFactor<T> {
    let d = svd(block);
    let full = rule(&d.s, tol);
    let k = full.min(cap);
    let mut u = d.u;
    let mut v = d.v;
    u.truncate_cols(k);
    v.truncate_cols(k);
    for (j, &s) in d.s.iter().take(k).enumerate() {
        for x in u.col_mut(j) {
            *x = x.scale(s);
        }
    }
    LowRankFactor { u, v, truncated: k < full }
}

/// Consecutive negligible pivots tolerated after the first cross term.
const MAX_ZERO_PIVOTS: usize = 8;
const ROOK_SWEEPS: usize = 4;

fn aca<T, G>(entry: &G, m: usize, n: usize, tol: T::Real, cap: usize, rook: bool) -> Result<LowRankFactor<T>>
where
    T: Scalar,
    G: Fn(usize, usize) -> Result<T>,
{
    let zero = <T::Real as Scalar>::zero();
    let eps = <T::Real as Float>::epsilon();
    let mut us: Vec<Vec<T>> = Vec::new();
    // stores conj of the residual row so the term reads u · v*
    let mut vs: Vec<Vec<T>> = Vec::new();
    let mut row_used = vec![false; m];
    let mut col_used = vec![false; n];
    let mut norm_sq = zero;
    let mut next_row = Some(0usize);
    let mut zero_pivots = 0usize;
    let mut converged = false;

    let residual_row = |i: usize, us: &[Vec<T>], vs: &[Vec<T>]| -> Result<Vec<T>> {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(entry(i, j)?);
        }
        for (u, v) in us.iter().zip(vs) {
            let ui = u[i];
            for (r, &vj) in row.iter_mut().zip(v) {
                *r -= ui * vj.conj();
            }
        }
        Ok(row)
    };
    let residual_col = |j: usize, us: &[Vec<T>], vs: &[Vec<T>]| -> Result<Vec<T>> {
        let mut col = Vec::with_capacity(m);
        for i in 0..m {
            col.push(entry(i, j)?);
        }
        for (u, v) in us.iter().zip(vs) {
            let vj = v[j].conj();
            for (c, &ui) in col.iter_mut().zip(u) {
                *c -= ui * vj;
            }
        }
        Ok(col)
    };

    while us.len() < cap {
        let Some(mut i) = next_row else {
            converged = true;
            break;
        };
        let mut row = residual_row(i, &us, &vs)?;
        let Some(mut j) = argmax(&row, &col_used) else {
            converged = true;
            break;
        };
        let mut col = residual_col(j, &us, &vs)?;
        if rook {
            for _ in 0..ROOK_SWEEPS {
                let Some(i2) = argmax(&col, &row_used) else { break };
                if i2 == i || col[i2].modulus_sqr() <= col[i].modulus_sqr() {
                    break;
                }
                i = i2;
                row = residual_row(i, &us, &vs)?;
                let Some(j2) = argmax(&row, &col_used) else { break };
                if j2 == j || row[j2].modulus_sqr() <= row[j].modulus_sqr() {
                    break;
                }
                j = j2;
                col = residual_col(j, &us, &vs)?;
            }
        }
        let pivot = row[j];
        let scale = Float::sqrt(norm_sq);
        if pivot.modulus() == zero || (!us.is_empty() && pivot.modulus() <= eps * scale) {
            row_used[i] = true;
            zero_pivots += 1;
            if !us.is_empty() && zero_pivots >= MAX_ZERO_PIVOTS {
                converged = true;
                break;
            }
            next_row = row_used.iter().position(|&u| !u);
            continue;
        }
        zero_pivots = 0;
        let inv = T::one() / pivot;
        let u: Vec<T> = col.iter().map(|&c| c * inv).collect();
        let v: Vec<T> = row.iter().map(|&r| r.conj()).collect();
        let nu = norm2(&u);
        let nv = norm2(&v);
        // ‖S + u v*‖² = ‖S‖² + 2 Re Σ (u_l* u)(v* v_l) + ‖u‖²‖v‖²
        let mut cross = T::zero();
        for (ul, vl) in us.iter().zip(&vs) {
            let a: T = ul.iter().zip(&u).map(|(&x, &y)| x.conj() * y).sum();
            let b: T = v.iter().zip(vl).map(|(&x, &y)| x.conj() * y).sum();
            cross += a * b;
        }
        let two = <T::Real as Scalar>::from_f64(2.0);
        norm_sq = norm_sq + two * cross.real() + nu * nu * nv * nv;
        if norm_sq < zero {
            norm_sq = nu * nu * nv * nv;
        }
        row_used[i] = true;
        col_used[j] = true;
        next_row = argmax(&u, &row_used).or_else(|| row_used.iter().position(|&x| !x));
        us.push(u);
        vs.push(v);
        if nu * nv <= tol * Float::sqrt(norm_sq) {
            converged = true;
            break;
        }
    }
    if us.len() >= cap && !converged {
        converged = cap == m.min(n);
    }

    let k = us.len();
    let mut u = Mat::zeros(m, k);
    let mut v = Mat::zeros(n, k);
    for (l, (ul, vl)) in us.into_iter().zip(vs).enumerate() {
        u.col_mut(l).copy_from_slice(&ul);
        v.col_mut(l).copy_from_slice(&vl);
    }
    Ok(LowRankFactor { u, v, truncated: !converged })
}

/// First index of maximal modulus among entries not yet used.
fn argmax<T: Scalar>(x: &[T], used: &[bool]) -> Option<usize> {
    let mut best: Option<(usize, T::Real)> = None;
    for (idx, (&v, &u)) in x.iter().zip(used).enumerate() {
        if u {
            continue;
        }
        let a = v.modulus_sqr();
        match best {
            Some((_, b)) if a <= b => {}
            _ => best = Some((idx, a)),
        }
    }
    best.map(|(idx, _)| idx)
}

/// Reduces the rank of `factor`, keeping `‖uv* − u'v'*‖_F ≤ tol ‖uv*‖_F`.
pub fn recompress<T: Scalar>(factor: &LowRankFactor<T>, tol: f64) -> LowRankFactor<T> {
    let k = factor.rank();
    if k == 0 {
        return factor.clone();
    }
    let (qu, ru) = thin_qr(&factor.u);
    let (qv, rv) = thin_qr(&factor.v);
    let core = ru.mul_adjoint(&rv);
    let d = svd(&core);
    let keep = frobenius_rank(&d.s, <T::Real as Scalar>::from_f64(tol));
    let mut w = d.u;
    let mut z = d.v;
    w.truncate_cols(keep);
    z.truncate_cols(keep);
    for (j, &s) in d.s.iter().take(keep).enumerate() {
        for x in w.col_mut(j) {
            *x = x.scale(s);
        }
    }
    LowRankFactor { u: qu.matmul(&w), v: qv.matmul(&z), truncated: factor.truncated }
}

/// Relative Frobenius error of `factor` against a materialized block.
pub fn relative_error<T: Scalar>(factor: &LowRankFactor<T>, block: &Mat<T>) -> f64 {
    let nb = block.norm_fro().to_f64();
    let diff = if factor.rank() == 0 { block.norm_fro() } else { factor.to_dense().sub(block).norm_fro() };
    if nb == 0.0 {
        diff.to_f64()
    } else {
        diff.to_f64() / nb
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;

    fn range(a: usize, b: usize) -> IndexRange {
        IndexRange::new(a, b).unwrap()
    }

    fn cfg(method: Method, tol: f64) -> CompressionConfig {
        CompressionConfig { tol, max_rank: None, method, recompress: false }
    }

    #[test]
    fn rank_one_block() {
        let x = |i: usize| 1.0 + i as f64;
        let y = |j: usize| 2.0 - 0.1 * j as f64;
        for method in [Method::AcaPartial, Method::AcaRook, Method::DenseSvd] {
            let f = compress(|i, j| x(i) * y(j), range(0, 20), range(30, 50), &cfg(method, 1e-12)).unwrap();
            assert_eq!(f.rank(), 1, "{method:?}");
            assert!(!f.truncated);
        }
    }

    #[test]
    fn zero_block() {
        for method in [Method::AcaPartial, Method::AcaRook, Method::DenseSvd] {
            let f = compress(|_, _| 0.0f64, range(0, 9), range(9, 20), &cfg(method, 1e-12)).unwrap();
            assert_eq!(f.rank(), 0, "{method:?}");
            assert_eq!((f.u.rows(), f.v.rows()), (9, 11));
        }
    }

    #[test]
    fn zero_rows_are_skipped() {
        // first rows vanish; the block still has rank one
        let f = compress(
            |i, j| if i < 5 { 0.0 } else { (i * j) as f64 + 1.0 },
            range(0, 12),
            range(0, 12),
            &cfg(Method::AcaPartial, 1e-12),
        )
        .unwrap();
        assert!(f.rank() >= 1);
        let dense = Mat::from_fn(12, 12, |i, j| if i < 5 { 0.0 } else { (i * j) as f64 + 1.0 });
        assert!(relative_error(&f, &dense) < 1e-12);
    }

    #[test]
    fn non_finite_entry_is_an_error() {
        let r = compress(|i, j| if i == 2 && j == 3 { f64::NAN } else { 1.0 }, range(0, 4), range(0, 4), &cfg(Method::DenseSvd, 1e-8));
        assert_eq!(r.unwrap_err(), Error::NonFiniteEntry { row: 2, col: 3 });
        let r = compress(|_, _| f64::INFINITY, range(0, 4), range(0, 4), &cfg(Method::AcaRook, 1e-8));
        assert!(matches!(r, Err(Error::NonFiniteEntry { .. })));
    }

    #[test]
    fn rank_cap_flags_truncation() {
        let f = compress(
            |i, j| 1.0 / (1.0 + (i as f64 - j as f64 - 40.0).abs()),
            range(0, 32),
            range(0, 32),
            &CompressionConfig { tol: 1e-14, max_rank: Some(2), method: Method::AcaRook, recompress: true },
        )
        .unwrap();
        assert_eq!(f.rank(), 2);
        assert!(f.truncated);
    }

    #[test]
    fn hilbert_like_block_matches_svd_rank() {
        let entry = |i: usize, j: usize| 1.0 / (1.0 + (i as f64 - j as f64 + 128.0).abs());
        let r = range(0, 64);
        let reference = compress(entry, r, r, &cfg(Method::DenseSvd, 1e-10)).unwrap().rank();
        for method in [Method::AcaPartial, Method::AcaRook] {
            let k = compress(entry, r, r, &CompressionConfig { tol: 1e-10, max_rank: None, method, recompress: true })
                .unwrap()
                .rank();
            assert!(k.abs_diff(reference) <= 1, "{method:?}: {k} vs {reference}");
        }
    }

    #[test]
    fn complex_block_uses_conjugate_transpose() {
        let entry = |i: usize, j: usize| {
            let d = (i as f64 + 40.0 - j as f64).abs();
            C64::new(d.cos(), d.sin()) / C64::new(d, 0.0)
        };
        let dense = Mat::from_fn(24, 24, |i, j| entry(i, j));
        for method in [Method::AcaPartial, Method::AcaRook, Method::DenseSvd] {
            let f = compress(entry, range(0, 24), range(0, 24), &cfg(method, 1e-10)).unwrap();
            assert!(relative_error(&f, &dense) < 1e-9, "{method:?}");
        }
    }

    #[test]
    fn recompress_drops_duplicate_columns() {
        let u = Mat::from_fn(10, 3, |i, j| if j == 2 { (i as f64).sin() } else { ((i + j) as f64).cos() });
        let mut v = Mat::from_fn(8, 3, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        // third pair duplicates the first direction
        let mut u2 = u.clone();
        for i in 0..10 {
            u2[(i, 2)] = u[(i, 0)];
        }
        for i in 0..8 {
            v[(i, 2)] = v[(i, 0)];
        }
        let f = LowRankFactor::from_parts(u2, v).unwrap();
        let r = recompress(&f, 1e-14);
        assert!(r.rank() <= 2);
        assert!(r.to_dense().sub(&f.to_dense()).norm_fro() <= 1e-13 * f.to_dense().norm_fro());
    }

    #[test]
    fn recompress_keeps_minimal_orthonormal_factor() {
        let (q, _) = thin_qr(&Mat::from_fn(9, 4, |i, j| ((i * 7 + j * 3) % 5) as f64 + (i == j) as u8 as f64));
        let f = LowRankFactor::from_parts(q.clone(), Mat::from_fn(6, 4, |i, j| (i == j) as u8 as f64)).unwrap();
        assert_eq!(recompress(&f, 1e-15).rank(), 4);
    }
}
