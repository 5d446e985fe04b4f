//! One-sided Jacobi SVD and thin QR for small dense matrices.
//!
//! Used by the `DenseSvd` compression method (the in-repo reference for
//! ranks) and by factor recompression. Not a performance path.

use alloc::vec::Vec;

use num_traits::Float;

use crate::dense::{norm2, Mat};
use crate::scalar::{RealScalar, Scalar};

/// `a = u · diag(s) · v*` with `s` sorted in decreasing order.
#[derive(Debug, Clone)]
pub struct Svd<T: Scalar> {
    pub u: Mat<T>,
    pub s: Vec<T::Real>,
    pub v: Mat<T>,
}

const MAX_SWEEPS: usize = 60;

/// Thin SVD; `u` is `m × p`, `v` is `n × p` with `p = min(m, n)`.
pub fn svd<T: Scalar>(a: &Mat<T>) -> Svd<T> {
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut v = Mat::<T>::identity(n);
    let eps = <T::Real as Float>::epsilon();
    let zero = <T::Real as Scalar>::zero();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (zero, zero, T::zero());
                for i in 0..m {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    alpha += x.modulus_sqr();
                    beta += y.modulus_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.modulus();
                if g == zero || g <= eps * Float::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                // e^{-iφ} removes the phase of the off-diagonal Gram entry
                let phase = (gamma / T::from_real(g)).conj();
                let two = <T::Real as Scalar>::one() + <T::Real as Scalar>::one();
                let zeta = (beta - alpha) / (two * g);
                let t = Float::signum(zeta)
                    / (Float::abs(zeta) + Float::sqrt(<T::Real as Scalar>::one() + zeta * zeta));
                let c = <T::Real as Scalar>::one() / Float::sqrt(<T::Real as Scalar>::one() + t * t);
                let s = c * t;
                rotate(&mut w, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(T::Real, usize)> = (0..n).map(|j| (norm2(w.col(j)), j)).collect();
    order.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(core::cmp::Ordering::Equal));
    let mut u = Mat::zeros(m, n);
    let mut vs = Mat::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (k, &(sigma, j)) in order.iter().enumerate() {
        s.push(sigma);
        if sigma > zero {
            let inv = T::from_real(<T::Real as Scalar>::one() / sigma);
            for i in 0..m {
                u[(i, k)] = w[(i, j)] * inv;
            }
        }
        for i in 0..n {
            vs[(i, k)] = v[(i, j)];
        }
    }
    Svd { u, s, v: vs }
}

fn rotate<T: Scalar>(m: &mut Mat<T>, p: usize, q: usize, c: T::Real, s: T::Real, phase: T) {
    let (c, s) = (T::from_real(c), T::from_real(s));
    for i in 0..m.rows() {
        let x = m[(i, p)];
        let y = m[(i, q)] * phase;
        m[(i, p)] = c * x - s * y;
        m[(i, q)] = s * x + c * y;
    }
}

/// Smallest `k` with `sqrt(Σ_{i≥k} s_i²) ≤ tol · ‖s‖₂`.
pub fn frobenius_rank<R: RealScalar>(s: &[R], tol: R) -> usize {
    let total: R = s.iter().map(|&x| x * x).sum();
    if total == <R as Scalar>::zero() {
        return 0;
    }
    let budget = tol * tol * total;
    let mut tail = <R as Scalar>::zero();
    let mut k = s.len();
    while k > 0 {
        let next = tail + s[k - 1] * s[k - 1];
        if next > budget {
            break;
        }
        tail = next;
        k -= 1;
    }
    k
}

/// Number of singular values strictly above `tol · s_0`.
pub fn relative_rank<R: RealScalar>(s: &[R], tol: R) -> usize {
    match s.first() {
        Some(&s0) if s0 > <R as Scalar>::zero() => s.iter().take_while(|&&x| x > tol * s0).count(),
        _ => 0,
    }
}

/// Thin QR by classical Gram–Schmidt with one reorthogonalization pass.
///
/// Columns that vanish leave a zero column in `q` and a zero row in `r`.
pub fn thin_qr<T: Scalar>(a: &Mat<T>) -> (Mat<T>, Mat<T>) {
    let (m, n) = (a.rows(), a.cols());
    let mut q = Mat::<T>::zeros(m, n);
    let mut r = Mat::zeros(n, n);
    let scale = a.norm_fro();
    let tiny = scale * <T::Real as Float>::epsilon() * <T::Real as Scalar>::from_f64(m.max(1) as f64);
    for j in 0..n {
        let mut col: Vec<T> = a.col(j).to_vec();
        for _pass in 0..2 {
            for k in 0..j {
                let qk = q.col(k);
                let h: T = qk.iter().zip(&col).map(|(&x, &y)| x.conj() * y).sum();
                r[(k, j)] += h;
                for (c, &x) in col.iter_mut().zip(qk) {
                    *c -= x * h;
                }
            }
        }
        let nrm = norm2(&col);
        if nrm > tiny && nrm > <T::Real as Scalar>::zero() {
            r[(j, j)] = T::from_real(nrm);
            let inv = T::from_real(<T::Real as Scalar>::one() / nrm);
            for (dst, &c) in q.col_mut(j).iter_mut().zip(&col) {
                *dst = c * inv;
            }
        }
    }
    (q, r)
}
