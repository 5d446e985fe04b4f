//! Applying a factorization: solves, log-determinant, refinement.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::batched::{BlockRef, GemmItem, Op, SolveItem};
use crate::dense::{norm2, Mat};
use crate::error::{Error, Result};
use crate::factor::{dispatch_gemm, HodlrFactorization, KVariant};
use crate::hodlr::HodlrMatrix;
use crate::scalar::{RealScalar, Scalar, C64};

/// Operation counts of one solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveStats {
    pub leaf: u64,
    /// `V* x` products and `x −= Y w` updates over all levels.
    pub levels: u64,
    /// Coupling-block solves, kept apart from the two terms above.
    pub k_solve: u64,
    pub levels_visited: usize,
}

impl SolveStats {
    /// Leaf solves plus level products.
    pub fn flops(&self) -> u64 {
        self.leaf + self.levels
    }
}

/// `log |det A|` and the unit phase of `det A` (`±1` for real fields).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub log_abs: f64,
    pub phase: C64,
}

impl LogDet {
    pub fn sign(&self) -> f64 {
        self.phase.re
    }

    fn singular() -> Self {
        LogDet { log_abs: f64::NEG_INFINITY, phase: C64::new(0.0, 0.0) }
    }
}

/// Accumulates `Π u_kk` with a sign for the row interchanges.
pub(crate) fn lu_logdet<T: Scalar>(diag: impl Iterator<Item = T>, pivots: &[usize], acc: &mut LogDet) {
    for (k, &p) in pivots.iter().enumerate() {
        if p != k {
            acc.phase = -acc.phase;
        }
    }
    for d in diag {
        let (re, im) = d.to_parts();
        let m = Float::hypot(re, im);
        if m == 0.0 {
            *acc = LogDet::singular();
            return;
        }
        acc.log_abs += Float::ln(m);
        acc.phase *= C64::new(re / m, im / m);
    }
    let r = acc.phase.norm();
    if r > 0.0 {
        acc.phase /= r;
    }
}

/// Something that can multiply a vector; used for refinement residuals.
pub trait Operator<T> {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[T]) -> Result<Vec<T>>;
}

impl<T: Scalar> Operator<T> for HodlrMatrix<T> {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        self.matvec(x)
    }
}

impl<T: Scalar> Operator<T> for Mat<T> {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.cols() {
            return Err(Error::DimensionMismatch { expected: self.cols(), found: x.len() });
        }
        Ok(self.matvec(x))
    }
}

/// Outcome of [`HodlrFactorization::solve_with_refinement`].
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement<T> {
    /// Best iterate seen.
    pub x: Vec<T>,
    /// Relative residual of each iterate, starting with the plain solve.
    pub history: Vec<f64>,
    pub best: usize,
    /// The residual grew on two consecutive steps.
    pub diverged: bool,
}

impl<T: Scalar> HodlrFactorization<T> {
    /// Solves `A x = b`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        Ok(self.solve_stats(b)?.0)
    }

    pub fn solve_stats(&self, b: &[T]) -> Result<(Vec<T>, SolveStats)> {
        if b.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: b.len() });
        }
        let mut x = b.to_vec();
        let stats = self.solve_in_place(&mut x, 1)?;
        Ok((x, stats))
    }

    /// Solves for every column of `b`.
    pub fn solve_multi(&self, b: &Mat<T>) -> Result<Mat<T>> {
        if b.rows() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: b.rows() });
        }
        let mut x = b.clone();
        let k = x.cols();
        self.solve_in_place(x.as_mut_slice(), k)?;
        Ok(x)
    }

    /// Overwrites the `n × k` column-major block `x` with `A⁻¹ x`.
    pub fn solve_in_place(&self, x: &mut [T], k: usize) -> Result<SolveStats> {
        let n = self.n();
        if x.len() != n * k {
            return Err(Error::DimensionMismatch { expected: n * k, found: x.len() });
        }
        let mut stats = SolveStats::default();
        if k == 0 {
            return Ok(stats);
        }
        let opts = &self.options;
        let ex = &opts.executor;
        let items: Vec<SolveItem> = self
            .tree
            .leaves()
            .iter()
            .enumerate()
            .map(|(j, l)| SolveItem { lu: j, rhs: BlockRef::new(l.start, l.len(), k, n) })
            .collect();
        stats.leaf = ex.batched_lu_solve(&self.d_lu, &self.d_big, &items, x)?;

        let depth = self.tree.depth();
        let wlen = self.k.iter().map(|kl| kl.layouts.iter().map(|l| l.dim()).sum::<usize>()).max().unwrap_or(0) * k;
        let mut w = vec![T::zero(); wlen];
        for level in (0..depth).rev() {
            let kl = &self.k[level];
            let (y, v) = (&self.y[level], &self.v[level]);
            let nodes = self.tree.level(level + 1);
            let mut w_off = Vec::with_capacity(kl.layouts.len());
            let mut total = 0;
            for l in &kl.layouts {
                w_off.push(total);
                total += l.dim() * k;
            }

            let mut items = Vec::new();
            for (g, l) in kl.layouts.iter().enumerate() {
                for (child, rows, row0) in [(2 * g, l.q, l.rhs_alpha), (2 * g + 1, l.p, l.rhs_beta)] {
                    if rows > 0 {
                        let node = nodes[child];
                        items.push(GemmItem {
                            a: v.block(child),
                            b: BlockRef::new(node.start, node.len(), k, n).in_buffer(1),
                            c: BlockRef::new(w_off[g] + row0, rows, k, l.dim()),
                        });
                    }
                }
            }
            stats.levels += dispatch_gemm(opts, level, items, Op::ConjTrans, T::one(), &[v.data(), x], T::zero(), &mut w[..total])?;

            let solves: Vec<SolveItem> = kl
                .layouts
                .iter()
                .enumerate()
                .filter(|(_, l)| l.dim() > 0)
                .map(|(g, l)| SolveItem { lu: g, rhs: BlockRef::new(w_off[g], l.dim(), k, l.dim()) })
                .collect();
            stats.k_solve += ex.batched_lu_solve(&kl.lu, &kl.data, &solves, &mut w[..total]).map_err(|e| match e {
                Error::Singular { node, column, .. } => Error::Singular { level: Some(level), node, column },
                e => e,
            })?;

            let mut items = Vec::new();
            for (g, l) in kl.layouts.iter().enumerate() {
                for (child, cols, row0) in [(2 * g, l.p, l.sol_alpha), (2 * g + 1, l.q, l.sol_beta)] {
                    if cols > 0 {
                        let node = nodes[child];
                        items.push(GemmItem {
                            a: y.block(child),
                            b: BlockRef::new(w_off[g] + row0, cols, k, l.dim()).in_buffer(1),
                            c: BlockRef::new(node.start, node.len(), k, n),
                        });
                    }
                }
            }
            stats.levels += dispatch_gemm(opts, level, items, Op::NoTrans, -T::one(), &[y.data(), &w[..total]], T::one(), x)?;
            stats.levels_visited += 1;
        }
        Ok(stats)
    }

    /// `log |det A|` and its phase: leaf LU diagonals with interchange
    /// signs, times one determinant per coupling block. The factor block
    /// `[[I, Y_α V_β*], [Y_β V_α*, I]]` has, by Sylvester's identity, the
    /// determinant of `[[I_p, T_β], [T_α, I_q]]`; the standard arrangement
    /// differs from it by a swap of `p` rows past `q` rows.
    pub fn logdet(&self) -> LogDet {
        let mut acc = LogDet { log_abs: 0.0, phase: C64::new(1.0, 0.0) };
        for (k, b) in self.d_lu.blocks.iter().enumerate() {
            let diag = (0..b.rows).map(|i| self.d_big[b.offset + i + i * b.ld]);
            lu_logdet(diag, self.d_lu.block_pivots(k), &mut acc);
            if acc.log_abs == f64::NEG_INFINITY {
                return acc;
            }
        }
        for kl in &self.k {
            for (g, l) in kl.layouts.iter().enumerate() {
                let d = l.dim();
                let o = kl.offsets[g];
                let diag = (0..d).map(|i| kl.data[o + i + i * d]);
                lu_logdet(diag, kl.lu.block_pivots(g), &mut acc);
                if acc.log_abs == f64::NEG_INFINITY {
                    return acc;
                }
                if self.variant == KVariant::PivotedStandard && (l.p * l.q) % 2 == 1 {
                    acc.phase = -acc.phase;
                }
            }
        }
        acc
    }

    /// Iterative refinement `x ← x + A_f⁻¹ (b − A x)` with residuals from
    /// `op`. Stops after `max_iters` corrections, once the residual reaches
    /// the working precision, when a step gains less than a factor of two,
    /// or when the residual grows twice in a row (`diverged`).
    pub fn solve_with_refinement<O: Operator<T>>(&self, op: &O, b: &[T], max_iters: usize) -> Result<Refinement<T>> {
        if op.dim() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: op.dim() });
        }
        let bn = norm2(b).to_f64();
        if bn == 0.0 {
            return Ok(Refinement { x: vec![T::zero(); b.len()], history: vec![0.0], best: 0, diverged: false });
        }
        let floor = <T::Real as Float>::epsilon().to_f64();
        let residual = |x: &[T]| -> Result<(Vec<T>, f64)> {
            let ax = op.apply(x)?;
            let r: Vec<T> = b.iter().zip(&ax).map(|(&bi, &ai)| bi - ai).collect();
            let rel = norm2(&r).to_f64() / bn;
            Ok((r, rel))
        };
        let mut x = self.solve(b)?;
        let (mut r, mut rel) = residual(&x)?;
        let mut history = vec![rel];
        let mut best = (0, x.clone(), rel);
        let mut growth = 0;
        let mut diverged = false;
        for it in 1..=max_iters {
            if rel <= floor {
                break;
            }
            let d = self.solve(&r)?;
            for (xi, di) in x.iter_mut().zip(&d) {
                *xi += *di;
            }
            let prev = rel;
            (r, rel) = residual(&x)?;
            history.push(rel);
            if rel < best.2 {
                best = (it, x.clone(), rel);
            }
            if rel > prev {
                growth += 1;
                if growth >= 2 {
                    diverged = true;
                    break;
                }
            } else if rel > 0.5 * prev {
                break;
            } else {
                growth = 0;
            }
        }
        Ok(Refinement { x: best.1, history, best: best.0, diverged })
    }
}
