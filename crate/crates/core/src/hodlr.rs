//! Concatenated HODLR representation.
//!
//! All leaf diagonal blocks live in one buffer (`d_big`), each block packed
//! column-major in leaf order. Low-rank bases are grouped by tree level: the
//! panel of level `ℓ` holds, for every node `α` at that level, the
//! `n_α × r_α` basis block, packed column-major one node after another.
//! For a sibling pair `(α, β)` the off-diagonal block is
//! `A(I_α, I_β) = U_α V_β*`, so `U_α` and `V_β` share their column count.

use alloc::vec;
use alloc::vec::Vec;

use crate::batched::{BlockRef, Executor};
use crate::compress::{compress, CompressionConfig, LowRankFactor};
use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use crate::tree::{ClusterTree, IndexRange};

/// Largest dimension [`HodlrMatrix::reconstruct_dense`] will materialize.
pub const DENSE_GUARD: usize = 4096;

/// Matrix given entry by entry.
pub trait EntryOracle<T>: Sync {
    fn dim(&self) -> usize;
    fn entry(&self, i: usize, j: usize) -> T;

    fn block(&self, rows: IndexRange, cols: IndexRange) -> Mat<T>
    where
        T: Scalar,
    {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self.entry(rows.start + i, cols.start + j))
    }
}

impl<T: Scalar> EntryOracle<T> for Mat<T> {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn entry(&self, i: usize, j: usize) -> T {
        self[(i, j)]
    }
}

impl<T, O: EntryOracle<T> + ?Sized> EntryOracle<T> for &O {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn entry(&self, i: usize, j: usize) -> T {
        (**self).entry(i, j)
    }
}

/// Oracle backed by a closure.
pub struct FnOracle<F> {
    n: usize,
    f: F,
}

impl<F> FnOracle<F> {
    pub fn new(n: usize, f: F) -> Self {
        FnOracle { n, f }
    }
}

impl<T, F: Fn(usize, usize) -> T + Sync> EntryOracle<T> for FnOracle<F> {
    fn dim(&self) -> usize {
        self.n
    }

    fn entry(&self, i: usize, j: usize) -> T {
        (self.f)(i, j)
    }
}

/// Rounds a double-precision oracle to single precision entry by entry.
pub struct Demoted<O>(pub O);

impl<O: EntryOracle<f64>> EntryOracle<f32> for Demoted<O> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn entry(&self, i: usize, j: usize) -> f32 {
        self.0.entry(i, j) as f32
    }
}

impl<O: EntryOracle<crate::scalar::C64>> EntryOracle<crate::scalar::C32> for Demoted<O> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn entry(&self, i: usize, j: usize) -> crate::scalar::C32 {
        let z = self.0.entry(i, j);
        crate::scalar::C32::new(z.re as f32, z.im as f32)
    }
}

/// Bases of every node at one tree level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelPanel<T> {
    level: usize,
    heights: Vec<usize>,
    ranks: Vec<usize>,
    offsets: Vec<usize>,
    data: Vec<T>,
}

impl<T: Scalar> LevelPanel<T> {
    /// Zero-filled panel for the given per-node ranks.
    pub fn zeros(tree: &ClusterTree, level: usize, ranks: Vec<usize>) -> Result<Self> {
        let nodes = tree.level(level);
        if ranks.len() != nodes.len() {
            return Err(Error::DimensionMismatch { expected: nodes.len(), found: ranks.len() });
        }
        let heights: Vec<usize> = nodes.iter().map(|r| r.len()).collect();
        for (h, &r) in heights.iter().zip(&ranks) {
            if r > *h {
                return Err(Error::Contract("basis rank exceeds node size"));
            }
        }
        let mut offsets = Vec::with_capacity(ranks.len());
        let mut total = 0;
        for (h, r) in heights.iter().zip(&ranks) {
            offsets.push(total);
            total += h * r;
        }
        Ok(LevelPanel { level, heights, ranks, offsets, data: vec![T::zero(); total] })
    }

    /// Panel from per-node basis matrices.
    pub fn from_bases(tree: &ClusterTree, level: usize, bases: &[Mat<T>]) -> Result<Self> {
        let mut p = Self::zeros(tree, level, bases.iter().map(|b| b.cols()).collect())?;
        for (k, b) in bases.iter().enumerate() {
            if b.rows() != p.heights[k] {
                return Err(Error::DimensionMismatch { expected: p.heights[k], found: b.rows() });
            }
            let off = p.offsets[k];
            p.data[off..off + b.as_slice().len()].copy_from_slice(b.as_slice());
        }
        Ok(p)
    }

    /// Panel over existing data; `data` must have the packed length.
    pub fn from_raw(tree: &ClusterTree, level: usize, ranks: Vec<usize>, data: Vec<T>) -> Result<Self> {
        let mut p = Self::zeros(tree, level, ranks)?;
        if data.len() != p.data.len() {
            return Err(Error::DimensionMismatch { expected: p.data.len(), found: data.len() });
        }
        p.data = data;
        Ok(p)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn max_rank(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// All nodes share one rank.
    pub fn is_uniform(&self) -> bool {
        self.ranks.windows(2).all(|w| w[0] == w[1])
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    /// Descriptor of node `k`'s basis block.
    pub fn block(&self, k: usize) -> BlockRef {
        BlockRef::packed(self.offsets[k], self.heights[k], self.ranks[k])
    }

    /// Rows `[row, row + rows)` of node `k`'s basis block.
    pub fn sub_block(&self, k: usize, row: usize, rows: usize) -> BlockRef {
        BlockRef::new(self.offsets[k] + row, rows, self.ranks[k], self.heights[k])
    }

    pub fn basis(&self, k: usize) -> Mat<T> {
        let b = self.block(k);
        Mat::from_block(&self.data, b.offset, b.rows, b.cols, b.ld)
    }
}

/// HODLR matrix in concatenated form.
#[derive(Debug, Clone, PartialEq)]
pub struct HodlrMatrix<T> {
    tree: ClusterTree,
    d_big: Vec<T>,
    d_offsets: Vec<usize>,
    u: Vec<LevelPanel<T>>,
    v: Vec<LevelPanel<T>>,
    truncated: bool,
}

impl<T: Scalar> HodlrMatrix<T> {
    /// Compresses every sibling off-diagonal block of `oracle`.
    pub fn assemble<O: EntryOracle<T>>(oracle: &O, tree: ClusterTree, config: &CompressionConfig) -> Result<Self> {
        Self::assemble_with(oracle, tree, config, &Executor::serial())
    }

    /// As [`assemble`](Self::assemble), compressing blocks on `executor`.
    pub fn assemble_with<O: EntryOracle<T>>(
        oracle: &O,
        tree: ClusterTree,
        config: &CompressionConfig,
        executor: &Executor,
    ) -> Result<Self> {
        config.validate()?;
        if oracle.dim() != tree.n() {
            return Err(Error::DimensionMismatch { expected: tree.n(), found: oracle.dim() });
        }
        let leaves = tree.leaves().to_vec();
        let diag = executor.map(leaves.len(), |k| {
            let r = leaves[k];
            let b = oracle.block(r, r);
            match b.as_slice().iter().position(|x| !x.all_finite()) {
                Some(p) => Err(Error::NonFiniteEntry { row: r.start + p % r.len(), col: r.start + p / r.len() }),
                None => Ok(b),
            }
        });
        let diag = diag.into_iter().collect::<Result<Vec<_>>>()?;

        // (level, pair, direction): direction 0 is A(I_α, I_β), 1 is A(I_β, I_α)
        let mut jobs = Vec::new();
        for level in 1..=tree.depth() {
            for k in 0..tree.level(level).len() / 2 {
                jobs.push((level, k, 0u8));
                jobs.push((level, k, 1u8));
            }
        }
        let entry = |i: usize, j: usize| oracle.entry(i, j);
        let factors = executor.map(jobs.len(), |j| {
            let (level, k, dir) = jobs[j];
            let (a, b) = (tree.node(level, 2 * k), tree.node(level, 2 * k + 1));
            if dir == 0 {
                compress(entry, a, b, config)
            } else {
                compress(entry, b, a, config)
            }
        });
        let mut factors = factors.into_iter();
        let mut pairs = Vec::with_capacity(tree.depth());
        for level in 1..=tree.depth() {
            let count = tree.level(level).len() / 2;
            let mut lv = Vec::with_capacity(count);
            for _ in 0..count {
                let ab = factors.next().expect("job count")?;
                let ba = factors.next().expect("job count")?;
                lv.push((ab, ba));
            }
            pairs.push(lv);
        }
        Self::from_blocks(tree, diag, pairs)
    }

    /// Builds the representation from explicit pieces. `pairs[ℓ-1][k]`
    /// holds the factors of `A(I_α, I_β)` and `A(I_β, I_α)` for the `k`-th
    /// sibling pair at level `ℓ`.
    pub fn from_blocks(
        tree: ClusterTree,
        diag: Vec<Mat<T>>,
        pairs: Vec<Vec<(LowRankFactor<T>, LowRankFactor<T>)>>,
    ) -> Result<Self> {
        if diag.len() != tree.num_leaves() {
            return Err(Error::DimensionMismatch { expected: tree.num_leaves(), found: diag.len() });
        }
        if pairs.len() != tree.depth() {
            return Err(Error::DimensionMismatch { expected: tree.depth(), found: pairs.len() });
        }
        let mut d_big = Vec::with_capacity(diag.iter().map(|d| d.as_slice().len()).sum());
        let mut d_offsets = Vec::with_capacity(diag.len());
        for (d, leaf) in diag.iter().zip(tree.leaves()) {
            if d.rows() != leaf.len() || d.cols() != leaf.len() {
                return Err(Error::DimensionMismatch { expected: leaf.len(), found: d.rows() });
            }
            d_offsets.push(d_big.len());
            d_big.extend_from_slice(d.as_slice());
        }
        let mut truncated = false;
        let mut u = Vec::with_capacity(tree.depth());
        let mut v = Vec::with_capacity(tree.depth());
        for (i, lv) in pairs.iter().enumerate() {
            let level = i + 1;
            if lv.len() * 2 != tree.level(level).len() {
                return Err(Error::DimensionMismatch { expected: tree.level(level).len() / 2, found: lv.len() });
            }
            let mut ub = Vec::with_capacity(lv.len() * 2);
            let mut vb = Vec::with_capacity(lv.len() * 2);
            for (k, (ab, ba)) in lv.iter().enumerate() {
                let (a, b) = (tree.node(level, 2 * k), tree.node(level, 2 * k + 1));
                if ab.rows() != a.len() || ab.cols() != b.len() || ba.rows() != b.len() || ba.cols() != a.len() {
                    return Err(Error::Contract("off-diagonal factor does not match its block"));
                }
                truncated |= ab.truncated || ba.truncated;
                ub.push(ab.u.clone());
                ub.push(ba.u.clone());
                vb.push(ba.v.clone());
                vb.push(ab.v.clone());
            }
            u.push(LevelPanel::from_bases(&tree, level, &ub)?);
            v.push(LevelPanel::from_bases(&tree, level, &vb)?);
        }
        Ok(HodlrMatrix { tree, d_big, d_offsets, u, v, truncated })
    }

    /// Reassembles a representation from its raw buffers.
    pub fn from_raw_parts(tree: ClusterTree, d_big: Vec<T>, u: Vec<LevelPanel<T>>, v: Vec<LevelPanel<T>>) -> Result<Self> {
        let mut d_offsets = Vec::with_capacity(tree.num_leaves());
        let mut total = 0;
        for leaf in tree.leaves() {
            d_offsets.push(total);
            total += leaf.len() * leaf.len();
        }
        if d_big.len() != total {
            return Err(Error::DimensionMismatch { expected: total, found: d_big.len() });
        }
        if u.len() != tree.depth() || v.len() != tree.depth() {
            return Err(Error::DimensionMismatch { expected: tree.depth(), found: u.len().min(v.len()) });
        }
        for (i, (pu, pv)) in u.iter().zip(&v).enumerate() {
            let level = i + 1;
            if pu.level != level || pv.level != level || pu.ranks.len() != tree.level(level).len() {
                return Err(Error::Contract("panel does not match its tree level"));
            }
            for k in 0..pu.ranks.len() / 2 {
                if pu.ranks[2 * k] != pv.ranks[2 * k + 1] {
                    return Err(Error::RankMismatch { left: pu.ranks[2 * k], right: pv.ranks[2 * k + 1] });
                }
                if pu.ranks[2 * k + 1] != pv.ranks[2 * k] {
                    return Err(Error::RankMismatch { left: pu.ranks[2 * k + 1], right: pv.ranks[2 * k] });
                }
            }
        }
        Ok(HodlrMatrix { tree, d_big, d_offsets, u, v, truncated: false })
    }

    pub(crate) fn into_parts(self) -> (ClusterTree, Vec<T>, Vec<usize>, Vec<LevelPanel<T>>, Vec<LevelPanel<T>>) {
        (self.tree, self.d_big, self.d_offsets, self.u, self.v)
    }

    pub fn tree(&self) -> &ClusterTree {
        &self.tree
    }

    pub fn n(&self) -> usize {
        self.tree.n()
    }

    pub fn depth(&self) -> usize {
        self.tree.depth()
    }

    pub fn field(&self) -> Field {
        T::FIELD
    }

    /// Some compression hit its rank cap before reaching the tolerance.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn d_big(&self) -> &[T] {
        &self.d_big
    }

    pub fn diag_block(&self, k: usize) -> Mat<T> {
        let m = self.tree.leaves()[k].len();
        Mat::from_block(&self.d_big, self.d_offsets[k], m, m, m)
    }

    /// `U` panel of level `ℓ ∈ 1..=L`.
    pub fn u_panel(&self, level: usize) -> &LevelPanel<T> {
        &self.u[level - 1]
    }

    pub fn v_panel(&self, level: usize) -> &LevelPanel<T> {
        &self.v[level - 1]
    }

    pub fn u_panels(&self) -> &[LevelPanel<T>] {
        &self.u
    }

    pub fn v_panels(&self) -> &[LevelPanel<T>] {
        &self.v
    }

    /// Largest basis rank of each level, from level 1 to the leaves.
    pub fn rank_profile(&self) -> Vec<usize> {
        self.u.iter().map(|p| p.max_rank()).collect()
    }

    /// `U_α V_β*` for the `k`-th pair at `level`, or its transpose partner
    /// `U_β V_α*` when `lower` is set.
    pub fn off_diagonal(&self, level: usize, k: usize, lower: bool) -> LowRankFactor<T> {
        let (a, b) = if lower { (2 * k + 1, 2 * k) } else { (2 * k, 2 * k + 1) };
        LowRankFactor { u: self.u_panel(level).basis(a), v: self.v_panel(level).basis(b), truncated: false }
    }

    /// Dense expansion; refuses `n > DENSE_GUARD`.
    pub fn reconstruct_dense(&self) -> Result<Mat<T>> {
        let n = self.n();
        if n > DENSE_GUARD {
            return Err(Error::SizeGuard { n, limit: DENSE_GUARD });
        }
        let mut a = Mat::zeros(n, n);
        for (k, leaf) in self.tree.leaves().iter().enumerate() {
            a.set_block(leaf.start, leaf.start, &self.diag_block(k));
        }
        for level in 1..=self.depth() {
            for k in 0..self.tree.level(level).len() / 2 {
                let (ia, ib) = (self.tree.node(level, 2 * k), self.tree.node(level, 2 * k + 1));
                a.set_block(ia.start, ib.start, &self.off_diagonal(level, k, false).to_dense());
                a.set_block(ib.start, ia.start, &self.off_diagonal(level, k, true).to_dense());
            }
        }
        Ok(a)
    }

    /// `A x` evaluated block by block.
    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        let n = self.n();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        let mut y = vec![T::zero(); n];
        for (k, leaf) in self.tree.leaves().iter().enumerate() {
            let m = leaf.len();
            let d = &self.d_big[self.d_offsets[k]..self.d_offsets[k] + m * m];
            let yk = &mut y[leaf.range()];
            for (j, &xj) in x[leaf.range()].iter().enumerate() {
                for (yi, &a) in yk.iter_mut().zip(&d[j * m..(j + 1) * m]) {
                    *yi += a * xj;
                }
            }
        }
        for level in 1..=self.depth() {
            let (u, v) = (self.u_panel(level), self.v_panel(level));
            let nodes = self.tree.level(level);
            for k in 0..nodes.len() / 2 {
                for (dst, src) in [(2 * k, 2 * k + 1), (2 * k + 1, 2 * k)] {
                    let (ir, ic) = (nodes[dst], nodes[src]);
                    let (ub, vb) = (u.block(dst), v.block(src));
                    // t = V_src* x(I_src), then y(I_dst) += U_dst t
                    let t: Vec<T> = (0..vb.cols)
                        .map(|c| {
                            let col = &v.data[vb.offset + c * vb.ld..vb.offset + c * vb.ld + vb.rows];
                            col.iter().zip(&x[ic.range()]).map(|(&a, &b)| a.conj() * b).sum()
                        })
                        .collect();
                    let yk = &mut y[ir.range()];
                    for (c, &tc) in t.iter().enumerate() {
                        let col = &u.data[ub.offset + c * ub.ld..ub.offset + c * ub.ld + ub.rows];
                        for (yi, &a) in yk.iter_mut().zip(col) {
                            *yi += a * tc;
                        }
                    }
                }
            }
        }
        Ok(y)
    }

    pub fn storage_report(&self) -> StorageReport {
        let diagonal = self.d_big.len();
        let u: usize = self.u.iter().map(|p| p.data.len()).sum();
        let v: usize = self.v.iter().map(|p| p.data.len()).sum();
        let leaf = self.tree.leaves()[0].len();
        let even_leaves = self.tree.leaves().iter().all(|l| l.len() == leaf);
        let rank = self.u.first().map(|p| p.ranks[0]).unwrap_or(0);
        let even_ranks = self.u.iter().chain(&self.v).all(|p| p.ranks.iter().all(|&r| r == rank));
        let uniform = (even_leaves && even_ranks).then_some(UniformShape { n: self.n(), leaf, rank, levels: self.depth() });
        StorageReport {
            diagonal_scalars: diagonal,
            u_scalars: u,
            v_scalars: v,
            scalar_bytes: T::FIELD.scalar_bytes(),
            uniform,
        }
    }
}

/// Leaf size, rank and depth of a uniform instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformShape {
    pub n: usize,
    pub leaf: usize,
    pub rank: usize,
    pub levels: usize,
}

impl UniformShape {
    /// `m N`
    pub fn predicted_diagonal(&self) -> usize {
        self.leaf * self.n
    }

    /// `2 r N L`: both bases of every level.
    pub fn predicted_bases(&self) -> usize {
        2 * self.rank * self.n * self.levels
    }

    /// `m N + r N L`: factor storage once `Y` has overwritten `U`.
    pub fn predicted_factor(&self) -> usize {
        self.leaf * self.n + self.rank * self.n * self.levels
    }
}

/// Scalar counts of a representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StorageReport {
    pub diagonal_scalars: usize,
    pub u_scalars: usize,
    pub v_scalars: usize,
    pub scalar_bytes: usize,
    pub uniform: Option<UniformShape>,
}

impl StorageReport {
    pub fn bases_scalars(&self) -> usize {
        self.u_scalars + self.v_scalars
    }

    pub fn bytes_diagonal(&self) -> usize {
        self.diagonal_scalars * self.scalar_bytes
    }

    pub fn bytes_bases(&self) -> usize {
        self.bases_scalars() * self.scalar_bytes
    }

    pub fn total_bytes(&self) -> usize {
        self.bytes_diagonal() + self.bytes_bases()
    }

    /// Diagonal blocks plus one basis set, the factorization's footprint
    /// before the coupling blocks.
    pub fn factor_scalars(&self) -> usize {
        self.diagonal_scalars + self.u_scalars
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compress::Method;
    use crate::dense::rel_diff;

    fn two_by_two() -> HodlrMatrix<f64> {
        let a = Mat::from_fn(2, 2, |i, j| if i == j { 2.0 } else { 1.0 });
        HodlrMatrix::assemble(&a, ClusterTree::new(2, 1).unwrap(), &CompressionConfig::default()).unwrap()
    }

    #[test]
    fn identity_has_no_bases() {
        let id = Mat::<f64>::identity(37);
        let h = HodlrMatrix::assemble(&id, ClusterTree::new(37, 8).unwrap(), &CompressionConfig::default()).unwrap();
        assert!(h.rank_profile().iter().all(|&r| r == 0));
        assert_eq!(h.reconstruct_dense().unwrap(), id);
        assert_eq!(h.storage_report().bytes_bases(), 0);
        let x: Vec<f64> = (0..37).map(|i| i as f64 - 3.5).collect();
        assert_eq!(h.matvec(&x).unwrap(), x);
    }

    #[test]
    fn two_by_two_blocks() {
        let h = two_by_two();
        assert_eq!(h.diag_block(0)[(0, 0)], 2.0);
        assert_eq!(h.diag_block(1)[(0, 0)], 2.0);
        assert_eq!(h.u_panel(1).ranks(), &[1, 1]);
        let ab = h.off_diagonal(1, 0, false).to_dense();
        assert!((ab[(0, 0)] - 1.0).abs() < 1e-15);
        assert_eq!(h.matvec(&[1.0, 1.0]).unwrap(), vec![3.0, 3.0]);
    }

    #[test]
    fn dense_round_trip() {
        let a = Mat::from_fn(64, 64, |i, j| 1.0 / (1.0 + (i as f64 - j as f64).abs()) + if i == j { 1.0 } else { 0.0 });
        let cfg = CompressionConfig { tol: 1e-14, method: Method::DenseSvd, ..CompressionConfig::default() };
        let h = HodlrMatrix::assemble(&a, ClusterTree::new(64, 8).unwrap(), &cfg).unwrap();
        let err = h.reconstruct_dense().unwrap().sub(&a).norm_fro() / a.norm_fro();
        assert!(err < 1e-12, "{err}");
        let x: Vec<f64> = (0..64).map(|i| (i as f64 * 0.37).sin()).collect();
        assert!(rel_diff(&h.matvec(&x).unwrap(), &a.matvec(&x)) < 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let z = Mat::<f64>::zeros(16, 16);
        let h = HodlrMatrix::assemble(&z, ClusterTree::new(16, 4).unwrap(), &CompressionConfig::default()).unwrap();
        assert_eq!(h.reconstruct_dense().unwrap(), z);
    }

    #[test]
    fn nan_entry_is_rejected() {
        let a = Mat::from_fn(8, 8, |i, j| if (i, j) == (3, 3) { f64::NAN } else { 1.0 });
        let err = HodlrMatrix::assemble(&a, ClusterTree::new(8, 2).unwrap(), &CompressionConfig::default()).unwrap_err();
        assert_eq!(err, Error::NonFiniteEntry { row: 3, col: 3 });
    }

    #[test]
    fn single_leaf_storage() {
        let a = Mat::<f64>::identity(5);
        let h = HodlrMatrix::assemble(&a, ClusterTree::new(5, 8).unwrap(), &CompressionConfig::default()).unwrap();
        let s = h.storage_report();
        assert_eq!(s.diagonal_scalars, 25);
        assert_eq!(s.bases_scalars(), 0);
    }

    #[test]
    fn dense_guard() {
        let tree = ClusterTree::new(DENSE_GUARD + 1, DENSE_GUARD + 1).unwrap();
        let h = HodlrMatrix::<f32>::from_raw_parts(tree, vec![0.0; (DENSE_GUARD + 1) * (DENSE_GUARD + 1)], vec![], vec![]).unwrap();
        assert!(matches!(h.reconstruct_dense(), Err(Error::SizeGuard { .. })));
    }
}
