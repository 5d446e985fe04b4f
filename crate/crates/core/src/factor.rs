//! Level-wise in-place factorization.
//!
//! For a sibling pair `(α, β)` with parent `γ`, write `p` for the column
//! count of `U_α` (and `V_β`) and `q` for that of `U_β` (and `V_α`). With
//! `Y = D⁻¹U` the coupling system of `γ` is
//!
//! ```text
//! [ V_α*Y_α   I_q     ] [w_α]   [V_α* z_α]
//! [ I_p       V_β*Y_β ] [w_β] = [V_β* z_β]
//! ```
//!
//! where `T_α = V_α*Y_α` is `q × p` and `T_β = V_β*Y_β` is `p × q`. The two
//! permuted variants swap the equation blocks (`PermutedRhs`) or the unknown
//! blocks (`PermutedSolution`) so that identities sit on the diagonal and
//! the LU needs no pivoting.
//!
//! The factorization runs as batched kernels: leaf LU, leaf solves on every
//! `U` panel (turning it into `Y`), then per parent level from the leaves
//! up: `T` GEMMs written straight into the coupling blocks, their LU, and
//! the low-rank update of all coarser `Y` panels.

use alloc::vec;
use alloc::vec::Vec;

use crate::batched::{BlockRef, Executor, GemmBatch, GemmItem, LuBatch, Op, Pivoting, SolveItem};
use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::hodlr::{HodlrMatrix, LevelPanel, DENSE_GUARD};
use crate::scalar::{Field, Scalar};
use crate::tree::ClusterTree;

/// Arrangement of the coupling system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum KVariant {
    /// `[[T_α, I], [I, T_β]]`, LU with partial pivoting.
    #[default]
    PivotedStandard,
    /// `[[I, T_β], [T_α, I]]`: equation blocks swapped, right-hand side
    /// reordered to match. No pivoting.
    PermutedRhs,
    /// `[[I, T_α], [T_β, I]]`: unknown blocks swapped, solution read back
    /// in swapped order. No pivoting.
    PermutedSolution,
}

impl KVariant {
    pub const ALL: [KVariant; 3] = [KVariant::PivotedStandard, KVariant::PermutedRhs, KVariant::PermutedSolution];

    pub fn name(self) -> &'static str {
        match self {
            KVariant::PivotedStandard => "pivoted_standard",
            KVariant::PermutedRhs => "permuted_rhs",
            KVariant::PermutedSolution => "permuted_solution",
        }
    }

    pub fn parse(s: &str) -> Option<KVariant> {
        KVariant::ALL.into_iter().find(|v| v.name() == s)
    }

    pub fn pivoting(self) -> Pivoting {
        match self {
            KVariant::PivotedStandard => Pivoting::Partial,
            _ => Pivoting::None,
        }
    }
}

/// Where the equation and unknown groups sit inside one coupling block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KLayout {
    /// Columns of `U_α`.
    pub p: usize,
    /// Columns of `U_β`.
    pub q: usize,
    /// First row of the `q` equations with right-hand side `V_α* z_α`.
    pub rhs_alpha: usize,
    /// First row of the `p` equations with right-hand side `V_β* z_β`.
    pub rhs_beta: usize,
    /// First entry of `w_α` (length `p`) in the solution.
    pub sol_alpha: usize,
    /// First entry of `w_β` (length `q`).
    pub sol_beta: usize,
}

impl KLayout {
    pub fn new(p: usize, q: usize, variant: KVariant) -> Self {
        let (rhs_alpha, rhs_beta) = match variant {
            KVariant::PermutedRhs => (p, 0),
            _ => (0, q),
        };
        let (sol_alpha, sol_beta) = match variant {
            KVariant::PermutedSolution => (q, 0),
            _ => (0, p),
        };
        KLayout { p, q, rhs_alpha, rhs_beta, sol_alpha, sol_beta }
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    /// `T_α` position: rows of the α equations, columns of `w_α`.
    fn t_alpha(&self, offset: usize) -> BlockRef {
        BlockRef::new(offset + self.rhs_alpha + self.sol_alpha * self.dim(), self.q, self.p, self.dim())
    }

    fn t_beta(&self, offset: usize) -> BlockRef {
        BlockRef::new(offset + self.rhs_beta + self.sol_beta * self.dim(), self.p, self.q, self.dim())
    }

    fn write_identities<T: Scalar>(&self, block: &mut [T]) {
        let d = self.dim();
        for i in 0..self.q {
            block[self.rhs_alpha + i + (self.sol_beta + i) * d] = T::one();
        }
        for i in 0..self.p {
            block[self.rhs_beta + i + (self.sol_alpha + i) * d] = T::one();
        }
    }
}

/// A coupling block with the layout its solve must follow.
#[derive(Debug, Clone, PartialEq)]
pub struct KBlock<T> {
    pub matrix: Mat<T>,
    pub layout: KLayout,
}

/// Arranges `T_α` (`q × p`) and `T_β` (`p × q`) as `variant` prescribes.
pub fn form_k_block<T: Scalar>(t_alpha: &Mat<T>, t_beta: &Mat<T>, variant: KVariant) -> Result<KBlock<T>> {
    if t_alpha.rows() != t_beta.cols() {
        return Err(Error::RankMismatch { left: t_alpha.rows(), right: t_beta.cols() });
    }
    if t_alpha.cols() != t_beta.rows() {
        return Err(Error::RankMismatch { left: t_alpha.cols(), right: t_beta.rows() });
    }
    let layout = KLayout::new(t_alpha.cols(), t_alpha.rows(), variant);
    let mut matrix = Mat::zeros(layout.dim(), layout.dim());
    layout.write_identities(matrix.as_mut_slice());
    matrix.set_block(layout.rhs_alpha, layout.sol_alpha, t_alpha);
    matrix.set_block(layout.rhs_beta, layout.sol_beta, t_beta);
    Ok(KBlock { matrix, layout })
}

/// Factored coupling blocks of one parent level.
#[derive(Debug, Clone)]
pub struct KLevel<T> {
    pub(crate) level: usize,
    pub(crate) layouts: Vec<KLayout>,
    pub(crate) offsets: Vec<usize>,
    pub(crate) data: Vec<T>,
    pub(crate) lu: LuBatch,
}

impl<T: Scalar> KLevel<T> {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn layouts(&self) -> &[KLayout] {
        &self.layouts
    }

    /// LU factors of node `k`'s block, packed column-major.
    pub fn factors(&self, k: usize) -> Mat<T> {
        let d = self.layouts[k].dim();
        Mat::from_block(&self.data, self.offsets[k], d, d, d)
    }

    pub fn pivots(&self, k: usize) -> &[usize] {
        self.lu.block_pivots(k)
    }

    pub fn scalars(&self) -> usize {
        self.data.len()
    }
}

/// Operation counts of one factorization, by phase. Per-level vectors are
/// indexed by parent level `0..L`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlopReport {
    pub leaf_lu: u64,
    pub leaf_solve: u64,
    pub t_gemm: u64,
    pub k_lu: u64,
    pub k_solve: u64,
    pub w_gemm: Vec<u64>,
    pub update_gemm: Vec<u64>,
}

impl FlopReport {
    fn new(depth: usize) -> Self {
        FlopReport { w_gemm: vec![0; depth], update_gemm: vec![0; depth], ..Default::default() }
    }

    /// `W` and update GEMMs at parent level `level`.
    pub fn coarse_gemm(&self, level: usize) -> u64 {
        self.w_gemm[level] + self.update_gemm[level]
    }

    pub fn total(&self) -> u64 {
        self.leaf_lu
            + self.leaf_solve
            + self.t_gemm
            + self.k_lu
            + self.k_solve
            + self.w_gemm.iter().sum::<u64>()
            + self.update_gemm.iter().sum::<u64>()
    }
}

#[derive(Debug, Clone)]
pub struct FactorOptions {
    pub variant: KVariant,
    pub executor: Executor,
    /// Parent levels below this one dispatch their GEMMs one by one
    /// through [`Executor::grouped_gemm_large`].
    pub crossover_level: usize,
    /// Split large grouped GEMMs across output columns.
    pub inner_parallel: bool,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions { variant: KVariant::default(), executor: Executor::serial(), crossover_level: 3, inner_parallel: false }
    }
}

impl FactorOptions {
    pub fn with_variant(variant: KVariant) -> Self {
        FactorOptions { variant, ..Default::default() }
    }

    pub fn with_executor(executor: Executor) -> Self {
        FactorOptions { executor, ..Default::default() }
    }
}

/// Product-form factorization; `Y` overwrites `U`.
#[derive(Debug, Clone)]
pub struct HodlrFactorization<T> {
    pub(crate) tree: ClusterTree,
    pub(crate) d_big: Vec<T>,
    pub(crate) d_lu: LuBatch,
    pub(crate) y: Vec<LevelPanel<T>>,
    pub(crate) v: Vec<LevelPanel<T>>,
    pub(crate) k: Vec<KLevel<T>>,
    pub(crate) variant: KVariant,
    pub(crate) options: FactorOptions,
    pub(crate) flops: FlopReport,
    pub(crate) workspace: usize,
}

pub(crate) fn dispatch_gemm<T: Scalar>(
    opts: &FactorOptions,
    level: usize,
    items: Vec<GemmItem>,
    op: Op,
    alpha: T,
    inputs: &[&[T]],
    beta: T,
    out: &mut [T],
) -> Result<u64> {
    if items.is_empty() {
        return Ok(0);
    }
    if level < opts.crossover_level {
        opts.executor.grouped_gemm_large(&items, op, alpha, inputs, beta, out, opts.inner_parallel)
    } else {
        opts.executor.batched_gemm(&GemmBatch::new(items), op, alpha, inputs, beta, out)
    }
}

/// Factors `h` in place.
pub fn factorize<T: Scalar>(h: HodlrMatrix<T>, options: &FactorOptions) -> Result<HodlrFactorization<T>> {
    let (tree, mut d_big, d_offsets, mut y, v) = h.into_parts();
    let ex = &options.executor;
    let depth = tree.depth();
    let mut flops = FlopReport::new(depth);

    let blocks = tree.leaves().iter().zip(&d_offsets).map(|(l, &o)| BlockRef::packed(o, l.len(), l.len())).collect();
    let d_lu = ex.batched_lu_factor(blocks, &mut d_big, Pivoting::Partial)?;
    if let Some((node, column)) = d_lu.first_singular() {
        return Err(Error::Singular { level: None, node, column });
    }
    flops.leaf_lu = d_lu.flops;

    for panel in y.iter_mut() {
        let level = panel.level();
        let shift = depth - level;
        let items: Vec<SolveItem> = tree
            .leaves()
            .iter()
            .enumerate()
            .filter_map(|(j, leaf)| {
                let a = j >> shift;
                let node = tree.node(level, a);
                (panel.ranks()[a] > 0).then(|| SolveItem { lu: j, rhs: panel.sub_block(a, leaf.start - node.start, leaf.len()) })
            })
            .collect();
        flops.leaf_solve += ex.batched_lu_solve(&d_lu, &d_big, &items, panel.data_mut())?;
    }

    // layouts and coarse column counts for every parent level
    let mut layouts = Vec::with_capacity(depth);
    for level in 0..depth {
        let (yc, vc) = (&y[level], &v[level]);
        let lv = (0..1usize << level)
            .map(|g| {
                let (p, q) = (yc.ranks()[2 * g], yc.ranks()[2 * g + 1]);
                if vc.ranks()[2 * g] != q {
                    return Err(Error::RankMismatch { left: q, right: vc.ranks()[2 * g] });
                }
                if vc.ranks()[2 * g + 1] != p {
                    return Err(Error::RankMismatch { left: p, right: vc.ranks()[2 * g + 1] });
                }
                Ok(KLayout::new(p, q, options.variant))
            })
            .collect::<Result<Vec<_>>>()?;
        layouts.push(lv);
    }
    let coarse_cols = |level: usize, g: usize| -> usize {
        (1..=level).map(|l| y[l - 1].ranks()[g >> (level - l)]).sum()
    };
    let workspace = (1..depth)
        .map(|level| (0..1usize << level).map(|g| layouts[level][g].dim() * coarse_cols(level, g)).sum::<usize>())
        .max()
        .unwrap_or(0);
    let mut w = vec![T::zero(); workspace];

    let mut k_levels = Vec::with_capacity(depth);
    for level in (0..depth).rev() {
        let c = level + 1;
        let lay = &layouts[level];
        let mut offsets = Vec::with_capacity(lay.len());
        let mut total = 0;
        for l in lay {
            offsets.push(total);
            total += l.dim() * l.dim();
        }
        let mut kdata = vec![T::zero(); total];
        for (l, &o) in lay.iter().zip(&offsets) {
            l.write_identities(&mut kdata[o..o + l.dim() * l.dim()]);
        }

        let (coarse, rest) = y.split_at_mut(c - 1);
        let (yc, vc) = (&rest[0], &v[c - 1]);

        let mut items = Vec::new();
        for (g, (l, &o)) in lay.iter().zip(&offsets).enumerate() {
            let (a, b) = (2 * g, 2 * g + 1);
            let ta = GemmItem { a: vc.block(a), b: yc.block(a).in_buffer(1), c: l.t_alpha(o) };
            let tb = GemmItem { a: vc.block(b), b: yc.block(b).in_buffer(1), c: l.t_beta(o) };
            items.extend([ta, tb].into_iter().filter(|it| it.c.rows > 0 && it.c.cols > 0));
        }
        flops.t_gemm +=
            dispatch_gemm(options, level, items, Op::ConjTrans, T::one(), &[vc.data(), yc.data()], T::zero(), &mut kdata)?;

        let blocks = lay.iter().zip(&offsets).map(|(l, &o)| BlockRef::packed(o, l.dim(), l.dim())).collect();
        let lu = ex.batched_lu_factor(blocks, &mut kdata, options.variant.pivoting())?;
        if let Some((node, column)) = lu.first_singular() {
            return Err(Error::Singular { level: Some(level), node, column });
        }
        flops.k_lu += lu.flops;

        if level >= 1 {
            // column layout of each W_γ: one chunk per coarser panel
            let mut w_off = Vec::with_capacity(lay.len());
            let mut chunk: Vec<Vec<usize>> = Vec::with_capacity(lay.len());
            let mut total = 0;
            for (g, l) in lay.iter().enumerate() {
                w_off.push(total);
                let mut cols = Vec::with_capacity(level);
                let mut acc = 0;
                for lp in 1..=level {
                    cols.push(acc);
                    acc += coarse[lp - 1].ranks()[g >> (level - lp)];
                }
                total += l.dim() * acc;
                chunk.push(cols);
            }
            let wcols = |g: usize| (1..=level).map(|lp| coarse[lp - 1].ranks()[g >> (level - lp)]).sum::<usize>();

            let nodes = tree.level(c);
            let mut items = Vec::new();
            for (g, l) in lay.iter().enumerate() {
                let d = l.dim();
                for lp in 1..=level {
                    let anc = g >> (level - lp);
                    let panel = &coarse[lp - 1];
                    let r = panel.ranks()[anc];
                    if r == 0 {
                        continue;
                    }
                    let start = tree.node(lp, anc).start;
                    let col0 = w_off[g] + chunk[g][lp - 1] * d;
                    for (child, rows, row0) in [(2 * g, l.q, l.rhs_alpha), (2 * g + 1, l.p, l.rhs_beta)] {
                        if rows == 0 {
                            continue;
                        }
                        let node = nodes[child];
                        items.push(GemmItem {
                            a: vc.block(child),
                            b: panel.sub_block(anc, node.start - start, node.len()).in_buffer(lp),
                            c: BlockRef::new(col0 + row0, rows, r, d),
                        });
                    }
                }
            }
            let mut inputs: Vec<&[T]> = Vec::with_capacity(level + 1);
            inputs.push(vc.data());
            inputs.extend(coarse.iter().map(|p| p.data()));
            let wf = dispatch_gemm(options, level, items, Op::ConjTrans, T::one(), &inputs, T::zero(), &mut w[..total])?;
            flops.w_gemm[level] += wf;

            let solves: Vec<SolveItem> = lay
                .iter()
                .enumerate()
                .filter(|(g, l)| l.dim() > 0 && wcols(*g) > 0)
                .map(|(g, l)| SolveItem { lu: g, rhs: BlockRef::new(w_off[g], l.dim(), wcols(g), l.dim()) })
                .collect();
            flops.k_solve += ex.batched_lu_solve(&lu, &kdata, &solves, &mut w[..total])?;

            for lp in 1..=level {
                let panel = &mut coarse[lp - 1];
                let mut items = Vec::new();
                for (g, l) in lay.iter().enumerate() {
                    let anc = g >> (level - lp);
                    let r = panel.ranks()[anc];
                    if r == 0 {
                        continue;
                    }
                    let d = l.dim();
                    let start = tree.node(lp, anc).start;
                    let col0 = w_off[g] + chunk[g][lp - 1] * d;
                    for (child, cols, row0) in [(2 * g, l.p, l.sol_alpha), (2 * g + 1, l.q, l.sol_beta)] {
                        if cols == 0 {
                            continue;
                        }
                        let node = nodes[child];
                        items.push(GemmItem {
                            a: yc.block(child),
                            b: BlockRef::new(col0 + row0, cols, r, d).in_buffer(1),
                            c: panel.sub_block(anc, node.start - start, node.len()),
                        });
                    }
                }
                let uf = dispatch_gemm(
                    options,
                    level,
                    items,
                    Op::NoTrans,
                    -T::one(),
                    &[yc.data(), &w[..total]],
                    T::one(),
                    panel.data_mut(),
                )?;
                flops.update_gemm[level] += uf;
            }
        }

        k_levels.push(KLevel { level, layouts: lay.clone(), offsets, data: kdata, lu });
    }
    k_levels.reverse();

    Ok(HodlrFactorization {
        tree,
        d_big,
        d_lu,
        y,
        v,
        k: k_levels,
        variant: options.variant,
        options: options.clone(),
        flops,
        workspace,
    })
}

impl<T: Scalar> HodlrFactorization<T> {
    pub fn tree(&self) -> &ClusterTree {
        &self.tree
    }

    pub fn n(&self) -> usize {
        self.tree.n()
    }

    pub fn field(&self) -> Field {
        T::FIELD
    }

    pub fn variant(&self) -> KVariant {
        self.variant
    }

    pub fn options(&self) -> &FactorOptions {
        &self.options
    }

    pub fn flop_report(&self) -> &FlopReport {
        &self.flops
    }

    /// Coupling blocks of parent level `level ∈ 0..L`.
    pub fn k_level(&self, level: usize) -> &KLevel<T> {
        &self.k[level]
    }

    /// `Y` panel of level `ℓ ∈ 1..=L`.
    pub fn y_panel(&self, level: usize) -> &LevelPanel<T> {
        &self.y[level - 1]
    }

    pub fn v_panel(&self, level: usize) -> &LevelPanel<T> {
        &self.v[level - 1]
    }

    /// Leaf LU factors, packed in leaf order.
    pub fn leaf_factors(&self) -> &[T] {
        &self.d_big
    }

    pub fn leaf_pivots(&self, k: usize) -> &[usize] {
        self.d_lu.block_pivots(k)
    }

    /// Scalars of the `W` workspace the factorization used.
    pub fn workspace_scalars(&self) -> usize {
        self.workspace
    }

    /// Scalars held: leaf factors, `Y` and `V` panels, coupling blocks.
    pub fn scalars(&self) -> usize {
        self.d_big.len()
            + self.y.iter().chain(&self.v).map(|p| p.data().len()).sum::<usize>()
            + self.k.iter().map(|k| k.scalars()).sum::<usize>()
    }

    pub fn bytes(&self) -> usize {
        self.scalars() * T::FIELD.scalar_bytes()
            + core::mem::size_of::<usize>()
                * (self.d_lu.pivots.len() + self.k.iter().map(|k| k.lu.pivots.len()).sum::<usize>())
    }

    /// Leaf block `k` rebuilt from its LU factors.
    pub fn leaf_block(&self, k: usize) -> Mat<T> {
        let b = self.d_lu.blocks[k];
        let f = Mat::from_block(&self.d_big, b.offset, b.rows, b.cols, b.ld);
        expand_lu(&f, self.d_lu.block_pivots(k))
    }

    /// The dense factors `[A^(L+1), A^(L), …, A^(1)]` whose product is the
    /// factored matrix: the block diagonal of leaf blocks, then for each
    /// level from the leaves up the block diagonal of
    /// `[[I, Y_α V_β*], [Y_β V_α*, I]]` over that level's sibling pairs.
    pub fn dense_factors(&self) -> Result<Vec<Mat<T>>> {
        let n = self.n();
        if n > DENSE_GUARD {
            return Err(Error::SizeGuard { n, limit: DENSE_GUARD });
        }
        let mut out = Vec::with_capacity(self.tree.depth() + 1);
        let mut d = Mat::zeros(n, n);
        for (k, leaf) in self.tree.leaves().iter().enumerate() {
            d.set_block(leaf.start, leaf.start, &self.leaf_block(k));
        }
        out.push(d);
        for level in (1..=self.tree.depth()).rev() {
            let mut f = Mat::identity(n);
            let (y, v) = (self.y_panel(level), self.v_panel(level));
            let nodes = self.tree.level(level);
            for g in 0..nodes.len() / 2 {
                let (a, b) = (2 * g, 2 * g + 1);
                f.set_block(nodes[a].start, nodes[b].start, &y.basis(a).mul_adjoint(&v.basis(b)));
                f.set_block(nodes[b].start, nodes[a].start, &y.basis(b).mul_adjoint(&v.basis(a)));
            }
            out.push(f);
        }
        Ok(out)
    }

    /// Dense product of [`dense_factors`](Self::dense_factors).
    pub fn expand_product(&self) -> Result<Mat<T>> {
        let factors = self.dense_factors()?;
        let mut it = factors.into_iter();
        let first = it.next().expect("leaf factor");
        Ok(it.fold(first, |acc, f| acc.matmul(&f)))
    }
}

/// `P⁻¹ L U` from packed LU factors and LAPACK-style interchanges.
pub(crate) fn expand_lu<T: Scalar>(f: &Mat<T>, pivots: &[usize]) -> Mat<T> {
    let n = f.rows();
    let l = Mat::from_fn(n, n, |i, j| match i.cmp(&j) {
        core::cmp::Ordering::Greater => f[(i, j)],
        core::cmp::Ordering::Equal => T::one(),
        core::cmp::Ordering::Less => T::zero(),
    });
    let u = Mat::from_fn(n, n, |i, j| if i <= j { f[(i, j)] } else { T::zero() });
    let mut a = l.matmul(&u);
    for (k, &p) in pivots.iter().enumerate().rev() {
        if p != k {
            for j in 0..n {
                let (x, y) = (a[(k, j)], a[(p, j)]);
                a[(k, j)] = y;
                a[(p, j)] = x;
            }
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compress::CompressionConfig;

    fn two_by_two() -> HodlrMatrix<f64> {
        let a = Mat::from_fn(2, 2, |i, j| if i == j { 2.0 } else { 1.0 });
        HodlrMatrix::assemble(&a, ClusterTree::new(2, 1).unwrap(), &CompressionConfig::default()).unwrap()
    }

    #[test]
    fn worked_two_by_two() {
        let f = factorize(two_by_two(), &FactorOptions::default()).unwrap();
        let y = f.y_panel(1);
        let v = f.v_panel(1);
        // Y = D⁻¹U; the product Y_α V_β* is basis-independent
        assert!((y.basis(0).mul_adjoint(&v.basis(1))[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((y.basis(1).mul_adjoint(&v.basis(0))[(0, 0)] - 0.5).abs() < 1e-15);
        let k = f.k_level(0);
        assert_eq!(k.layouts()[0].dim(), 2);
        let t_alpha = v.basis(0).adjoint().matmul(&y.basis(0))[(0, 0)];
        assert!((t_alpha - 0.5).abs() < 1e-15);
    }

    #[test]
    fn form_k_standard_and_empty() {
        let t = Mat::from_fn(1, 1, |_, _| 0.5f64);
        let k = form_k_block(&t, &t, KVariant::PivotedStandard).unwrap();
        assert_eq!(k.matrix.as_slice(), &[0.5, 1.0, 1.0, 0.5]);
        let e = Mat::<f64>::zeros(0, 0);
        assert_eq!(form_k_block(&e, &e, KVariant::PermutedRhs).unwrap().matrix.rows(), 0);
        let bad = Mat::<f64>::zeros(2, 1);
        assert!(matches!(form_k_block(&bad, &bad, KVariant::PivotedStandard), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn permuted_layouts() {
        let ta = Mat::from_fn(2, 1, |i, _| 1.0 + i as f64);
        let tb = Mat::from_fn(1, 2, |_, j| 3.0 + j as f64);
        let rhs = KLayout::new(1, 2, KVariant::PermutedRhs);
        let k = form_k_block(&ta, &tb, KVariant::PermutedRhs).unwrap().matrix;
        // [[I_p, T_β], [T_α, I_q]]
        assert_eq!(k[(0, 0)], 1.0);
        assert_eq!((k[(0, 1)], k[(0, 2)]), (3.0, 4.0));
        assert_eq!((k[(1, 0)], k[(2, 0)]), (1.0, 2.0));
        assert_eq!((rhs.rhs_alpha, rhs.rhs_beta, rhs.sol_alpha, rhs.sol_beta), (1, 0, 0, 1));
        let k = form_k_block(&ta, &tb, KVariant::PermutedSolution).unwrap().matrix;
        // [[I_q, T_α], [T_β, I_p]]
        assert_eq!((k[(0, 0)], k[(1, 1)], k[(2, 2)]), (1.0, 1.0, 1.0));
        assert_eq!((k[(0, 2)], k[(1, 2)]), (1.0, 2.0));
        assert_eq!((k[(2, 0)], k[(2, 1)]), (3.0, 4.0));
    }

    #[test]
    fn identity_factorization() {
        let id = Mat::<f64>::identity(40);
        let h = HodlrMatrix::assemble(&id, ClusterTree::new(40, 8).unwrap(), &CompressionConfig::default()).unwrap();
        let f = factorize(h, &FactorOptions::default()).unwrap();
        for k in 0..f.tree().num_leaves() {
            assert_eq!(f.leaf_block(k), Mat::identity(f.tree().leaves()[k].len()));
        }
        for l in 0..f.tree().depth() {
            assert!(f.k_level(l).layouts().iter().all(|k| k.dim() == 0));
        }
        assert_eq!(f.flop_report().w_gemm.iter().sum::<u64>(), 0);
    }

    #[test]
    fn singular_leaf_is_reported() {
        let mut a = Mat::<f64>::identity(8);
        a[(5, 5)] = 0.0;
        let h = HodlrMatrix::assemble(&a, ClusterTree::new(8, 2).unwrap(), &CompressionConfig::default()).unwrap();
        let err = factorize(h, &FactorOptions::default()).unwrap_err();
        assert_eq!(err, Error::Singular { level: None, node: 2, column: 1 });
    }

    #[test]
    fn variant_names() {
        for v in KVariant::ALL {
            assert_eq!(KVariant::parse(v.name()), Some(v));
        }
        assert_eq!(KVariant::parse("lu"), None);
    }
}
