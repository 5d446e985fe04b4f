//! Batched dense kernels over blocks of flat column-major buffers.
//!
//! This is the layer the level-wise algorithms are written against. A batch
//! is a list of independent items, each addressing sub-blocks of shared
//! buffers through [`BlockRef`] descriptors `(buffer, offset, rows, cols,
//! ld)`. Three kernels are provided, mirroring the batched BLAS/LAPACK
//! interface:
//!
//! * [`Executor::batched_gemm`]: `C ← α op(A) B + β C` per item;
//! * [`Executor::batched_lu_factor`]: in-place LU with partial pivoting;
//! * [`Executor::batched_lu_solve`]: row-permute, forward and backward
//!   substitution on multi-column right-hand sides, in place.
//!
//! Per-item arithmetic runs in a fixed order and items never share output
//! memory (checked before dispatch), so the serial and threaded executors
//! produce bit-identical buffers. When every item of a GEMM batch has the
//! same shape and the offsets advance by constant strides the batch is
//! dispatched through the strided path, which skips per-item descriptor
//! validation; results are identical to the generic path.
//!
//! Every kernel returns the number of floating-point operations it executed
//! (a multiply-add counts as two).

use alloc::vec;
use alloc::vec::Vec;
use core::marker::PhantomData;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Strided view of a block inside one of the buffers passed to a kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockRef {
    /// Index into the input buffer list; ignored for outputs.
    pub buffer: usize,
    pub offset: usize,
    pub rows: usize,
    pub cols: usize,
    /// Distance between consecutive columns.
    pub ld: usize,
}

impl BlockRef {
    pub fn new(offset: usize, rows: usize, cols: usize, ld: usize) -> Self {
        BlockRef { buffer: 0, offset, rows, cols, ld }
    }

    /// Contiguous `rows × cols` block.
    pub fn packed(offset: usize, rows: usize, cols: usize) -> Self {
        Self::new(offset, rows, cols, rows)
    }

    pub fn in_buffer(mut self, buffer: usize) -> Self {
        self.buffer = buffer;
        self
    }

    /// Sub-block starting at (`row`, `col`) of this block.
    pub fn sub(&self, row: usize, col: usize, rows: usize, cols: usize) -> Self {
        debug_assert!(row + rows <= self.rows && col + cols <= self.cols);
        BlockRef { buffer: self.buffer, offset: self.offset + row + col * self.ld, rows, cols, ld: self.ld }
    }

    fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    /// One past the last addressed element.
    fn end(&self) -> usize {
        if self.is_empty() {
            self.offset
        } else {
            self.offset + (self.cols - 1) * self.ld + self.rows
        }
    }

    fn fits(&self, len: usize) -> bool {
        self.is_empty() || (self.ld >= self.rows && self.end() <= len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    NoTrans,
    ConjTrans,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GemmItem {
    pub a: BlockRef,
    pub b: BlockRef,
    pub c: BlockRef,
}

/// Constant-stride description of a uniform batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StridedGemm {
    pub count: usize,
    pub first: GemmItem,
    pub stride_a: usize,
    pub stride_b: usize,
    pub stride_c: usize,
}

impl StridedGemm {
    fn item(&self, i: usize) -> GemmItem {
        let mut it = self.first;
        it.a.offset += i * self.stride_a;
        it.b.offset += i * self.stride_b;
        it.c.offset += i * self.stride_c;
        it
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GemmBatch {
    items: Vec<GemmItem>,
    strided: Option<StridedGemm>,
}

impl GemmBatch {
    /// Builds a batch, detecting the constant-stride layout when present.
    pub fn new(items: Vec<GemmItem>) -> Self {
        let strided = detect_stride(&items);
        GemmBatch { items, strided }
    }

    /// Same batch, never dispatched through the strided path.
    pub fn generic(items: Vec<GemmItem>) -> Self {
        GemmBatch { items, strided: None }
    }

    pub fn items(&self) -> &[GemmItem] {
        &self.items
    }

    pub fn strided(&self) -> Option<&StridedGemm> {
        self.strided.as_ref()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

fn detect_stride(items: &[GemmItem]) -> Option<StridedGemm> {
    let first = *items.first()?;
    let shape = |b: &BlockRef| (b.buffer, b.rows, b.cols, b.ld);
    let step = |get: fn(&GemmItem) -> usize| -> Option<usize> {
        if items.len() < 2 {
            return Some(0);
        }
        let s = get(&items[1]).checked_sub(get(&items[0]))?;
        items.windows(2).all(|w| get(&w[1]).checked_sub(get(&w[0])) == Some(s)).then_some(s)
    };
    if !items.iter().all(|it| {
        shape(&it.a) == shape(&first.a) && shape(&it.b) == shape(&first.b) && shape(&it.c) == shape(&first.c)
    }) {
        return None;
    }
    let stride_a = step(|it| it.a.offset)?;
    let stride_b = step(|it| it.b.offset)?;
    let stride_c = step(|it| it.c.offset)?;
    Some(StridedGemm { count: items.len(), first, stride_a, stride_b, stride_c })
}

/// Result of a batched LU factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LuBatch {
    pub blocks: Vec<BlockRef>,
    /// Row-interchange vectors, LAPACK style: at step `k` rows `k` and
    /// `pivots[k]` were swapped. Concatenated over blocks.
    pub pivots: Vec<usize>,
    pub pivot_offsets: Vec<usize>,
    /// First pivot column found singular to working precision, per block.
    pub singular: Vec<Option<usize>>,
    pub flops: u64,
}

impl LuBatch {
    pub fn empty() -> Self {
        LuBatch { blocks: Vec::new(), pivots: Vec::new(), pivot_offsets: Vec::new(), singular: Vec::new(), flops: 0 }
    }

    pub fn block_pivots(&self, k: usize) -> &[usize] {
        let start = self.pivot_offsets[k];
        &self.pivots[start..start + self.blocks[k].rows]
    }

    pub fn first_singular(&self) -> Option<(usize, usize)> {
        self.singular.iter().enumerate().find_map(|(k, s)| s.map(|c| (k, c)))
    }
}

/// One right-hand-side block to solve against block `lu` of an [`LuBatch`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveItem {
    pub lu: usize,
    pub rhs: BlockRef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pivoting {
    Partial,
    /// No row interchanges; for coupling systems with identity diagonals.
    None,
}

/// Dispatches batched kernels serially or on a thread pool.
#[derive(Clone)]
pub struct Executor {
    kind: Kind,
}

#[derive(Clone)]
enum Kind {
    Serial,
    #[cfg(feature = "std")]
    Threads(std::sync::Arc<rayon::ThreadPool>, usize),
}

impl core::fmt::Debug for Executor {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match &self.kind {
            Kind::Serial => f.write_str("serial"),
            #[cfg(feature = "std")]
            Kind::Threads(_, k) => write!(f, "threads({k})"),
        }
    }
}

impl Default for Executor {
    fn default() -> Self {
        Executor::serial()
    }
}

impl Executor {
    pub fn serial() -> Self {
        Executor { kind: Kind::Serial }
    }

    /// Thread-pool executor with `threads` workers.
    #[cfg(feature = "std")]
    pub fn threads(threads: usize) -> Self {
        let threads = threads.max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .thread_name(|i| std::format!("hodlr-worker-{i}"))
            .build()
            .expect("thread pool");
        Executor { kind: Kind::Threads(std::sync::Arc::new(pool), threads) }
    }

    pub fn is_serial(&self) -> bool {
        matches!(self.kind, Kind::Serial)
    }

    /// Runs `f(0..count)` and returns the results in index order.
    pub fn map<R, F>(&self, count: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match &self.kind {
            Kind::Serial => (0..count).map(f).collect(),
            #[cfg(feature = "std")]
            Kind::Threads(pool, _) => {
                use rayon::prelude::*;
                pool.install(|| (0..count).into_par_iter().map(f).collect())
            }
        }
    }

    /// `C ← α op(A) B + β C` for every item. `a` and `b` blocks index into
    /// `inputs`; every `c` block lives in `out`.
    pub fn batched_gemm<T: Scalar>(
        &self,
        batch: &GemmBatch,
        op_a: Op,
        alpha: T,
        inputs: &[&[T]],
        beta: T,
        out: &mut [T],
    ) -> Result<u64> {
        if let Some(s) = batch.strided {
            if validate_strided(&s, op_a, inputs, out.len()).is_ok() {
                let ptr = SyncPtr(out.as_mut_ptr());
                let flops = self.map(s.count, |i| {
                    let it = s.item(i);
                    // SAFETY: bounds and output disjointness checked by validate_strided.
                    unsafe { run_gemm(op_a, alpha, inputs, beta, ptr, &it) }
                });
                return Ok(flops.iter().sum());
            }
        }
        validate_gemm(batch.items(), op_a, inputs, out.len())?;
        let ptr = SyncPtr(out.as_mut_ptr());
        let items = batch.items();
        let flops = self.map(items.len(), |i| {
            // SAFETY: validate_gemm checked bounds and pairwise disjoint outputs.
            unsafe { run_gemm(op_a, alpha, inputs, beta, ptr, &items[i]) }
        });
        Ok(flops.iter().sum())
    }

    /// Independent large GEMMs, one after another. With `inner_parallel`,
    /// each item's output columns are split across the pool; every output
    /// column is still computed by the same fixed-order loop, so results do
    /// not depend on the split.
    pub fn grouped_gemm_large<T: Scalar>(
        &self,
        items: &[GemmItem],
        op_a: Op,
        alpha: T,
        inputs: &[&[T]],
        beta: T,
        out: &mut [T],
        inner_parallel: bool,
    ) -> Result<u64> {
        validate_gemm(items, op_a, inputs, out.len())?;
        let ptr = SyncPtr(out.as_mut_ptr());
        let mut flops = 0u64;
        for it in items {
            if inner_parallel && !self.is_serial() && it.c.cols > 1 {
                let chunk = COLUMN_CHUNK;
                let pieces = it.c.cols.div_ceil(chunk);
                let parts = self.map(pieces, |p| {
                    let c0 = p * chunk;
                    let nc = chunk.min(it.c.cols - c0);
                    let sub = GemmItem { a: it.a, b: it.b.sub(0, c0, it.b.rows, nc), c: it.c.sub(0, c0, it.c.rows, nc) };
                    // SAFETY: column ranges of one validated output block are disjoint.
                    unsafe { run_gemm(op_a, alpha, inputs, beta, ptr, &sub) }
                });
                flops += parts.iter().sum::<u64>();
            } else {
                // SAFETY: validated above; items run sequentially.
                flops += unsafe { run_gemm(op_a, alpha, inputs, beta, ptr, it) };
            }
        }
        Ok(flops)
    }

    /// Factors every square block of `buf` in place.
    pub fn batched_lu_factor<T: Scalar>(&self, blocks: Vec<BlockRef>, buf: &mut [T], pivoting: Pivoting) -> Result<LuBatch> {
        for (i, b) in blocks.iter().enumerate() {
            if b.rows != b.cols {
                return Err(Error::Shape { index: i, reason: "LU block is not square" });
            }
            if !b.fits(buf.len()) {
                return Err(Error::Shape { index: i, reason: "LU block exceeds its buffer" });
            }
        }
        check_disjoint(blocks.iter().copied())?;
        let mut pivot_offsets = Vec::with_capacity(blocks.len());
        let mut total = 0usize;
        for b in &blocks {
            pivot_offsets.push(total);
            total += b.rows;
        }
        let mut pivots = vec![0usize; total];
        let ptr = SyncPtr(buf.as_mut_ptr());
        let piv = SyncPtr(pivots.as_mut_ptr());
        let results = self.map(blocks.len(), |i| {
            let b = blocks[i];
            // SAFETY: blocks validated in bounds and disjoint; pivot ranges are disjoint.
            unsafe {
                let mut m = BlockMut::from_raw(ptr.get(), b);
                let p = core::slice::from_raw_parts_mut(piv.get().add(pivot_offsets[i]), b.rows);
                lu_factor(&mut m, p, pivoting)
            }
        });
        let flops = results.iter().map(|r| r.0).sum();
        let singular = results.into_iter().map(|r| r.1).collect();
        Ok(LuBatch { blocks, pivots, pivot_offsets, singular, flops })
    }

    /// Solves in place for every item's right-hand side block in `rhs`.
    pub fn batched_lu_solve<T: Scalar>(&self, lu: &LuBatch, lu_buf: &[T], items: &[SolveItem], rhs: &mut [T]) -> Result<u64> {
        for (i, it) in items.iter().enumerate() {
            let Some(block) = lu.blocks.get(it.lu) else {
                return Err(Error::Shape { index: i, reason: "unknown LU block" });
            };
            if let Some(col) = lu.singular[it.lu] {
                return Err(Error::Singular { level: None, node: it.lu, column: col });
            }
            if it.rhs.rows != block.rows {
                return Err(Error::Shape { index: i, reason: "right-hand side height differs from LU order" });
            }
            if !it.rhs.fits(rhs.len()) {
                return Err(Error::Shape { index: i, reason: "right-hand side exceeds its buffer" });
            }
        }
        check_disjoint(items.iter().map(|it| it.rhs))?;
        let ptr = SyncPtr(rhs.as_mut_ptr());
        let flops = self.map(items.len(), |i| {
            let it = items[i];
            let f = BlockView::new(lu_buf, lu.blocks[it.lu]);
            // SAFETY: rhs blocks validated in bounds and pairwise disjoint.
            let mut x = unsafe { BlockMut::from_raw(ptr.get(), it.rhs) };
            lu_solve(&f, lu.block_pivots(it.lu), &mut x)
        });
        Ok(flops.iter().sum())
    }
}

const COLUMN_CHUNK: usize = 8;

#[derive(Clone, Copy)]
struct SyncPtr<T>(*mut T);
// SAFETY: the pointer is only dereferenced on validated, disjoint blocks.
unsafe impl<T: Send> Send for SyncPtr<T> {}
unsafe impl<T: Send> Sync for SyncPtr<T> {}

impl<T> SyncPtr<T> {
    #[inline(always)]
    fn get(self) -> *mut T {
        self.0
    }
}

fn op_shape(b: &BlockRef, op: Op) -> (usize, usize) {
    match op {
        Op::NoTrans => (b.rows, b.cols),
        Op::ConjTrans => (b.cols, b.rows),
    }
}

fn validate_item<T>(index: usize, it: &GemmItem, op: Op, inputs: &[&[T]], out_len: usize) -> Result<()> {
    let (m, k) = op_shape(&it.a, op);
    if it.b.rows != k {
        return Err(Error::Shape { index, reason: "inner dimensions of A and B differ" });
    }
    if it.c.rows != m || it.c.cols != it.b.cols {
        return Err(Error::Shape { index, reason: "C does not match op(A)·B" });
    }
    for (blk, name) in [(&it.a, "A exceeds its buffer"), (&it.b, "B exceeds its buffer")] {
        match inputs.get(blk.buffer) {
            Some(buf) if blk.fits(buf.len()) => {}
            _ => return Err(Error::Shape { index, reason: name }),
        }
    }
    if !it.c.fits(out_len) {
        return Err(Error::Shape { index, reason: "C exceeds the output buffer" });
    }
    Ok(())
}

fn validate_gemm<T>(items: &[GemmItem], op: Op, inputs: &[&[T]], out_len: usize) -> Result<()> {
    for (i, it) in items.iter().enumerate() {
        validate_item(i, it, op, inputs, out_len)?;
    }
    check_disjoint(items.iter().map(|it| it.c))
}

fn validate_strided<T>(s: &StridedGemm, op: Op, inputs: &[&[T]], out_len: usize) -> Result<()> {
    validate_item(0, &s.first, op, inputs, out_len)?;
    let last = s.item(s.count - 1);
    validate_item(s.count - 1, &last, op, inputs, out_len)?;
    let c = s.first.c;
    let span = c.end() - c.offset;
    if s.count > 1 && !c.is_empty() && s.stride_c < span {
        // interleaved outputs need the general check
        return check_disjoint((0..s.count).map(|i| s.item(i).c));
    }
    Ok(())
}

/// Rejects batches whose output blocks share memory.
fn check_disjoint(blocks: impl Iterator<Item = BlockRef>) -> Result<()> {
    let mut spans: Vec<(usize, usize, usize)> = Vec::new();
    for (idx, b) in blocks.enumerate() {
        if b.is_empty() {
            continue;
        }
        for j in 0..b.cols {
            let s = b.offset + j * b.ld;
            spans.push((s, s + b.rows, idx));
        }
    }
    spans.sort_unstable();
    for w in spans.windows(2) {
        if w[1].0 < w[0].1 && w[0].2 != w[1].2 {
            let (a, b) = (w[0].2.min(w[1].2), w[0].2.max(w[1].2));
            return Err(Error::OverlappingOutput { first: a, second: b });
        }
    }
    Ok(())
}

/// Read-only strided block.
pub(crate) struct BlockView<'a, T> {
    data: &'a [T],
    offset: usize,
    rows: usize,
    ld: usize,
}

impl<'a, T> BlockView<'a, T> {
    pub(crate) fn new(data: &'a [T], b: BlockRef) -> Self {
        BlockView { data, offset: b.offset, rows: b.rows, ld: b.ld }
    }

    #[inline(always)]
    fn col(&self, j: usize) -> &'a [T] {
        let s = self.offset + j * self.ld;
        &self.data[s..s + self.rows]
    }
}

/// Mutable strided block; hands out one column (or a disjoint pair) at a time.
pub(crate) struct BlockMut<'a, T> {
    ptr: *mut T,
    rows: usize,
    cols: usize,
    ld: usize,
    _marker: PhantomData<&'a mut T>,
}

impl<'a, T> BlockMut<'a, T> {
    /// # Safety
    /// `b` must lie inside the allocation behind `base`, and no other live
    /// reference may alias its columns.
    unsafe fn from_raw(base: *mut T, b: BlockRef) -> Self {
        BlockMut { ptr: base.add(b.offset), rows: b.rows, cols: b.cols, ld: b.ld, _marker: PhantomData }
    }

    #[inline(always)]
    fn col_mut(&mut self, j: usize) -> &mut [T] {
        assert!(j < self.cols);
        // SAFETY: column j lies inside the block; &mut self prevents aliasing.
        unsafe { core::slice::from_raw_parts_mut(self.ptr.add(j * self.ld), self.rows) }
    }

    #[inline(always)]
    fn col(&self, j: usize) -> &[T] {
        assert!(j < self.cols);
        // SAFETY: as above, shared access.
        unsafe { core::slice::from_raw_parts(self.ptr.add(j * self.ld), self.rows) }
    }

    /// Column `src` for reading and a different column `dst` for writing.
    #[inline(always)]
    fn col_pair(&mut self, src: usize, dst: usize) -> (&[T], &mut [T]) {
        assert!(src != dst && src < self.cols && dst < self.cols);
        // SAFETY: distinct columns of a block with ld ≥ rows never overlap.
        unsafe {
            (
                core::slice::from_raw_parts(self.ptr.add(src * self.ld), self.rows),
                core::slice::from_raw_parts_mut(self.ptr.add(dst * self.ld), self.rows),
            )
        }
    }
}

/// # Safety
/// `it` must be validated against `inputs` and the buffer behind `out`, and
/// its output block must not alias any concurrently running item.
unsafe fn run_gemm<T: Scalar>(op: Op, alpha: T, inputs: &[&[T]], beta: T, out: SyncPtr<T>, it: &GemmItem) -> u64 {
    let a = BlockView::new(inputs[it.a.buffer], it.a);
    let b = BlockView::new(inputs[it.b.buffer], it.b);
    let mut c = BlockMut::from_raw(out.0, it.c);
    gemm(op, alpha, &a, &b, beta, &mut c)
}

fn gemm<T: Scalar>(op: Op, alpha: T, a: &BlockView<T>, b: &BlockView<T>, beta: T, c: &mut BlockMut<T>) -> u64 {
    let (m, n) = (c.rows, c.cols);
    let k = b.rows;
    for j in 0..n {
        let cj = c.col_mut(j);
        if beta == T::zero() {
            cj.fill(T::zero());
        } else if beta != T::one() {
            for x in cj.iter_mut() {
                *x *= beta;
            }
        }
        let bj = b.col(j);
        match op {
            Op::NoTrans => {
                for (p, &bp) in bj.iter().enumerate() {
                    let t = alpha * bp;
                    for (ci, &ai) in cj.iter_mut().zip(a.col(p)) {
                        *ci += ai * t;
                    }
                }
            }
            Op::ConjTrans => {
                for (i, ci) in cj.iter_mut().enumerate() {
                    let mut acc = T::zero();
                    for (&ap, &bp) in a.col(i).iter().zip(bj) {
                        acc += ap.conj() * bp;
                    }
                    *ci += alpha * acc;
                }
            }
        }
    }
    2 * (m as u64) * (n as u64) * (k as u64)
}

/// Right-looking LU with LAPACK-style row interchanges. Returns the flop
/// count and the first singular pivot column, if any.
fn lu_factor<T: Scalar>(a: &mut BlockMut<T>, piv: &mut [usize], pivoting: Pivoting) -> (u64, Option<usize>) {
    let n = a.rows;
    let zero = <T::Real as Scalar>::zero();
    let guard = <T::Real as Float>::epsilon() * <T::Real as Scalar>::from_f64(n as f64);
    let colmax: Vec<T::Real> = (0..n).map(|j| a.col(j).iter().fold(zero, |m, x| Float::max(m, x.modulus()))).collect();
    let mut flops = 0u64;
    let mut singular = None;
    for k in 0..n {
        let p = match pivoting {
            Pivoting::Partial => {
                let ck = a.col(k);
                let mut best = k;
                let mut best_val = ck[k].modulus_sqr();
                for (i, x) in ck.iter().enumerate().skip(k + 1) {
                    let v = x.modulus_sqr();
                    if v > best_val {
                        best = i;
                        best_val = v;
                    }
                }
                best
            }
            Pivoting::None => k,
        };
        piv[k] = p;
        if p != k {
            for j in 0..n {
                a.col_mut(j).swap(k, p);
            }
        }
        let pivot = a.col(k)[k];
        let mag = pivot.modulus();
        if mag == zero || mag < guard * colmax[k] {
            singular.get_or_insert(k);
            if mag == zero {
                continue;
            }
        }
        let rem = (n - k - 1) as u64;
        {
            let ck = a.col_mut(k);
            for x in ck[k + 1..].iter_mut() {
                *x = *x / pivot;
            }
        }
        for j in k + 1..n {
            let (ck, cj) = a.col_pair(k, j);
            let akj = cj[k];
            if akj == T::zero() {
                continue;
            }
            for (x, &l) in cj[k + 1..].iter_mut().zip(&ck[k + 1..]) {
                *x -= l * akj;
            }
        }
        flops += rem + 2 * rem * rem;
    }
    (flops, singular)
}

/// Solves `P L U x = b` in place. Counts two operations per stored factor
/// entry per right-hand side (`2 n²` per column).
fn lu_solve<T: Scalar>(f: &BlockView<T>, piv: &[usize], x: &mut BlockMut<T>) -> u64 {
    let n = f.rows;
    for j in 0..x.cols {
        let xj = x.col_mut(j);
        for (k, &p) in piv.iter().enumerate() {
            if p != k {
                xj.swap(k, p);
            }
        }
        // unit lower
        for k in 0..n {
            let xk = xj[k];
            if xk == T::zero() {
                continue;
            }
            let ck = f.col(k);
            for (xi, &l) in xj[k + 1..].iter_mut().zip(&ck[k + 1..]) {
                *xi -= l * xk;
            }
        }
        // upper
        for k in (0..n).rev() {
            let ck = f.col(k);
            let xk = xj[k] / ck[k];
            xj[k] = xk;
            if xk == T::zero() {
                continue;
            }
            for (xi, &u) in xj[..k].iter_mut().zip(&ck[..k]) {
                *xi -= u * xk;
            }
        }
    }
    2 * (n as u64) * (n as u64) * (x.cols as u64)
}

/// Operation count of one `n × n` LU factorization as executed by the
/// batched kernel: `Σ_k (n−k−1) + 2 (n−k−1)²`.
pub fn lu_flops(n: usize) -> u64 {
    (0..n as u64).map(|k| {
        let r = n as u64 - k - 1;
        r + 2 * r * r
    })
    .sum()
}
