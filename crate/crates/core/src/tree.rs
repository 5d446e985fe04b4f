//! Perfect binary cluster tree over consecutive index ranges.
//!
//! Level `ℓ` holds exactly `2^ℓ` ranges in left-to-right order; node `k` at
//! level `ℓ` has children `2k` and `2k + 1` at level `ℓ + 1`. Indices are
//! 0-based and ranges are half-open, so a leaf written `I = 101:200` in
//! 1-based inclusive notation is `[100, 200)` here.

use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};

/// Half-open, nonempty index range `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexRange {
    pub start: usize,
    pub end: usize,
}

impl IndexRange {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        if start < end {
            Ok(IndexRange { start, end })
        } else {
            Err(Error::Contract("index ranges must be nonempty"))
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    /// Always false; kept for API symmetry with `len`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn range(&self) -> Range<usize> {
        self.start..self.end
    }

    /// Ceil-left bisection: the left half receives `ceil(len / 2)` indices.
    fn bisect(self) -> (IndexRange, IndexRange) {
        let mid = self.start + self.len().div_ceil(2);
        (
            IndexRange { start: self.start, end: mid },
            IndexRange { start: mid, end: self.end },
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterTree {
    n: usize,
    levels: Vec<Vec<IndexRange>>,
}

impl ClusterTree {
    /// Tree whose leaves have at most `leaf_size` indices.
    ///
    /// `L = max(0, ceil(log2(n / leaf_size)))`, clamped so that every leaf
    /// stays nonempty.
    pub fn new(n: usize, leaf_size: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Contract("matrix dimension must be positive"));
        }
        if leaf_size == 0 {
            return Err(Error::Contract("leaf size must be positive"));
        }
        // smallest L with ceil(n / 2^L) <= leaf_size
        let mut depth = 0usize;
        while n.div_ceil(1usize << depth) > leaf_size {
            depth += 1;
        }
        Self::with_depth(n, depth.min(max_depth(n)))
    }

    /// Tree with exactly `depth + 1` levels (`depth` is `L`).
    pub fn with_depth(n: usize, depth: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Contract("matrix dimension must be positive"));
        }
        if depth > max_depth(n) {
            return Err(Error::Contract("depth leaves empty leaves"));
        }
        let mut levels = Vec::with_capacity(depth + 1);
        levels.push(alloc::vec![IndexRange { start: 0, end: n }]);
        for _ in 0..depth {
            let prev = levels.last().expect("root level exists");
            let mut next = Vec::with_capacity(prev.len() * 2);
            for r in prev {
                let (a, b) = r.bisect();
                next.push(a);
                next.push(b);
            }
            levels.push(next);
        }
        Ok(ClusterTree { n, levels })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// `L`: index of the leaf level.
    #[inline]
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Ranges at `level`, left to right.
    pub fn level(&self, level: usize) -> &[IndexRange] {
        &self.levels[level]
    }

    #[inline]
    pub fn node(&self, level: usize, k: usize) -> IndexRange {
        self.levels[level][k]
    }

    pub fn leaves(&self) -> &[IndexRange] {
        self.levels.last().expect("root level exists")
    }

    pub fn num_leaves(&self) -> usize {
        self.leaves().len()
    }

    /// Largest leaf length (`m` in the complexity model).
    pub fn max_leaf_size(&self) -> usize {
        self.leaves().iter().map(IndexRange::len).max().unwrap_or(0)
    }

    /// One `(left, right)` pair per parent at `level − 1`, in parent order.
    pub fn sibling_pairs(&self, level: usize) -> Result<Vec<(IndexRange, IndexRange)>> {
        if level == 0 || level > self.depth() {
            return Err(Error::LevelOutOfRange { level, depth: self.depth() });
        }
        Ok(self.levels[level].chunks_exact(2).map(|p| (p[0], p[1])).collect())
    }

    /// Index of the ancestor at `ancestor_level` of node `k` at `level`.
    #[inline]
    pub fn ancestor(&self, level: usize, k: usize, ancestor_level: usize) -> usize {
        debug_assert!(ancestor_level <= level);
        k >> (level - ancestor_level)
    }
}

/// Deepest tree whose smallest (floor-split) leaf is still nonempty.
fn max_depth(n: usize) -> usize {
    (usize::BITS - 1 - n.leading_zeros()) as usize
}
