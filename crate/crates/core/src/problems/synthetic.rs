//! Random matrices that are exactly HODLR with a prescribed rank.

use alloc::vec::Vec;

use num_traits::Float;

use super::{rng, uniform};
use crate::compress::LowRankFactor;
use crate::dense::Mat;
use crate::error::Result;
use crate::hodlr::HodlrMatrix;
use crate::scalar::Scalar;
use crate::tree::ClusterTree;

/// Random diagonal blocks shifted by `shift · I` and random rank-`rank`
/// off-diagonal factors (rank clipped to the block size). Entries are
/// uniform in `[-1, 1)` (both parts for complex fields), scaled by the
/// inverse square root of the block height. `shift` defaults to
/// `2 + rank · L`, which keeps the matrix well conditioned.
pub fn random_hodlr<T: Scalar>(tree: ClusterTree, rank: usize, shift: Option<f64>, seed: u64) -> Result<HodlrMatrix<T>> {
    let mut g = rng(seed);
    let mut sample = |scale: f64| {
        let re = uniform(&mut g) * scale;
        let im = if T::FIELD.is_complex() { uniform(&mut g) * scale } else { 0.0 };
        T::from_parts(re, im)
    };
    let shift = shift.unwrap_or(2.0 + (rank * tree.depth()) as f64);
    let diag: Vec<Mat<T>> = tree
        .leaves()
        .iter()
        .map(|l| {
            let m = l.len();
            let s = 1.0 / Float::sqrt(m as f64);
            let mut d = Mat::from_fn(m, m, |_, _| sample(s));
            for i in 0..m {
                d[(i, i)] += T::from_f64(shift);
            }
            d
        })
        .collect();
    let mut pairs = Vec::with_capacity(tree.depth());
    for level in 1..=tree.depth() {
        let nodes = tree.level(level);
        let mut lv = Vec::with_capacity(nodes.len() / 2);
        for k in 0..nodes.len() / 2 {
            let (a, b) = (nodes[2 * k].len(), nodes[2 * k + 1].len());
            let r = rank.min(a).min(b);
            let mut factor = |rows: usize, cols: usize| {
                let u = Mat::from_fn(rows, r, |_, _| sample(1.0 / Float::sqrt(rows as f64)));
                let v = Mat::from_fn(cols, r, |_, _| sample(1.0 / Float::sqrt(cols as f64)));
                LowRankFactor::from_parts(u, v)
            };
            let ab = factor(a, b)?;
            let ba = factor(b, a)?;
            lv.push((ab, ba));
        }
        pairs.push(lv);
    }
    HodlrMatrix::from_blocks(tree, diag, pairs)
}
