//! Reference computations, independent of the batched code paths.

use alloc::vec;
use alloc::vec::Vec;

use crate::batched::Executor;
use crate::dense::{norm2, Mat};
use crate::error::{Error, Result};
use crate::hodlr::{EntryOracle, HodlrMatrix, DENSE_GUARD};
use crate::scalar::{RealScalar, Scalar, C64};
use crate::solve::{lu_logdet, LogDet, Operator};

/// Dense LU with partial pivoting, row-major elimination on a copy.
#[derive(Debug, Clone)]
pub struct DenseLu<T> {
    lu: Mat<T>,
    pivots: Vec<usize>,
}

impl<T: Scalar> DenseLu<T> {
    pub fn new(a: &Mat<T>) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: a.cols() });
        }
        let mut lu = a.clone();
        let mut pivots = vec![0; n];
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if lu[(i, k)].modulus() > lu[(p, k)].modulus() {
                    p = i;
                }
            }
            pivots[k] = p;
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
            }
            let piv = lu[(k, k)];
            if piv == T::zero() {
                continue;
            }
            for i in k + 1..n {
                let l = lu[(i, k)] / piv;
                lu[(i, k)] = l;
                if l != T::zero() {
                    for j in k + 1..n {
                        let u = lu[(k, j)];
                        lu[(i, j)] -= l * u;
                    }
                }
            }
        }
        Ok(DenseLu { lu, pivots })
    }

    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.lu.rows();
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len() });
        }
        if let Some(k) = (0..n).find(|&k| self.lu[(k, k)] == T::zero()) {
            return Err(Error::Singular { level: None, node: 0, column: k });
        }
        let mut x = b.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            x.swap(k, p);
        }
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        Ok(x)
    }

    pub fn logdet(&self) -> LogDet {
        let mut acc = LogDet { log_abs: 0.0, phase: C64::new(1.0, 0.0) };
        let n = self.lu.rows();
        lu_logdet((0..n).map(|i| self.lu[(i, i)]), &self.pivots, &mut acc);
        acc
    }
}

/// Dense solve of `A x = b`; refuses `n` above the dense guard.
pub fn dense_solve<T: Scalar, O: EntryOracle<T>>(oracle: &O, b: &[T]) -> Result<Vec<T>> {
    let n = oracle.dim();
    if n > DENSE_GUARD {
        return Err(Error::SizeGuard { n, limit: DENSE_GUARD });
    }
    let a = Mat::from_fn(n, n, |i, j| oracle.entry(i, j));
    DenseLu::new(&a)?.solve(b)
}

pub fn dense_logdet<T: Scalar>(a: &Mat<T>) -> Result<LogDet> {
    Ok(DenseLu::new(a)?.logdet())
}

/// `A x` from entries, rows split across `executor`, never storing `A`.
pub fn oracle_matvec<T: Scalar, O: EntryOracle<T>>(oracle: &O, x: &[T], executor: &Executor) -> Result<Vec<T>> {
    let n = oracle.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    const ROWS: usize = 64;
    let chunks = executor.map(n.div_ceil(ROWS), |c| {
        (c * ROWS..n.min((c + 1) * ROWS))
            .map(|i| {
                let mut s = T::zero();
                for (j, &xj) in x.iter().enumerate() {
                    s += oracle.entry(i, j) * xj;
                }
                s
            })
            .collect::<Vec<T>>()
    });
    Ok(chunks.concat())
}

/// `‖b − A x‖ / ‖b‖` against the exact oracle.
pub fn relative_residual<T: Scalar, O: EntryOracle<T>>(oracle: &O, x: &[T], b: &[T], executor: &Executor) -> Result<f64> {
    let ax = oracle_matvec(oracle, x, executor)?;
    let r: Vec<T> = b.iter().zip(&ax).map(|(&bi, &ai)| bi - ai).collect();
    let bn = norm2(b).to_f64();
    let rn = norm2(&r).to_f64();
    Ok(if bn == 0.0 { rn } else { rn / bn })
}

/// Exact operator applied row-chunk by row-chunk from the entry oracle.
pub struct Streamed<'a, O> {
    pub oracle: &'a O,
    pub executor: Executor,
}

impl<'a, O> Streamed<'a, O> {
    pub fn new(oracle: &'a O, executor: Executor) -> Self {
        Streamed { oracle, executor }
    }
}

impl<T: Scalar, O: EntryOracle<T>> Operator<T> for Streamed<'_, O> {
    fn dim(&self) -> usize {
        self.oracle.dim()
    }

    fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        oracle_matvec(self.oracle, x, &self.executor)
    }
}

/// Solution of the extended system with auxiliary unknowns.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedSolution<T> {
    pub x: Vec<T>,
    /// `y_α = V_α* x(I_α)` for every non-root node, level by level, nodes in
    /// order.
    pub aux: Vec<T>,
    pub dim: usize,
}

/// Solves `A x = b` through the embedding where every off-diagonal product
/// `U_α V_β* x(I_β)` becomes `U_α y_β` with the extra equations
/// `V_β* x(I_β) − y_β = 0`. The enlarged matrix is sparse in structure but
/// is materialized and solved densely.
pub fn extended_sparse_solve<T: Scalar>(h: &HodlrMatrix<T>, b: &[T]) -> Result<ExtendedSolution<T>> {
    let n = h.n();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    let tree = h.tree();
    // offsets of y_α, sized by V_α's columns
    let mut aux_off = Vec::new();
    let mut total = n;
    for level in 1..=tree.depth() {
        let v = h.v_panel(level);
        let mut lv = Vec::with_capacity(v.ranks().len());
        for &r in v.ranks() {
            lv.push(total);
            total += r;
        }
        aux_off.push(lv);
    }
    if total > DENSE_GUARD {
        return Err(Error::SizeGuard { n: total, limit: DENSE_GUARD });
    }
    let mut e = Mat::zeros(total, total);
    for (k, leaf) in tree.leaves().iter().enumerate() {
        e.set_block(leaf.start, leaf.start, &h.diag_block(k));
    }
    for level in 1..=tree.depth() {
        let (u, v) = (h.u_panel(level), h.v_panel(level));
        let nodes = tree.level(level);
        for (a, node) in nodes.iter().enumerate() {
            let sib = a ^ 1;
            let ua = u.basis(a);
            e.set_block(node.start, aux_off[level - 1][sib], &ua);
            let va = v.basis(a).adjoint();
            let row = aux_off[level - 1][a];
            e.set_block(row, node.start, &va);
            for i in 0..va.rows() {
                e[(row + i, row + i)] = -T::one();
            }
        }
    }
    let mut rhs = b.to_vec();
    rhs.resize(total, T::zero());
    let sol = DenseLu::new(&e)?.solve(&rhs)?;
    Ok(ExtendedSolution { x: sol[..n].to_vec(), aux: sol[n..].to_vec(), dim: total })
}
