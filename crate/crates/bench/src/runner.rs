//! Assemble, factor and solve one benchmark cell.

use std::time::Instant;

use hodlr::hodlr::Demoted;
use hodlr::oracle::relative_residual;
use hodlr::problems::{rng, uniform, HelmholtzCombinedField, LaplaceDoubleLayer, RpyOracle};
use hodlr::{factorize, ClusterTree, CompressionConfig, EntryOracle, FactorOptions, HodlrMatrix, Scalar, C32, C64};

use crate::config::{Cell, Precision, Problem};
use crate::record::Record;
use crate::BenchError;

/// Everything a run produced, beyond the record itself.
pub struct Outcome<T> {
    pub record: Record,
    pub matrix: HodlrMatrix<T>,
    pub solution: Vec<T>,
}

/// Storage the cell would need at rank `max_rank` (or the leaf size), before
/// assembling anything.
pub fn predicted_bytes(cell: &Cell) -> u64 {
    let scalar = match (cell.problem, cell.precision) {
        (Problem::Helmholtz, Precision::Double) => 16,
        (Problem::Helmholtz, Precision::Single) | (_, Precision::Double) => 8,
        (_, Precision::Single) => 4,
    };
    let tree_depth = ClusterTree::new(cell.n, cell.leaf_size).map_or(0, |t| t.depth()) as u64;
    let (n, m) = (cell.n as u64, cell.leaf_size.min(cell.n) as u64);
    let r = cell.max_rank.unwrap_or(cell.leaf_size).min(cell.n) as u64;
    scalar * (n * m + 2 * r * n * tree_depth)
}

/// Seeded right-hand side in the wide field.
pub fn rhs<W: Scalar>(n: usize, seed: u64) -> Vec<W> {
    let mut g = rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..n)
        .map(|_| {
            let re = uniform(&mut g);
            W::from_parts(re, if W::FIELD.is_complex() { uniform(&mut g) } else { 0.0 })
        })
        .collect()
}

struct Flusher(Vec<u8>);

impl Flusher {
    fn sweep(&mut self) {
        for x in self.0.iter_mut().step_by(64) {
            *x = x.wrapping_add(1);
        }
        std::hint::black_box(&self.0);
    }
}

fn check_budget(cell: &Cell, bytes: u64) -> Result<(), BenchError> {
    if bytes > cell.budget_bytes {
        return Err(BenchError::Budget { predicted: bytes, budget: cell.budget_bytes });
    }
    Ok(())
}

/// Runs a cell whose matrix is assembled from `oracle` and checked against
/// the double-precision `exact` oracle.
pub fn run_with<T, O, W>(cell: &Cell, oracle: &O, exact: &W) -> Result<Outcome<T>, BenchError>
where
    T: Scalar,
    O: EntryOracle<T>,
    W: EntryOracle<T::Wide>,
{
    check_budget(cell, predicted_bytes(cell))?;
    let executor = cell.executor.build();
    let tree = ClusterTree::new(cell.n, cell.leaf_size)?;
    let compression = CompressionConfig { tol: cell.tol, max_rank: cell.max_rank, method: cell.method, recompress: true };
    let h = HodlrMatrix::assemble_with(oracle, tree, &compression, &executor)?;
    check_budget(cell, h.storage_report().total_bytes() as u64)?;

    let options = FactorOptions { variant: cell.k_variant, executor: executor.clone(), ..Default::default() };
    let b_wide: Vec<T::Wide> = rhs(cell.n, cell.seed);
    let b: Vec<T> = b_wide.iter().map(|&w| T::from_wide(w)).collect();

    // one untimed warm-up pass, then `runs` timed ones
    let mut f = factorize(h.clone(), &options)?;
    let (mut x, mut stats) = f.solve_stats(&b)?;
    let mut flusher = Flusher(vec![0; cell.flush_bytes]);
    let mut t_f = 0.0;
    for _ in 0..cell.runs {
        let copy = h.clone();
        drop(f);
        flusher.sweep();
        let t = Instant::now();
        f = factorize(copy, &options)?;
        t_f += t.elapsed().as_secs_f64();
    }
    let mut t_s = 0.0;
    for _ in 0..cell.runs {
        flusher.sweep();
        let t = Instant::now();
        (x, stats) = f.solve_stats(&b)?;
        t_s += t.elapsed().as_secs_f64();
    }
    let relres = if cell.n <= cell.relres_max_n {
        let xw: Vec<T::Wide> = x.iter().map(|v| v.to_wide()).collect();
        Some(relative_residual(exact, &xw, &b_wide, &executor)?)
    } else {
        None
    };
    if relres.is_some_and(|r| !r.is_finite()) || x.iter().any(|v| !v.all_finite()) {
        return Err(BenchError::Numerical(hodlr::Error::Contract("solution is not finite")));
    }

    let record = Record {
        problem: cell.problem.name().to_owned(),
        n: cell.n,
        depth: h.depth(),
        leaf_size: cell.leaf_size,
        tol: cell.tol,
        precision: cell.precision.name().to_owned(),
        variant: cell.k_variant.name().to_owned(),
        t_f_seconds: t_f / cell.runs as f64,
        t_s_seconds: t_s / cell.runs as f64,
        mem_bytes: f.bytes() as u64,
        relres,
        flops_factor: f.flop_report().total(),
        flops_solve: stats.flops(),
        ranks: h.rank_profile(),
    };
    Ok(Outcome { record, matrix: h, solution: x })
}

/// Assembled matrix of any supported field.
pub enum AnyMatrix {
    Real32(HodlrMatrix<f32>),
    Real64(HodlrMatrix<f64>),
    Complex64(HodlrMatrix<C32>),
    Complex128(HodlrMatrix<C64>),
}

impl AnyMatrix {
    pub fn dump(&self) -> Vec<u8> {
        match self {
            AnyMatrix::Real32(h) => crate::binfmt::dump(h),
            AnyMatrix::Real64(h) => crate::binfmt::dump(h),
            AnyMatrix::Complex64(h) => crate::binfmt::dump(h),
            AnyMatrix::Complex128(h) => crate::binfmt::dump(h),
        }
    }
}

fn keep<T>(o: Outcome<T>, wrap: fn(HodlrMatrix<T>) -> AnyMatrix) -> (Record, AnyMatrix) {
    (o.record, wrap(o.matrix))
}

/// Builds the problem the cell names and runs it.
pub fn run_cell(cell: &Cell) -> Result<(Record, AnyMatrix), BenchError> {
    match cell.problem {
        Problem::Rpy => {
            let a = RpyOracle::uniform(cell.n, cell.seed)?;
            match cell.precision {
                Precision::Double => run_with::<f64, _, _>(cell, &a, &a).map(|o| keep(o, AnyMatrix::Real64)),
                Precision::Single => run_with::<f32, _, _>(cell, &Demoted(&a), &a).map(|o| keep(o, AnyMatrix::Real32)),
            }
        }
        Problem::Laplace => {
            let a = LaplaceDoubleLayer::default_star(cell.n)?;
            match cell.precision {
                Precision::Double => run_with::<f64, _, _>(cell, &a, &a).map(|o| keep(o, AnyMatrix::Real64)),
                Precision::Single => run_with::<f32, _, _>(cell, &Demoted(&a), &a).map(|o| keep(o, AnyMatrix::Real32)),
            }
        }
        Problem::Helmholtz => {
            let a = HelmholtzCombinedField::default_star(cell.n, cell.kappa, cell.eta)?;
            match cell.precision {
                Precision::Double => run_with::<C64, _, _>(cell, &a, &a).map(|o| keep(o, AnyMatrix::Complex128)),
                Precision::Single => run_with::<C32, _, _>(cell, &Demoted(&a), &a).map(|o| keep(o, AnyMatrix::Complex64)),
            }
        }
    }
}
