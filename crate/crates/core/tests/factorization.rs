use hodlr::batched::lu_flops;
use hodlr::dense::{rel_diff, Mat};
use hodlr::factor::form_k_block;
use hodlr::oracle::DenseLu;
use hodlr::problems::{random_hodlr, RpyOracle};
use hodlr::{factorize, ClusterTree, CompressionConfig, Error, Executor, FactorOptions, HodlrFactorization, HodlrMatrix, KVariant, Scalar, C64};

fn uniform_instance<T: Scalar>(leaf: usize, rank: usize, depth: usize, seed: u64) -> HodlrMatrix<T> {
    let tree = ClusterTree::with_depth(leaf << depth, depth).unwrap();
    random_hodlr(tree, rank, None, seed).unwrap()
}

fn rel_fro<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> f64 {
    rel_diff(a.as_slice(), b.as_slice())
}

#[test]
fn identity_has_trivial_factors() {
    let id = Mat::<f64>::identity(64);
    let h = HodlrMatrix::assemble(&id, ClusterTree::new(64, 8).unwrap(), &CompressionConfig::default()).unwrap();
    assert!(h.rank_profile().iter().all(|&r| r == 0));
    let f = factorize(h, &FactorOptions::default()).unwrap();
    for k in 0..8 {
        assert_eq!(f.leaf_block(k), Mat::identity(8));
    }
    for level in 0..3 {
        assert!(f.k_level(level).layouts().iter().all(|l| l.dim() == 0));
    }
    assert_eq!(f.flop_report().t_gemm + f.flop_report().w_gemm.iter().sum::<u64>(), 0);
}

#[test]
fn worked_two_by_two() {
    let a = Mat::from_fn(2, 2, |i, j| if i == j { 2.0f64 } else { 1.0 });
    let h = HodlrMatrix::assemble(&a, ClusterTree::new(2, 1).unwrap(), &CompressionConfig::default()).unwrap();
    // sign of the stored bases is arbitrary; the products are not
    let (u, v) = (h.u_panel(1).basis(0)[(0, 0)], h.v_panel(1).basis(1)[(0, 0)]);
    assert_eq!(u * v, 1.0);
    let f = factorize(h, &FactorOptions::default()).unwrap();
    for k in 0..2 {
        let y = f.y_panel(1).basis(k)[(0, 0)];
        let v = f.v_panel(1).basis(k)[(0, 0)];
        assert!((y * v - 0.5).abs() < 1e-15, "Y_{k} V_{k} = {}", y * v);
    }
    let t = Mat::from_fn(1, 1, |_, _| 0.5);
    let k = form_k_block(&t, &t, KVariant::PivotedStandard).unwrap();
    assert_eq!(k.matrix.as_slice(), &[0.5, 1.0, 1.0, 0.5]);
    assert_eq!(f.solve(&[3.0, 3.0]).unwrap(), vec![1.0, 1.0]);
}

#[test]
fn k_block_shapes() {
    let z = Mat::<f64>::zeros(0, 0);
    assert_eq!(form_k_block(&z, &z, KVariant::PermutedRhs).unwrap().matrix.rows(), 0);
    let bad = form_k_block(&Mat::<f64>::zeros(2, 3), &Mat::zeros(2, 2), KVariant::PivotedStandard);
    assert!(matches!(bad, Err(Error::RankMismatch { .. })));
    let ta = Mat::from_fn(2, 3, |i, j| (i + 2 * j) as f64);
    let tb = Mat::from_fn(3, 2, |i, j| (3 * i + j) as f64 - 4.0);
    let blocks: Vec<_> = KVariant::ALL.iter().map(|&v| form_k_block(&ta, &tb, v).unwrap()).collect();
    // all three arrangements are row/column permutations of one system
    let rhs = [1.0, -2.0, 0.5, 3.0, 0.25];
    let mut sols = Vec::new();
    for kb in &blocks {
        let l = kb.layout;
        let mut b = [0.0; 5];
        b[l.rhs_alpha..l.rhs_alpha + l.q].copy_from_slice(&rhs[..2]);
        b[l.rhs_beta..l.rhs_beta + l.p].copy_from_slice(&rhs[2..]);
        let w = DenseLu::new(&kb.matrix).unwrap().solve(&b).unwrap();
        let mut s = w[l.sol_alpha..l.sol_alpha + l.p].to_vec();
        s.extend_from_slice(&w[l.sol_beta..l.sol_beta + l.q]);
        sols.push(s);
    }
    for s in &sols[1..] {
        assert!(rel_diff(s, &sols[0]) < 1e-13);
    }
}

#[test]
fn product_form_reconstructs_rpy() {
    let a = RpyOracle::uniform(512, 2).unwrap();
    let h = HodlrMatrix::assemble(&a, ClusterTree::new(512, 64).unwrap(), &CompressionConfig::with_tol(1e-12)).unwrap();
    assert_eq!(h.depth(), 3);
    let dense = h.reconstruct_dense().unwrap();
    for v in KVariant::ALL {
        let f = factorize(h.clone(), &FactorOptions::with_variant(v)).unwrap();
        let err = rel_fro(&f.expand_product().unwrap(), &dense);
        assert!(err < 1e-11, "{v:?}: {err:e}");
    }
}

#[test]
fn product_form_complex_ragged() {
    let h = random_hodlr::<C64>(ClusterTree::new(300, 20).unwrap(), 5, None, 8).unwrap();
    let dense = h.reconstruct_dense().unwrap();
    let f = factorize(h, &FactorOptions::default()).unwrap();
    assert!(rel_fro(&f.expand_product().unwrap(), &dense) < 1e-12);
}

#[test]
fn variants_agree() {
    for seed in 0..6 {
        let h = random_hodlr::<f64>(ClusterTree::new(200 + 37 * seed as usize, 16).unwrap(), 1 + seed as usize, None, seed).unwrap();
        let b: Vec<f64> = (0..h.n()).map(|i| ((i * 7 + 3) % 11) as f64 - 5.0).collect();
        let xs: Vec<Vec<f64>> =
            KVariant::ALL.iter().map(|&v| factorize(h.clone(), &FactorOptions::with_variant(v)).unwrap().solve(&b).unwrap()).collect();
        for x in &xs[1..] {
            assert!(rel_diff(x, &xs[0]) < 1e-12, "seed {seed}: {:e}", rel_diff(x, &xs[0]));
        }
    }
}

#[test]
fn flop_counts_match_model() {
    let (m, r) = (64usize, 8usize);
    for depth in [2usize, 3, 4] {
        let n = m << depth;
        let leaves = 1u64 << depth;
        let h = uniform_instance::<f64>(m, r, depth, depth as u64);
        let f = factorize(h, &FactorOptions::default()).unwrap();
        let rep = f.flop_report();
        for level in 0..depth {
            assert_eq!(rep.coarse_gemm(level), (4 * r * r * n * level) as u64, "L={depth} level {level}");
        }
        assert_eq!(rep.leaf_lu, leaves * lu_flops(m));
        assert_eq!(rep.leaf_solve, (2 * m * m * r * depth) as u64 * leaves);
        assert_eq!(rep.t_gemm, (2 * r * r * n * depth) as u64);

        let b = vec![1.0; n];
        let (_, stats) = f.solve_stats(&b).unwrap();
        assert_eq!(stats.flops(), (2 * m * n + 4 * r * n * depth) as u64);
        assert_eq!(stats.levels_visited, depth);
    }
    let h = HodlrMatrix::assemble(&Mat::<f64>::identity(128), ClusterTree::new(128, 128).unwrap(), &CompressionConfig::default()).unwrap();
    let f = factorize(h, &FactorOptions::default()).unwrap();
    assert_eq!(f.flop_report().total(), lu_flops(128));
}

#[test]
fn storage_matches_model() {
    let h = uniform_instance::<f64>(64, 8, 4, 1);
    let s = h.storage_report();
    assert_eq!((s.diagonal_scalars, s.bases_scalars()), (65536, 65536));
    let shape = s.uniform.unwrap();
    assert_eq!(s.diagonal_scalars, shape.predicted_diagonal());
    assert_eq!(s.bases_scalars(), shape.predicted_bases());
    assert_eq!(s.factor_scalars(), shape.predicted_factor());
    assert_eq!(s.total_bytes(), 131072 * 8);

    let zero = HodlrMatrix::assemble(&Mat::<f32>::identity(100), ClusterTree::new(100, 10).unwrap(), &CompressionConfig::default()).unwrap();
    assert_eq!(zero.storage_report().bytes_bases(), 0);
    let flat = HodlrMatrix::assemble(&Mat::<f64>::identity(50), ClusterTree::new(50, 64).unwrap(), &CompressionConfig::default()).unwrap();
    assert_eq!(flat.storage_report().diagonal_scalars, 2500);
    assert_eq!(flat.storage_report().bases_scalars(), 0);
}

#[test]
fn singular_blocks_are_located() {
    let mut a = Mat::<f64>::identity(8);
    a[(5, 5)] = 0.0;
    let h = HodlrMatrix::assemble(&a, ClusterTree::new(8, 2).unwrap(), &CompressionConfig::default()).unwrap();
    assert_eq!(factorize(h, &FactorOptions::default()).unwrap_err(), Error::Singular { level: None, node: 2, column: 1 });

    // [[1,1],[1,1]] has regular leaves and a singular coupling block
    let ones = Mat::from_fn(2, 2, |_, _| 1.0f64);
    let h = HodlrMatrix::assemble(&ones, ClusterTree::new(2, 1).unwrap(), &CompressionConfig::default()).unwrap();
    let err = factorize(h, &FactorOptions::default()).unwrap_err();
    assert!(matches!(err, Error::Singular { level: Some(0), node: 0, .. }), "{err:?}");
}

fn same_factors<T: Scalar>(a: &HodlrFactorization<T>, b: &HodlrFactorization<T>) {
    assert_eq!(a.leaf_factors(), b.leaf_factors());
    for level in 1..=a.tree().depth() {
        assert_eq!(a.y_panel(level).data(), b.y_panel(level).data());
        let (ka, kb) = (a.k_level(level - 1), b.k_level(level - 1));
        for g in 0..ka.layouts().len() {
            assert_eq!(ka.factors(g), kb.factors(g));
            assert_eq!(ka.pivots(g), kb.pivots(g));
        }
    }
}

#[test]
fn executors_are_bit_identical() {
    let a = RpyOracle::uniform(1024, 9).unwrap();
    let serial = HodlrMatrix::assemble_with(&a, ClusterTree::new(1024, 32).unwrap(), &CompressionConfig::with_tol(1e-10), &Executor::serial()).unwrap();
    let threaded = HodlrMatrix::assemble_with(&a, ClusterTree::new(1024, 32).unwrap(), &CompressionConfig::with_tol(1e-10), &Executor::threads(4)).unwrap();
    assert_eq!(serial.d_big(), threaded.d_big());
    for (x, y) in serial.u_panels().iter().zip(threaded.u_panels()) {
        assert_eq!(x.data(), y.data());
    }
    let b: Vec<f64> = (0..1024).map(|i| (i as f64).cos()).collect();
    for v in KVariant::ALL {
        for inner in [false, true] {
            let base = FactorOptions { variant: v, ..Default::default() };
            let par = FactorOptions { variant: v, executor: Executor::threads(4), inner_parallel: inner, crossover_level: 2 };
            let (f1, f2) = (factorize(serial.clone(), &base).unwrap(), factorize(serial.clone(), &par).unwrap());
            same_factors(&f1, &f2);
            assert_eq!(f1.solve(&b).unwrap(), f2.solve(&b).unwrap());
            assert_eq!(f1.logdet(), f2.logdet());
        }
    }
}
