use core::f64::consts::PI;

use hodlr::dense::{rel_diff, Mat};
use hodlr::oracle::{dense_solve, DenseLu};
use hodlr::problems::helmholtz::point_source;
use hodlr::problems::{rng, uniform, HelmholtzCombinedField, LaplaceDoubleLayer, RpyOracle};
use hodlr::{factorize, ClusterTree, CompressionConfig, EntryOracle, FactorOptions, HodlrMatrix, C64};

fn solve_hodlr<T: hodlr::Scalar, O: EntryOracle<T>>(oracle: &O, leaf: usize, tol: f64, b: &[T]) -> Vec<T> {
    let tree = ClusterTree::new(oracle.dim(), leaf).unwrap();
    let h = HodlrMatrix::assemble(oracle, tree, &CompressionConfig::with_tol(tol)).unwrap();
    factorize(h, &FactorOptions::default()).unwrap().solve(b).unwrap()
}

#[test]
fn rpy_matches_dense_solution() {
    let a = RpyOracle::uniform(1024, 3).unwrap();
    let mut g = rng(11);
    let b: Vec<f64> = (0..1024).map(|_| uniform(&mut g)).collect();
    let x = solve_hodlr(&a, 64, 1e-12, &b);
    let xd = dense_solve(&a, &b).unwrap();
    assert!(rel_diff(&x, &xd) < 1e-9, "{}", rel_diff(&x, &xd));
}

#[test]
fn rpy_ranks_stay_bounded() {
    let a = RpyOracle::uniform(1 << 13, 1).unwrap();
    let tree = ClusterTree::new(1 << 13, 64).unwrap();
    let h = HodlrMatrix::assemble(&a, tree, &CompressionConfig::with_tol(1e-12)).unwrap();
    let ranks = h.rank_profile();
    assert!(ranks.iter().all(|&r| r <= 96), "{ranks:?}");
}

#[test]
fn laplace_conditioning() {
    let a = LaplaceDoubleLayer::default_star(512).unwrap();
    let m = Mat::from_fn(512, 512, |i, j| a.entry(i, j));
    let s = hodlr::svd::svd(&m).s;
    let cond = s[0] / s[s.len() - 1];
    assert!(cond < 100.0, "{cond}");
}

#[test]
fn laplace_exterior_point_source() {
    let n = 512;
    let a = LaplaceDoubleLayer::default_star(n).unwrap();
    let src = [0.2, -0.1];
    let field = |x: [f64; 2]| ((x[0] - src[0]).hypot(x[1] - src[1])).ln() / (2.0 * PI);
    let f: Vec<f64> = a.contour.points.iter().map(|&x| field(x)).collect();
    let sigma = solve_hodlr(&a, 64, 1e-12, &f);
    for x in [[3.0, 0.5], [-2.5, -2.0], [0.0, 4.0]] {
        let u = a.evaluate(&sigma, x);
        assert!((u - field(x)).abs() < 1e-10 * field(x).abs().max(1.0), "{x:?}: {u} vs {}", field(x));
    }
}

#[test]
fn laplace_dense_agreement() {
    let a = LaplaceDoubleLayer::default_star(1024).unwrap();
    let b: Vec<f64> = (0..1024).map(|i| (i as f64 * 0.37).sin()).collect();
    let x = solve_hodlr(&a, 64, 1e-12, &b);
    let xd = dense_solve(&a, &b).unwrap();
    assert!(rel_diff(&x, &xd) < 1e-9, "{}", rel_diff(&x, &xd));
}

fn helmholtz_field_error(n: usize, kappa: f64) -> f64 {
    let a = HelmholtzCombinedField::default_star(n, kappa, kappa).unwrap();
    let src = [0.1, 0.2];
    let f: Vec<C64> = a.contour.points.iter().map(|&x| point_source(kappa, x, src)).collect();
    let sigma = solve_hodlr(&a, 64, 1e-12, &f);
    [[3.0, 0.5], [-2.5, -2.0], [0.0, 4.0]]
        .into_iter()
        .map(|x| {
            let want = point_source(kappa, x, src);
            (a.evaluate(&sigma, x) - want).norm() / want.norm()
        })
        .fold(0.0, f64::max)
}

// the omitted self-term limits the rule to roughly first order
#[test]
fn helmholtz_exterior_point_source() {
    let coarse = helmholtz_field_error(1024, 5.0);
    let fine = helmholtz_field_error(2048, 5.0);
    assert!(fine < 0.05, "{fine:e}");
    assert!(fine < 0.6 * coarse, "{coarse:e} -> {fine:e}");
}

#[test]
fn helmholtz_dense_agreement() {
    let a = HelmholtzCombinedField::default_star(512, 20.0, 20.0).unwrap();
    let mut g = rng(5);
    let b: Vec<C64> = (0..512).map(|_| C64::new(uniform(&mut g), uniform(&mut g))).collect();
    let x = solve_hodlr(&a, 64, 1e-12, &b);
    let m = Mat::from_fn(512, 512, |i, j| a.entry(i, j));
    let xd = DenseLu::new(&m).unwrap().solve(&b).unwrap();
    assert!(rel_diff(&x, &xd) < 1e-9, "{}", rel_diff(&x, &xd));
}
