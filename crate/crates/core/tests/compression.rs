use hodlr::compress::relative_error;
use hodlr::dense::Mat;
use hodlr::problems::{rng, uniform};
use hodlr::svd::{relative_rank, svd};
use hodlr::{compress, recompress, CompressionConfig, IndexRange, LowRankFactor, Method, C64};
use proptest::prelude::*;

fn range(a: usize, b: usize) -> IndexRange {
    IndexRange::new(a, b).unwrap()
}

fn cfg(tol: f64, method: Method) -> CompressionConfig {
    CompressionConfig { tol, max_rank: None, method, recompress: true }
}

const METHODS: [Method; 3] = [Method::AcaPartial, Method::AcaRook, Method::DenseSvd];

#[test]
fn rank_one_and_zero() {
    for m in METHODS {
        let f = compress(|i, j| (i as f64 + 1.0) * (2.0 - j as f64 * 0.1), range(0, 40), range(40, 90), &cfg(1e-12, m)).unwrap();
        assert_eq!(f.rank(), 1, "{m:?}");
        let z = compress(|_, _| 0.0f64, range(0, 10), range(10, 20), &cfg(1e-12, m)).unwrap();
        assert_eq!(z.rank(), 0);
        assert_eq!((z.u.rows(), z.v.rows()), (10, 10));
    }
}

#[test]
fn cauchy_block_rank_matches_svd() {
    let kernel = |i: usize, j: usize| 1.0 / (1.0 + (i as f64 - j as f64 + 128.0).abs());
    let block = Mat::from_fn(64, 64, |i, j| kernel(i, j));
    let want = relative_rank(&svd(&block).s, 1e-10);
    for m in [Method::AcaPartial, Method::AcaRook] {
        let f = compress(kernel, range(0, 64), range(0, 64), &cfg(1e-10, m)).unwrap();
        assert!(f.rank().abs_diff(want) <= 1, "{m:?}: {} vs {want}", f.rank());
    }
}

#[test]
fn nan_is_rejected() {
    for m in METHODS {
        let r = compress(|i, j| if i == 3 && j == 4 { f64::NAN } else { 1.0 }, range(0, 8), range(0, 8), &cfg(1e-8, m));
        assert!(r.is_err(), "{m:?}");
    }
}

#[test]
fn rank_cap_marks_truncation() {
    let kernel = |i: usize, j: usize| 1.0 / (1.0 + (i as f64 - j as f64).abs() + 30.0);
    let c = CompressionConfig { tol: 1e-14, max_rank: Some(2), method: Method::AcaRook, recompress: true };
    let f = compress(kernel, range(0, 50), range(60, 110), &c).unwrap();
    assert_eq!(f.rank(), 2);
    assert!(f.truncated);
}

#[test]
fn recompress_examples() {
    let mut g = rng(21);
    let mut sample = |r: usize, c: usize| Mat::from_fn(r, c, |_, _| uniform(&mut g));
    let (u, v) = (sample(30, 8), sample(20, 8));
    let dense = u.mul_adjoint(&v);
    let pad_u = Mat::from_fn(30, 16, |i, j| if j < 8 { u[(i, j)] } else { u[(i, j - 8)] * 0.5 });
    let pad_v = Mat::from_fn(20, 16, |i, j| if j < 8 { v[(i, j)] * 0.5 } else { v[(i, j - 8)] });
    let padded = LowRankFactor::from_parts(pad_u, pad_v).unwrap();
    let r = recompress(&padded, 1e-12);
    assert_eq!(r.rank(), 8);
    assert!(relative_error(&r, &dense) < 1e-12);

    let dup = LowRankFactor::from_parts(Mat::from_fn(10, 2, |i, _| i as f64), Mat::from_fn(6, 2, |i, j| (i + j) as f64)).unwrap();
    assert!(recompress(&dup, 1e-14).rank() <= 1);

    let q = Mat::from_fn(12, 3, |i, j| if i == j { 1.0 } else { 0.0 });
    let ortho = LowRankFactor::from_parts(q.clone(), Mat::from_fn(12, 3, |i, j| if i == j { (3 - j) as f64 } else { 0.0 })).unwrap();
    assert_eq!(recompress(&ortho, 1e-15).rank(), 3);
}

fn smooth_block(rows: usize, cols: usize, gap: f64, complex: bool) -> impl Fn(usize, usize) -> C64 {
    move |i, j| {
        let d = gap + (i as f64 - j as f64 - rows as f64).abs() / (rows + cols) as f64;
        let re = 1.0 / d;
        C64::new(re, if complex { (i as f64 * 0.1).sin() / d } else { 0.0 })
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn aca_meets_tolerance(rows in 4usize..128, cols in 4usize..128, gap in 0.05f64..2.0, k in 3i32..12, complex in any::<bool>(), rook in any::<bool>()) {
        let tol = 10f64.powi(-k);
        let f = smooth_block(rows, cols, gap, complex);
        let block = Mat::from_fn(rows, cols, &f);
        let method = if rook { Method::AcaRook } else { Method::AcaPartial };
        let lr = compress(&f, range(0, rows), range(0, cols), &cfg(tol, method)).unwrap();
        prop_assert!(lr.rank() <= rows.min(cols));
        prop_assert!(relative_error(&lr, &block) <= 10.0 * tol, "{} > 10 * {tol}", relative_error(&lr, &block));
        let exact = compress(&f, range(0, rows), range(0, cols), &cfg(tol, Method::DenseSvd)).unwrap();
        prop_assert!(relative_error(&exact, &block) <= tol * 1.0001 + 1e-15);
    }

    #[test]
    fn tighter_tolerance_never_lowers_rank(rows in 8usize..96, gap in 0.05f64..1.0, k in 2i32..10) {
        let f = smooth_block(rows, rows, gap, false);
        let loose = compress(|i, j| f(i, j).re, range(0, rows), range(0, rows), &cfg(10f64.powi(-k), Method::DenseSvd)).unwrap();
        let tight = compress(|i, j| f(i, j).re, range(0, rows), range(0, rows), &cfg(10f64.powi(-k - 1), Method::DenseSvd)).unwrap();
        prop_assert!(tight.rank() >= loose.rank());
    }
}
