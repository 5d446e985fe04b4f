use hodlr::dense::{rel_diff, Mat};
use hodlr::factor::form_k_block;
use hodlr::oracle::DenseLu;
use hodlr::problems::{rng, uniform};
use hodlr::{factorize, ClusterTree, FactorOptions, HodlrMatrix, KVariant, LowRankFactor, Scalar, C64};
use nalgebra::{ComplexField, DMatrix};

struct Instance<T> {
    u_a: Mat<T>,
    v_a: Mat<T>,
    u_b: Mat<T>,
    v_b: Mat<T>,
}

impl<T: Scalar> Instance<T> {
    fn random(seed: u64) -> Self {
        let mut g = rng(seed);
        let mut pick = |k: usize| ((uniform(&mut g) + 1.0) * 0.5 * k as f64) as usize;
        let n: usize = 2 + pick(63);
        let (a, b) = (n.div_ceil(2), n / 2);
        let p = pick(9).min(b);
        let q = pick(9).min(b);
        let scale = 0.6 / (n as f64).sqrt();
        let mut sample = |r: usize, c: usize| {
            Mat::from_fn(r, c, |_, _| {
                let re = uniform(&mut g) * scale;
                T::from_parts(re, if T::FIELD.is_complex() { uniform(&mut g) * scale } else { 0.0 })
            })
        };
        Instance { u_a: sample(a, p), v_b: sample(b, p), u_b: sample(b, q), v_a: sample(a, q) }
    }

    fn n(&self) -> usize {
        self.u_a.rows() + self.u_b.rows()
    }

    /// `[[I, U_α V_β*], [U_β V_α*, I]]`
    fn dense(&self) -> Mat<T> {
        let a = self.u_a.rows();
        let mut m = Mat::identity(self.n());
        m.set_block(0, a, &self.u_a.mul_adjoint(&self.v_b));
        m.set_block(a, 0, &self.u_b.mul_adjoint(&self.v_a));
        m
    }

    /// `I - diag(U_α, U_β) K⁻¹ [[0, V_β*], [V_α*, 0]]` with the coupling block
    /// arranged as `variant` prescribes.
    fn woodbury_inverse(&self, variant: KVariant) -> Mat<T> {
        let (n, a) = (self.n(), self.u_a.rows());
        let kb = form_k_block(&self.v_a.adjoint().matmul(&self.u_a), &self.v_b.adjoint().matmul(&self.u_b), variant).unwrap();
        let l = kb.layout;
        let lu = DenseLu::new(&kb.matrix).unwrap();
        let mut inv = Mat::identity(n);
        for j in 0..n {
            let e: Vec<T> = (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect();
            let mut rhs = vec![T::zero(); l.dim()];
            rhs[l.rhs_alpha..l.rhs_alpha + l.q].copy_from_slice(&self.v_a.adjoint().matvec(&e[..a]));
            rhs[l.rhs_beta..l.rhs_beta + l.p].copy_from_slice(&self.v_b.adjoint().matvec(&e[a..]));
            let w = lu.solve(&rhs).unwrap();
            let top = self.u_a.matvec(&w[l.sol_alpha..l.sol_alpha + l.p]);
            let bottom = self.u_b.matvec(&w[l.sol_beta..l.sol_beta + l.q]);
            for (i, x) in top.into_iter().chain(bottom).enumerate() {
                inv[(i, j)] = inv[(i, j)] - x;
            }
        }
        inv
    }

    fn one_level(&self) -> HodlrMatrix<T> {
        let tree = ClusterTree::with_depth(self.n(), 1).unwrap();
        let ab = LowRankFactor::from_parts(self.u_a.clone(), self.v_b.clone()).unwrap();
        let ba = LowRankFactor::from_parts(self.u_b.clone(), self.v_a.clone()).unwrap();
        let diag = vec![Mat::identity(self.u_a.rows()), Mat::identity(self.u_b.rows())];
        HodlrMatrix::from_blocks(tree, diag, vec![vec![(ab, ba)]]).unwrap()
    }
}

fn explicit_inverse<T: Scalar + ComplexField>(m: &Mat<T>) -> Mat<T> {
    let n = m.rows();
    let inv = DMatrix::from_column_slice(n, n, m.as_slice()).try_inverse().unwrap();
    Mat::from_col_major(n, n, inv.as_slice().to_vec()).unwrap()
}

fn check<T: Scalar + ComplexField>(seed: u64) {
    let inst = Instance::<T>::random(seed);
    let want = explicit_inverse(&inst.dense());
    for v in KVariant::ALL {
        let err = rel_diff(inst.woodbury_inverse(v).as_slice(), want.as_slice());
        assert!(err <= 1e-12, "seed {seed} {v:?}: {err:e}");
        let f = factorize(inst.one_level(), &FactorOptions::with_variant(v)).unwrap();
        let got = f.solve_multi(&Mat::identity(inst.n())).unwrap();
        let err = rel_diff(got.as_slice(), want.as_slice());
        assert!(err <= 1e-12, "seed {seed} {v:?} hodlr: {err:e}");
    }
}

#[test]
fn hundred_instances() {
    for seed in 0..100 {
        if seed % 2 == 0 {
            check::<f64>(seed);
        } else {
            check::<C64>(seed);
        }
    }
}

#[test]
fn rank_zero_is_identity() {
    let inst = Instance::<f64> { u_a: Mat::zeros(3, 0), v_a: Mat::zeros(3, 0), u_b: Mat::zeros(2, 0), v_b: Mat::zeros(2, 0) };
    assert_eq!(inst.woodbury_inverse(KVariant::PivotedStandard), Mat::identity(5));
}
