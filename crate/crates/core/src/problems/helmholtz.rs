//! Exterior Helmholtz Dirichlet problem, combined-field formulation.
//!
//! `½ σ(x) + ∫ (d_κ(x, y) + iη s_κ(x, y)) σ(y) ds(y) = f(x)` with
//! `s_κ(x, y) = (i/4) H_0(κ|x − y|)` and `d_κ = n(y)·∇_y s_κ`. Diagonal
//! kernel terms are dropped (punctured trapezoidal rule), so the scheme is
//! low order near the log singularity of `s_κ`.

use num_traits::Float;

use super::bessel::{hankel1_0, hankel1_01};
use super::contour::Contour;
use crate::error::{Error, Result};
use crate::hodlr::EntryOracle;
use crate::scalar::C64;

/// Fundamental solution `(i/4) H_0(κ|x − z|)`.
pub fn point_source(kappa: f64, x: [f64; 2], z: [f64; 2]) -> C64 {
    let r = Float::hypot(x[0] - z[0], x[1] - z[1]);
    C64::new(0.0, 0.25) * hankel1_0(kappa * r)
}

/// `(d_κ(x, y), s_κ(x, y))` for `x ≠ y`.
pub fn kernels(kappa: f64, x: [f64; 2], y: [f64; 2], normal_y: [f64; 2]) -> (C64, C64) {
    let (dx, dy) = (x[0] - y[0], x[1] - y[1]);
    let r = Float::hypot(dx, dy);
    let (h0, h1) = hankel1_01(kappa * r);
    let s = C64::new(0.0, 0.25) * h0;
    let d = C64::new(0.0, 0.25 * kappa) * h1 * ((normal_y[0] * dx + normal_y[1] * dy) / r);
    (d, s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HelmholtzCombinedField {
    pub contour: Contour,
    pub kappa: f64,
    pub eta: f64,
}

impl HelmholtzCombinedField {
    pub fn new(contour: Contour, kappa: f64, eta: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::Contract("wavenumber must be positive"));
        }
        Ok(HelmholtzCombinedField { contour, kappa, eta })
    }

    pub fn default_star(n: usize, kappa: f64, eta: f64) -> Result<Self> {
        Self::new(Contour::default_star(n)?, kappa, eta)
    }

    /// Combined-field potential of `sigma` at `x` off the curve.
    pub fn evaluate(&self, sigma: &[C64], x: [f64; 2]) -> C64 {
        let c = &self.contour;
        (0..c.len())
            .map(|j| {
                let (d, s) = kernels(self.kappa, x, c.points[j], c.normals[j]);
                (d + C64::new(0.0, self.eta) * s) * sigma[j] * c.weights[j]
            })
            .sum()
    }
}

impl EntryOracle<C64> for HelmholtzCombinedField {
    fn dim(&self) -> usize {
        self.contour.len()
    }

    fn entry(&self, i: usize, j: usize) -> C64 {
        if i == j {
            return C64::new(0.5, 0.0);
        }
        let c = &self.contour;
        let (d, s) = kernels(self.kappa, c.points[i], c.points[j], c.normals[j]);
        (d + C64::new(0.0, self.eta) * s) * c.weights[j]
    }
}
