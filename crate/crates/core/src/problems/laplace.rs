//! Exterior Laplace Dirichlet problem as a second-kind equation.
//!
//! `½ σ(x) + ∫ [d(x, y) − (1/2π) log|x − z|] σ(y) ds(y) = f(x)` with the
//! double-layer kernel `d(x, y) = n(y)·(x − y) / (2π |x − y|²)`, the normal
//! pointing into the exterior, and `z` a point inside the curve. The log
//! term lets the representation carry the logarithmic growth of exterior
//! harmonic functions.

use core::f64::consts::PI;

use num_traits::Float;

use super::contour::Contour;
use crate::error::{Error, Result};
use crate::hodlr::EntryOracle;

/// Double-layer kernel `d(x, y)`.
pub fn double_layer(x: [f64; 2], y: [f64; 2], normal_y: [f64; 2]) -> f64 {
    let (dx, dy) = (x[0] - y[0], x[1] - y[1]);
    (normal_y[0] * dx + normal_y[1] * dy) / (2.0 * PI * (dx * dx + dy * dy))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceDoubleLayer {
    pub contour: Contour,
    /// Interior point `z` of the log term.
    pub center: [f64; 2],
}

impl LaplaceDoubleLayer {
    /// The caller guarantees `center` lies inside the curve.
    pub fn new(contour: Contour, center: [f64; 2]) -> Result<Self> {
        if contour.points.iter().any(|p| *p == center) {
            return Err(Error::Contract("log-term center lies on the curve"));
        }
        Ok(LaplaceDoubleLayer { contour, center })
    }

    /// Default star curve with `n` nodes, centered at the origin.
    pub fn default_star(n: usize) -> Result<Self> {
        Self::new(Contour::default_star(n)?, [0.0, 0.0])
    }

    fn log_term(&self, x: [f64; 2]) -> f64 {
        Float::ln(Float::hypot(x[0] - self.center[0], x[1] - self.center[1])) / (2.0 * PI)
    }

    /// Layer potential `u(x)` of the density `sigma` at `x` off the curve.
    pub fn evaluate(&self, sigma: &[f64], x: [f64; 2]) -> f64 {
        let c = &self.contour;
        let lt = self.log_term(x);
        (0..c.len()).map(|j| (double_layer(x, c.points[j], c.normals[j]) - lt) * sigma[j] * c.weights[j]).sum()
    }
}

impl EntryOracle<f64> for LaplaceDoubleLayer {
    fn dim(&self) -> usize {
        self.contour.len()
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        let c = &self.contour;
        let x = c.points[i];
        let d = if i == j { -c.curvature[i] / (4.0 * PI) } else { double_layer(x, c.points[j], c.normals[j]) };
        let half = if i == j { 0.5 } else { 0.0 };
        half + (d - self.log_term(x)) * c.weights[j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::contour::StarCurve;

    #[test]
    fn circle_kernel_is_constant() {
        let c = Contour::star(StarCurve { amplitude: 0.0, lobes: 5.0 }, 32).unwrap();
        let want = -1.0 / (4.0 * PI);
        for (i, j) in [(0, 1), (3, 17), (31, 4)] {
            let d = double_layer(c.points[i], c.points[j], c.normals[j]);
            assert!((d - want).abs() < 1e-14, "{d}");
        }
        // diagonal limit, curvature one
        assert!((-c.curvature[0] / (4.0 * PI) - want).abs() < 1e-14);
    }

    #[test]
    fn symmetric_quadrature_of_constant_density() {
        // on the circle ∫ d(x, y) ds(y) = -1/2 for x on the curve
        let c = Contour::star(StarCurve { amplitude: 0.0, lobes: 5.0 }, 64).unwrap();
        let s: f64 = (0..64)
            .map(|j| if j == 0 { -c.curvature[0] / (4.0 * PI) * c.weights[0] } else { double_layer(c.points[0], c.points[j], c.normals[j]) * c.weights[j] })
            .sum();
        assert!((s + 0.5).abs() < 1e-13, "{s}");
    }
}
