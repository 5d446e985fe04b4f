//! Smooth closed curves discretized for the trapezoidal rule.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::error::{Error, Result};

/// Star-shaped curve `r(t) = 1 + amplitude · cos(lobes · t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarCurve {
    pub amplitude: f64,
    pub lobes: f64,
}

impl Default for StarCurve {
    fn default() -> Self {
        StarCurve { amplitude: 0.3, lobes: 5.0 }
    }
}

impl StarCurve {
    /// Position, first and second derivative at parameter `t`.
    pub fn eval(&self, t: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        let (a, k) = (self.amplitude, self.lobes);
        let (sk, ck) = Float::sin_cos(k * t);
        let r = 1.0 + a * ck;
        let r1 = -a * k * sk;
        let r2 = -a * k * k * ck;
        let (s, c) = Float::sin_cos(t);
        let pos = [r * c, r * s];
        let d1 = [r1 * c - r * s, r1 * s + r * c];
        let d2 = [r2 * c - 2.0 * r1 * s - r * c, r2 * s + 2.0 * r1 * c - r * s];
        (pos, d1, d2)
    }

    pub fn speed(&self, t: f64) -> f64 {
        let (_, d1, _) = self.eval(t);
        Float::hypot(d1[0], d1[1])
    }
}

/// Quadrature nodes on a closed curve.
///
/// The curve runs counter-clockwise and `normal` points away from the
/// enclosed region, into the exterior domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub points: Vec<[f64; 2]>,
    pub normals: Vec<[f64; 2]>,
    pub curvature: Vec<f64>,
    /// Trapezoidal arclength weights.
    pub weights: Vec<f64>,
}

impl Contour {
    /// `n` nodes equispaced in the parameter.
    pub fn star(curve: StarCurve, n: usize) -> Result<Self> {
        if n < 16 {
            return Err(Error::Contract("a contour needs at least 16 nodes"));
        }
        let h = 2.0 * PI / n as f64;
        let mut c = Contour {
            points: Vec::with_capacity(n),
            normals: Vec::with_capacity(n),
            curvature: Vec::with_capacity(n),
            weights: Vec::with_capacity(n),
        };
        for i in 0..n {
            let t = i as f64 * h;
            let (p, d1, d2) = curve.eval(t);
            let s = Float::hypot(d1[0], d1[1]);
            c.points.push(p);
            c.normals.push([d1[1] / s, -d1[0] / s]);
            c.curvature.push((d1[0] * d2[1] - d1[1] * d2[0]) / (s * s * s));
            c.weights.push(s * h);
        }
        c.check_distinct()?;
        Ok(c)
    }

    /// The default five-lobed star with `n` nodes.
    pub fn default_star(n: usize) -> Result<Self> {
        Self::star(StarCurve::default(), n)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.weights.iter().sum()
    }

    fn check_distinct(&self) -> Result<()> {
        // nodes follow the curve, so a coincidence shows up between neighbours
        let n = self.points.len();
        for i in 0..n {
            let j = (i + 1) % n;
            let (a, b) = (self.points[i], self.points[j]);
            if a == b {
                return Err(Error::CoincidentNodes { first: i.min(j), second: i.max(j) });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Adaptive Simpson on `[a, b]`.
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let whole = (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
        let left = (m - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + m)) + f(m));
        let right = (b - m) / 6.0 * (f(m) + 4.0 * f(0.5 * (m + b)) + f(b));
        if depth == 0 || (left + right - whole).abs() < 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            simpson(f, a, m, tol / 2.0, depth - 1) + simpson(f, m, b, tol / 2.0, depth - 1)
        }
    }

    #[test]
    fn trapezoid_length_matches_adaptive() {
        let curve = StarCurve::default();
        let c = Contour::star(curve, 64).unwrap();
        let exact = simpson(&|t| curve.speed(t), 0.0, 2.0 * PI, 1e-13, 40);
        assert!((c.length() - exact).abs() < 1e-10, "{} vs {exact}", c.length());
    }

    #[test]
    fn circle() {
        let c = Contour::star(StarCurve { amplitude: 0.0, lobes: 5.0 }, 32).unwrap();
        for (k, (p, n)) in c.curvature.iter().zip(c.points.iter().zip(&c.normals)) {
            assert!((k - 1.0).abs() < 1e-14);
            assert!((n[0] - p[0]).abs() < 1e-14 && (n[1] - p[1]).abs() < 1e-14);
        }
    }

    #[test]
    fn normals_are_unit_and_orthogonal() {
        let curve = StarCurve::default();
        let c = Contour::star(curve, 128).unwrap();
        for i in 0..c.len() {
            let t = 2.0 * PI * i as f64 / 128.0;
            let (_, d1, _) = curve.eval(t);
            let n = c.normals[i];
            assert!((n[0].hypot(n[1]) - 1.0).abs() < 1e-14);
            assert!((n[0] * d1[0] + n[1] * d1[1]).abs() < 1e-14);
        }
    }

    #[test]
    fn too_few_nodes() {
        assert!(Contour::default_star(8).is_err());
    }
}
