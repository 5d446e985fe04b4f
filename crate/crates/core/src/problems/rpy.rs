//! Rotne–Prager–Yamakawa kernel for points on a line.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hodlr::EntryOracle;

/// Sorted points in `[-1, 1]` with regularization radius `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet1D {
    pub points: Vec<f64>,
    pub a: f64,
}

impl PointSet1D {
    /// `n` seeded uniform points; `a` is half the smallest gap.
    pub fn uniform(n: usize, seed: u64) -> Result<Self> {
        let mut rng = super::rng(seed);
        let points = (0..n).map(|_| super::uniform(&mut rng)).collect();
        Self::from_points(points)
    }

    pub fn from_points(mut points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Contract("need at least two points"));
        }
        points.sort_by(f64::total_cmp);
        let mut gap = f64::INFINITY;
        for (i, w) in points.windows(2).enumerate() {
            let d = w[1] - w[0];
            if d == 0.0 {
                return Err(Error::CoincidentNodes { first: i, second: i + 1 });
            }
            gap = gap.min(d);
        }
        Ok(PointSet1D { points, a: gap / 2.0 })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Boltzmann constant, temperature and viscosity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RpyParams {
    pub k: f64,
    pub temperature: f64,
    pub viscosity: f64,
}

impl Default for RpyParams {
    fn default() -> Self {
        RpyParams { k: 1.0, temperature: 1.0, viscosity: 1.0 }
    }
}

/// Scalar RPY entry at distance `r ≥ 0`. In one dimension `r̂ ⊗ r̂ = 1`.
pub fn rpy_kernel(r: f64, a: f64, p: &RpyParams) -> f64 {
    let kt = p.k * p.temperature;
    if r >= 2.0 * a {
        kt / (8.0 * PI * p.viscosity * r) * (2.0 - 4.0 * a * a / (3.0 * r * r))
    } else {
        kt / (6.0 * PI * p.viscosity * a) * (1.0 - 3.0 * r / (16.0 * a))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RpyOracle {
    pub points: PointSet1D,
    pub params: RpyParams,
}

impl RpyOracle {
    pub fn new(points: PointSet1D, params: RpyParams) -> Self {
        RpyOracle { points, params }
    }

    pub fn uniform(n: usize, seed: u64) -> Result<Self> {
        Ok(Self::new(PointSet1D::uniform(n, seed)?, RpyParams::default()))
    }
}

impl EntryOracle<f64> for RpyOracle {
    fn dim(&self) -> usize {
        self.points.len()
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        let r = (self.points.points[i] - self.points.points[j]).abs();
        rpy_kernel(r, self.points.a, &self.params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_continuity() {
        let p = RpyParams::default();
        let a = 0.01;
        assert_eq!(rpy_kernel(0.0, a, &p), 1.0 / (6.0 * PI * a));
        let far = 1.0 / (8.0 * PI * 2.0 * a) * (2.0 - 1.0 / 3.0);
        let near = 1.0 / (6.0 * PI * a) * (1.0 - 3.0 * 2.0 * a / (16.0 * a));
        assert!((far - near).abs() <= 1e-15 * far);
        assert!((rpy_kernel(2.0 * a, a, &p) - 5.0 / (48.0 * PI * a)).abs() <= 1e-15 * far);
    }

    #[test]
    fn far_field_value() {
        let v = rpy_kernel(0.5, 0.01, &RpyParams::default());
        let want = 1.0 / (4.0 * PI * 0.5) * (1.0 - 2.0 * 0.0001 / (3.0 * 0.25));
        assert!((v - want).abs() < 1e-15 * want);
    }

    #[test]
    fn points_sorted_and_symmetric() {
        let o = RpyOracle::uniform(300, 7).unwrap();
        assert!(o.points.points.windows(2).all(|w| w[0] < w[1]));
        assert!(o.points.points.iter().all(|x| (-1.0..=1.0).contains(x)));
        for (i, j) in [(0, 5), (17, 299), (123, 124)] {
            assert_eq!(o.entry(i, j), o.entry(j, i));
        }
        assert_eq!(RpyOracle::uniform(300, 7).unwrap(), o);
    }

    #[test]
    fn duplicate_points() {
        assert!(matches!(PointSet1D::from_points(vec![0.5, 0.1, 0.5]), Err(Error::CoincidentNodes { .. })));
    }
}
