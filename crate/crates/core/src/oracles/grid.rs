//! Unit direction sets used to discretize suprema and infima over the sphere.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::invariants::generator::random_linear_map;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridKind {
    /// Equally spaced angles on the circle.
    UniformAngle,
    /// Fibonacci lattice on S^2.
    Fibonacci,
    /// Halton points pushed to S^3 through the uniform quaternion map.
    HaltonQuaternion,
}

/// Default base grid size per dimension.
pub fn default_grid_size(dim: usize) -> usize {
    match dim {
        2 => 4096,
        3 => 20_000,
        _ => 50_000,
    }
}

/// A symmetric set of unit vectors. In the plane the directions are kept
/// sorted by angle in `[0, 2π)`.
#[derive(Debug, Clone)]
pub struct DirectionGrid {
    dim: usize,
    kind: GridKind,
    base_size: usize,
    directions: Vec<Point>,
}

impl DirectionGrid {
    /// `size` base directions (rounded up to an even count so every direction
    /// has its antipode). A non-zero `seed` applies a seeded random rotation.
    pub fn new(dim: usize, size: usize, seed: u64) -> Result<Self> {
        if size < 64 {
            return Err(Error::BadParameter(format!("grid size must be at least 64, got {size}")));
        }
        let half = size.div_ceil(2);
        let (kind, base): (GridKind, Vec<Point>) = match dim {
            2 => {
                let step = PI / half as f64;
                let pts = (0..2 * half).map(|k| angle_point(step * k as f64)).collect();
                (GridKind::UniformAngle, pts)
            }
            3 => (GridKind::Fibonacci, with_antipodes(fibonacci(half))),
            4 => (GridKind::HaltonQuaternion, with_antipodes(halton_quaternions(half))),
            d => return Err(Error::UnsupportedDimension(d)),
        };
        let mut directions = base;
        if seed != 0 {
            let q = random_linear_map(dim, 1.0 + 1e-12, seed).qr().q();
            for d in &mut directions {
                *d = &q * &*d;
                d.normalize_mut();
            }
        }
        let mut grid = DirectionGrid { dim, kind, base_size: 2 * half, directions };
        grid.sort_planar();
        Ok(grid)
    }

    /// Adds the normalized `±p` for every non-zero `p`, skipping near-duplicates.
    pub fn with_extra<'a>(mut self, points: impl IntoIterator<Item = &'a Point>) -> Self {
        let mut extra: Vec<Point> = Vec::new();
        for p in points {
            let norm = p.norm();
            if norm == 0.0 || p.len() != self.dim {
                continue;
            }
            for s in [1.0, -1.0] {
                let u = p * (s / norm);
                if !extra.iter().any(|e| (e - &u).norm() < 1e-13) {
                    extra.push(u);
                }
            }
        }
        extra.retain(|u| !self.directions.iter().any(|d| (d - u).norm() < 1e-13));
        self.directions.extend(extra);
        self.sort_planar();
        self
    }

    fn sort_planar(&mut self) {
        if self.dim == 2 {
            self.directions.sort_by(|a, b| planar_angle(a).total_cmp(&planar_angle(b)));
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Size of the generated part, before extra directions were added.
    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn directions(&self) -> &[Point] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

pub(crate) fn angle_point(theta: f64) -> Point {
    Point::from_vec(vec![theta.cos(), theta.sin()])
}

/// Angle of a planar vector in `[0, 2π)`.
pub(crate) fn planar_angle(p: &Point) -> f64 {
    let a = p[1].atan2(p[0]);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

fn with_antipodes(points: Vec<Point>) -> Vec<Point> {
    let negatives: Vec<Point> = points.iter().map(|p| -p).collect();
    points.into_iter().chain(negatives).collect()
}

fn fibonacci(count: usize) -> Vec<Point> {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / count as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden_angle * i as f64;
            Point::from_vec(vec![r * phi.cos(), r * phi.sin(), z])
        })
        .collect()
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut x = 0.0;
    while i > 0 {
        x += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    x
}

fn halton_quaternions(count: usize) -> Vec<Point> {
    (1..=count)
        .map(|i| {
            let u1 = radical_inverse(i, 2);
            let u2 = radical_inverse(i, 3);
            let u3 = radical_inverse(i, 5);
            let a = (1.0 - u1).sqrt();
            let b = u1.sqrt();
            let (t2, t3) = (2.0 * PI * u2, 2.0 * PI * u3);
            Point::from_vec(vec![a * t2.sin(), a * t2.cos(), b * t3.sin(), b * t3.cos()])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pt;

    #[test]
    fn grids_are_unit_and_symmetric() {
        for (dim, size) in [(2, 256), (3, 500), (4, 800)] {
            for seed in [0, 3] {
                let g = DirectionGrid::new(dim, size, seed).unwrap();
                assert_eq!(g.len(), size);
                for d in g.directions() {
                    assert!((d.norm() - 1.0).abs() < 1e-12);
                    assert!(g.directions().iter().any(|e| (e + d).norm() < 1e-12));
                }
            }
        }
    }

    #[test]
    fn planar_grid_is_sorted_and_extras_are_merged() {
        let g = DirectionGrid::new(2, 64, 0).unwrap().with_extra(&[pt(&[1.0, 2.0]), pt(&[3.0, 0.0])]);
        assert_eq!(g.len(), 66);
        let angles: Vec<f64> = g.directions().iter().map(planar_angle).collect();
        assert!(angles.windows(2).all(|w| w[0] < w[1]));
        assert!(g.directions().iter().any(|d| (d - pt(&[-1.0, -2.0]) / 5f64.sqrt()).norm() < 1e-15));
    }

    #[test]
    fn sphere_grids_cover_evenly() {
        // Every probe direction has a grid point within a small angle.
        let g = DirectionGrid::new(3, 20_000, 0).unwrap();
        let probes = DirectionGrid::new(3, 200, 11).unwrap();
        for p in probes.directions() {
            let best = g.directions().iter().map(|d| d.dot(p)).fold(f64::MIN, f64::max);
            assert!(best > (0.03f64).cos());
        }
    }

    #[test]
    fn small_grids_rejected() {
        assert!(DirectionGrid::new(2, 10, 0).is_err());
        assert!(DirectionGrid::new(5, 100, 0).is_err());
    }
}
