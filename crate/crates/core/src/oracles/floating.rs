//! Floating bodies of symmetric polytopes through their support function:
//! every support hyperplane of `P_δ` cuts off exactly `δ|P|`.

use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use super::grid::{angle_point, planar_angle};
use super::{BodyOracle, DirectionGrid};
use crate::error::{Error, Result};
use crate::geometry::linalg::orthonormal_span;
use crate::geometry::{Point, VPolytope};
use crate::invariants;
use crate::numeric::{golden_min, illinois_root, nelder_mead};

/// Relative volume tolerance for the cap equation.
pub const DEFAULT_CAP_TOL: f64 = 1e-12;

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 0.5 {
        Ok(())
    } else {
        Err(Error::BadParameter(format!("floating parameter must lie in (0, 1/2), got {delta}")))
    }
}

/// Solves `capVolume(P, v, t) = δ|P|` for unit `v`.
#[derive(Debug, Clone)]
struct CapSolver {
    p: VPolytope,
    target: f64,
    ftol: f64,
}

impl CapSolver {
    fn new(p: VPolytope, delta: f64, tol: f64) -> Self {
        let vol = p.volume();
        let target = delta * vol;
        // The cap can be tiny next to |P|; measure the residual against it.
        let ftol = tol * target.min(vol);
        CapSolver { p, target, ftol }
    }

    fn support(&self, v: &Point) -> f64 {
        let h = self.p.support(v);
        let (t, _, _) = illinois_root(|t| self.p.cap_volume(v, t) - self.target, 0.0, h, self.ftol, 200);
        t
    }
}

/// `h_{P_δ}(v)` for a centrally symmetric `P` and `0 < δ < 1/2`.
pub fn floating_support(p: &VPolytope, delta: f64, v: &Point) -> Result<f64> {
    check_delta(delta)?;
    if !p.is_centrally_symmetric() {
        return Err(Error::SymmetryRequired);
    }
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::BadParameter("direction must be non-zero".into()));
    }
    Ok(CapSolver::new(p.clone(), delta, DEFAULT_CAP_TOL).support(&(v / norm)))
}

/// `1 - α_ξ δ^{1/n}`: the first-order shrink of the vertex ray `ξ` in `P_δ`.
pub fn vertex_float_ratio(p: &VPolytope, delta: f64, xi: &Point) -> Result<f64> {
    if delta == 0.0 {
        return Ok(1.0);
    }
    let alpha = invariants::vertex_invariants(p, xi)?.alpha;
    Ok(1.0 - alpha * delta.powf(1.0 / p.dim() as f64))
}

/// `r_{P_δ}(u)` for one direction, from a freshly built [`FloatingBody`] over `grid`.
pub fn floating_radial(p: &VPolytope, delta: f64, u: &Point, grid: &DirectionGrid) -> Result<f64> {
    Ok(FloatingBody::new(p, delta, grid, DEFAULT_CAP_TOL)?.radial_precise(u))
}

fn key(u: &Point) -> Vec<u64> {
    u.iter().map(|x| x.to_bits()).collect()
}

/// The floating body `P_δ` with its support function tabulated on a grid.
///
/// `radial` is `min_v h(v)/<u, v>` over the grid (an upper bound) and
/// `radial_precise` refines that minimum locally, which is a convex problem:
/// `r(u) = min over w ⊥ u of h(u + w)`. In the plane every radial value is
/// refined.
#[derive(Debug, Clone)]
pub struct FloatingBody {
    solver: CapSolver,
    delta: f64,
    directions: Vec<Point>,
    supports: Vec<f64>,
    spacing: f64,
    cache: HashMap<Vec<u64>, f64>,
    kinks: Vec<Point>,
    label: String,
}

impl FloatingBody {
    pub fn new(p: &VPolytope, delta: f64, grid: &DirectionGrid, tol: f64) -> Result<Self> {
        check_delta(delta)?;
        if !p.is_centrally_symmetric() {
            return Err(Error::SymmetryRequired);
        }
        if grid.dim() != p.dim() {
            return Err(Error::BadParameter("grid dimension does not match the polytope".into()));
        }
        let solver = CapSolver::new(p.clone(), delta, tol);
        let directions = grid.directions().to_vec();
        let supports = directions.par_iter().map(|v| solver.support(v)).collect();
        let n = p.dim() as f64;
        // Typical angular gap between neighbouring grid points.
        let spacing = match p.dim() {
            2 => 2.0 * PI / grid.base_size() as f64,
            _ => (4.0 * PI / grid.base_size() as f64).powf(1.0 / (n - 1.0)) * 2.0,
        };
        let kinks = p.vertices().iter().map(|v| v / v.norm()).collect();
        Ok(FloatingBody {
            solver,
            delta,
            directions,
            supports,
            spacing,
            cache: HashMap::new(),
            kinks,
            label: format!("P_{delta:e}"),
        })
    }

    /// Tabulates `radial` on the grid itself.
    pub fn with_radial_cache(mut self) -> Self {
        let values: Vec<f64> = self.directions.par_iter().map(|u| self.compute_radial(u)).collect();
        self.cache = self.directions.iter().map(key).zip(values).collect();
        self
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn polytope(&self) -> &VPolytope {
        &self.solver.p
    }

    /// `h_{P_δ}(v)` for unit `v`, solved afresh.
    pub fn support_unit(&self, v: &Point) -> f64 {
        self.solver.support(v)
    }

    /// Grid minimizer of `h(v)/<u, v>`.
    fn seed(&self, u: &Point) -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        for (i, (v, h)) in self.directions.iter().zip(&self.supports).enumerate() {
            let c = u.dot(v);
            if c > 0.0 {
                let r = h / c;
                if r < best.1 {
                    best = (i, r);
                }
            }
        }
        best
    }

    pub fn radial_coarse(&self, u: &Point) -> f64 {
        let norm = u.norm();
        self.seed(&(u / norm)).1 / norm
    }

    fn compute_radial(&self, u: &Point) -> f64 {
        if self.solver.p.dim() == 2 {
            self.radial_precise(u)
        } else {
            self.radial_coarse(u)
        }
    }

    pub fn radial_precise(&self, u: &Point) -> f64 {
        let norm = u.norm();
        let u = u / norm;
        let (i, coarse) = self.seed(&u);
        let refined = match u.len() {
            2 => self.refine_planar(&u, i),
            _ => self.refine_sphere(&u, i),
        };
        refined.min(coarse) / norm
    }

    fn refine_planar(&self, u: &Point, seed: usize) -> f64 {
        let theta = planar_angle(u);
        let m = self.directions.len();
        let mut centre = planar_angle(&self.directions[seed]);
        if centre - theta > PI {
            centre -= 2.0 * PI;
        } else if theta - centre > PI {
            centre += 2.0 * PI;
        }
        // The minimum of a unimodal function lies between the neighbours of its grid argmin.
        let gap = |j: usize| {
            let d = (planar_angle(&self.directions[j]) - planar_angle(&self.directions[seed])).abs();
            d.min(2.0 * PI - d)
        };
        let lo = centre - gap((seed + m - 1) % m).min(self.spacing);
        let hi = centre + gap((seed + 1) % m).min(self.spacing);
        let lo = lo.max(theta - 0.5 * PI + 1e-9);
        let hi = hi.min(theta + 0.5 * PI - 1e-9);
        let f = |phi: f64| self.solver.support(&angle_point(phi)) / (phi - theta).cos();
        golden_min(f, lo, hi, 1e-11).1
    }

    fn refine_sphere(&self, u: &Point, seed: usize) -> f64 {
        let n = u.len();
        let basis = orthonormal_span((0..n).map(|i| Point::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })), u, n - 1, 1.0);
        let v = &self.directions[seed];
        let w0 = v / v.dot(u) - u;
        let x0 = Point::from_iterator(n - 1, basis.iter().map(|b| b.dot(&w0)));
        let f = |x: &Point| {
            let mut y = u.clone();
            for (b, c) in basis.iter().zip(x.iter()) {
                y.axpy(*c, b, 1.0);
            }
            let len = y.norm();
            len * self.solver.support(&(y / len))
        };
        nelder_mead(f, &x0, 0.5 * self.spacing, 1e-15, 400).1
    }
}

impl BodyOracle for FloatingBody {
    fn label(&self) -> &str {
        &self.label
    }

    fn dim(&self) -> usize {
        self.solver.p.dim()
    }

    fn radial(&self, u: &Point) -> f64 {
        match self.cache.get(&key(u)) {
            Some(&r) => r,
            None => self.compute_radial(u),
        }
    }

    fn radial_precise(&self, u: &Point) -> f64 {
        if self.solver.p.dim() == 2 {
            if let Some(&r) = self.cache.get(&key(u)) {
                return r;
            }
        }
        FloatingBody::radial_precise(self, u)
    }

    fn support(&self, u: &Point) -> f64 {
        let norm = u.norm();
        norm * self.solver.support(&(u / norm))
    }

    fn kinks(&self) -> Vec<Point> {
        self.kinks.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pt;
    use crate::invariants::generator::{cross, cube, hexagon};

    #[test]
    fn square_slab_support() {
        let p = cube(2).unwrap();
        for delta in [1e-6, 1e-3, 0.1, 0.4] {
            let t = floating_support(&p, delta, &pt(&[1.0, 0.0])).unwrap();
            assert!((t - (1.0 - 2.0 * delta)).abs() < 1e-12);
            let s = floating_support(&p, delta, &pt(&[-1.0, 0.0])).unwrap();
            assert!((t - s).abs() < 1e-12);
        }
    }

    #[test]
    fn diamond_supports() {
        let p = cross(2).unwrap();
        for delta in [1e-6, 1e-3, 0.1] {
            let t = floating_support(&p, delta, &pt(&[1.0, 1.0])).unwrap();
            assert!((t - (1.0 - 2.0 * delta) / 2f64.sqrt()).abs() < 1e-12);
            let t = floating_support(&p, delta, &pt(&[0.0, 1.0])).unwrap();
            assert!((t - (1.0 - (2.0 * delta).sqrt())).abs() < 1e-10);
        }
    }

    #[test]
    fn support_preconditions() {
        let p = cube(2).unwrap();
        assert!(matches!(floating_support(&p, 0.5, &pt(&[1.0, 0.0])), Err(Error::BadParameter(_))));
        assert!(matches!(floating_support(&p, 0.0, &pt(&[1.0, 0.0])), Err(Error::BadParameter(_))));
        let tri = VPolytope::new(vec![pt(&[1.0, 0.0]), pt(&[-1.0, 1.0]), pt(&[-1.0, -1.0])]).unwrap();
        assert_eq!(floating_support(&tri, 0.1, &pt(&[1.0, 0.0])).unwrap_err(), Error::SymmetryRequired);
    }

    #[test]
    fn support_decreases_with_delta() {
        let p = hexagon(0.3).unwrap();
        for v in [pt(&[1.0, 0.0]), pt(&[0.3, 0.9]), pt(&[0.0, 1.0])] {
            let mut last = f64::INFINITY;
            for delta in [1e-6, 1e-4, 1e-2, 0.1, 0.3] {
                let t = floating_support(&p, delta, &v).unwrap();
                assert!(t < last);
                last = t;
            }
        }
    }

    #[test]
    fn planar_radials() {
        let p = cube(2).unwrap();
        let grid = DirectionGrid::new(2, 1024, 0).unwrap();
        let delta = 1e-4;
        let fb = FloatingBody::new(&p, delta, &grid, DEFAULT_CAP_TOL).unwrap();
        // Facet direction: the slab value.
        assert!((fb.radial_precise(&pt(&[1.0, 0.0])) - (1.0 - 2.0 * delta)).abs() < 1e-10);
        // Corner caps are triangles with legs a b = 8δ; their envelope is (1-x)(1-y) = 2δ.
        let r = fb.radial_precise(&pt(&[1.0, 1.0]));
        let s = 1.0 - (2.0 * delta).sqrt();
        assert!((r - s).abs() < 1e-9, "{r} vs {s}");
        let coarse = fb.radial_coarse(&pt(&[0.6, 0.8]));
        assert!(coarse >= fb.radial_precise(&pt(&[0.6, 0.8])) - 1e-15);
    }

    #[test]
    fn vertex_ratio_closed_form() {
        let p = cube(2).unwrap();
        let r = vertex_float_ratio(&p, 1e-4, &pt(&[1.0, 1.0])).unwrap();
        assert!((r - (1.0 - 2f64.sqrt() * 0.01)).abs() < 1e-12);
        assert_eq!(vertex_float_ratio(&p, 0.0, &pt(&[1.0, 1.0])).unwrap(), 1.0);
    }

    #[test]
    fn spatial_refinement_improves_on_the_grid() {
        let p = cube(3).unwrap();
        let grid = DirectionGrid::new(3, 2000, 0).unwrap();
        let delta = 1e-3;
        let fb = FloatingBody::new(&p, delta, &grid, DEFAULT_CAP_TOL).unwrap();
        let e1 = pt(&[1.0, 0.0, 0.0]);
        assert!((fb.radial_precise(&e1) - (1.0 - 2.0 * delta)).abs() < 1e-9);
        let u = pt(&[0.3, 0.5, 0.81]);
        assert!(fb.radial_precise(&u) <= fb.radial_coarse(&u));
    }
}
