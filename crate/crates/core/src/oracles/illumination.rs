//! Illumination bodies `K^δ = {x : |conv[K, x]| <= (1+δ)|K|}` and the polar
//! approximant `I^δ(P) = ((P°)^δ)°`.
//!
//! Outside `K` the excess volume is `φ(x) = Σ_F (|F|/n) (<x, n_F> - b_F)_+`,
//! a convex piecewise-linear function, so `K^δ = {φ <= δ|K|}` is a polytope.
//! Along any line `φ` is piecewise linear with breakpoints where the line
//! crosses a facet hyperplane, and every root is found exactly.

use itertools::Itertools;
use nalgebra::DMatrix;

use super::BodyOracle;
use crate::duality;
use crate::error::{Error, Result};
use crate::geometry::linalg::hyperplane_normal;
use crate::geometry::{hull, Point, VPolytope};

/// Facet data of `K` needed to evaluate `φ`.
#[derive(Debug, Clone)]
struct Excess {
    normals: Vec<Point>,
    offsets: Vec<f64>,
    weights: Vec<f64>,
}

impl Excess {
    fn new(k: &VPolytope) -> Self {
        let n = k.dim() as f64;
        Excess {
            normals: k.facets().iter().map(|f| f.normal.clone()).collect(),
            offsets: k.facets().iter().map(|f| f.offset).collect(),
            weights: k.facets().iter().map(|f| f.measure / n).collect(),
        }
    }

    /// Roots of `φ(x0 + s d) = level` as `(left, right)`; `None` where the
    /// line stays below the level on that side of its minimum or misses it.
    fn line_roots(&self, x0: &Point, d: &Point, level: f64) -> (Option<f64>, Option<f64>) {
        // Each facet contributes w (a + s b)_+ with a = <x0, n> - off, b = <d, n>.
        let terms: Vec<(f64, f64, f64)> = self
            .normals
            .iter()
            .zip(&self.offsets)
            .zip(&self.weights)
            .map(|((nv, off), w)| (*w, x0.dot(nv) - off, d.dot(nv)))
            .collect();
        let phi = |s: f64| terms.iter().map(|(w, a, b)| w * (a + s * b).max(0.0)).sum::<f64>();
        let mut breaks: Vec<f64> = terms.iter().filter(|t| t.2 != 0.0).map(|(_, a, b)| -a / b).collect();
        if breaks.is_empty() {
            return (None, None);
        }
        breaks.sort_by(f64::total_cmp);
        let values: Vec<f64> = breaks.iter().map(|&s| phi(s)).collect();
        let (m, &vmin) = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
        if vmin >= level {
            return (None, None);
        }
        let slope_right: f64 = terms.iter().filter(|t| t.2 > 0.0).map(|(w, _, b)| w * b).sum();
        let slope_left: f64 = terms.iter().filter(|t| t.2 < 0.0).map(|(w, _, b)| -w * b).sum();
        let right = (m + 1..breaks.len())
            .find(|&j| values[j] >= level)
            .map(|j| interpolate(breaks[j - 1], values[j - 1], breaks[j], values[j], level))
            .unwrap_or_else(|| {
                let last = breaks.len() - 1;
                breaks[last] + (level - values[last]) / slope_right
            });
        let left = (0..m)
            .rev()
            .find(|&j| values[j] >= level)
            .map(|j| interpolate(breaks[j + 1], values[j + 1], breaks[j], values[j], level))
            .unwrap_or_else(|| breaks[0] - (level - values[0]) / slope_left);
        (Some(left), Some(right))
    }
}

fn interpolate(s0: f64, v0: f64, s1: f64, v1: f64, level: f64) -> f64 {
    s0 + (s1 - s0) * (level - v0) / (v1 - v0)
}

/// `r_{K^δ}(u)`: the exact `t >= r_K(u)` with `|conv[K, t u]| = (1+δ)|K|`.
pub fn illumination_radial(k: &VPolytope, delta: f64, u: &Point) -> Result<f64> {
    if !k.contains_origin_in_interior() {
        return Err(Error::OriginNotInterior);
    }
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::BadParameter(format!("illumination parameter must be >= 0, got {delta}")));
    }
    let norm = u.norm();
    if norm == 0.0 {
        return Err(Error::BadParameter("direction must be non-zero".into()));
    }
    let u = u / norm;
    if delta == 0.0 {
        return Ok(k.radial_unchecked(&u));
    }
    let ex = Excess::new(k);
    let (_, right) = ex.line_roots(&Point::zeros(k.dim()), &u, delta * k.volume());
    right.ok_or(Error::DegenerateInput("illumination level not reached".into()))
}

/// A finite set whose convex hull is `K^δ`: the roots of `φ = δ|K|` on every
/// line cut out by `n - 1` facet hyperplanes of `K`.
pub fn illumination_candidates(k: &VPolytope, delta: f64) -> Vec<Point> {
    let n = k.dim();
    let ex = Excess::new(k);
    let level = delta * k.volume();
    let mut out = Vec::new();
    if n == 1 {
        for u in [Point::from_element(1, 1.0), Point::from_element(1, -1.0)] {
            if let (_, Some(t)) = ex.line_roots(&Point::zeros(1), &u, level) {
                out.push(u * t);
            }
        }
        return out;
    }
    let origin = Point::zeros(n);
    for subset in (0..ex.normals.len()).combinations(n - 1) {
        let mut pts: Vec<&Point> = vec![&origin];
        pts.extend(subset.iter().map(|&i| &ex.normals[i]));
        let d = hyperplane_normal(&pts);
        if d.norm() < 1e-10 {
            continue;
        }
        let d = &d / d.norm();
        let a = DMatrix::from_fn(n - 1, n, |r, c| ex.normals[subset[r]][c]);
        let b = Point::from_iterator(n - 1, subset.iter().map(|&i| ex.offsets[i]));
        let Some(y) = (&a * a.transpose()).lu().solve(&b) else { continue };
        let x0 = a.transpose() * y;
        let (l, r) = ex.line_roots(&x0, &d, level);
        for s in [l, r].into_iter().flatten() {
            out.push(&x0 + &d * s);
        }
    }
    out
}

/// Oracle for `I^δ'(P) = ((P°)^δ')°`, exact in both radial and support form.
#[derive(Debug, Clone)]
pub struct PolarIllumination {
    polar: VPolytope,
    delta_prime: f64,
    /// Points spanning `(P°)^δ'`.
    candidates: Vec<Point>,
    kinks: Vec<Point>,
    label: String,
}

impl PolarIllumination {
    pub fn delta_prime(&self) -> f64 {
        self.delta_prime
    }

    /// `h_{(P°)^δ'}(u)`.
    pub fn polar_support(&self, u: &Point) -> f64 {
        self.candidates.iter().map(|c| c.dot(u)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// The point of `∂I^δ'(P)` on the ray through `x`.
    pub fn boundary_point(&self, x: &Point) -> Point {
        x * self.radial(x)
    }
}

impl BodyOracle for PolarIllumination {
    fn label(&self) -> &str {
        &self.label
    }

    fn dim(&self) -> usize {
        self.polar.dim()
    }

    fn radial(&self, u: &Point) -> f64 {
        1.0 / self.polar_support(u)
    }

    fn support(&self, u: &Point) -> f64 {
        let norm = u.norm();
        norm / illumination_radial(&self.polar, self.delta_prime, u).expect("origin is interior to the polar")
    }

    fn kinks(&self) -> Vec<Point> {
        self.kinks.clone()
    }
}

/// Builds the `I^δ'(P)` oracle. `δ' = 0` gives `P` itself.
pub fn polar_illumination_oracle(p: &VPolytope, delta_prime: f64) -> Result<PolarIllumination> {
    if !p.is_centrally_symmetric() {
        return Err(Error::SymmetryRequired);
    }
    if !(delta_prime >= 0.0) || !delta_prime.is_finite() {
        return Err(Error::BadParameter(format!("δ' must be >= 0, got {delta_prime}")));
    }
    let polar = duality::polar(p)?;
    let candidates = if delta_prime == 0.0 {
        polar.vertices().to_vec()
    } else {
        illumination_candidates(&polar, delta_prime)
    };
    let kinks = hull_normals(&candidates, p.dim());
    Ok(PolarIllumination {
        polar,
        delta_prime,
        candidates,
        kinks,
        label: format!("I^{delta_prime:e}(P)"),
    })
}

/// Outer normals of the facets of `conv(points)`, which are the vertex
/// directions of its polar.
fn hull_normals(points: &[Point], dim: usize) -> Vec<Point> {
    if dim == 2 {
        let hull = planar_hull(points);
        return (0..hull.len())
            .map(|i| {
                let a = &hull[i];
                let b = &hull[(i + 1) % hull.len()];
                let n = Point::from_vec(vec![b[1] - a[1], a[0] - b[0]]);
                &n / n.norm()
            })
            .filter(|n| n.iter().all(|x| x.is_finite()))
            .collect();
    }
    let Ok(facets) = hull::simplicial_hull(points, 1e-12) else { return Vec::new() };
    let mut normals: Vec<Point> = Vec::new();
    for f in facets {
        if !normals.iter().any(|n| (n - &f.normal).norm() < 1e-10) {
            normals.push(f.normal);
        }
    }
    normals
}

/// Counter-clockwise convex hull (monotone chain), collinear points dropped.
fn planar_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<&Point> = points.iter().collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let cross = |o: &Point, a: &Point, b: &Point| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<&Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &&Point>> = if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull.into_iter().cloned().collect()
}
