use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::cell::{mean, moments, Cell, Facet};
use super::linalg::coordinate_scale;
use super::{hull, Point, DEFAULT_INCIDENCE_TOL};
use crate::error::{Error, Result};

/// `{x : <x, normal> <= offset}` with unit `normal`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Point,
    pub offset: f64,
}

impl Halfspace {
    /// Normalizes `normal`; fails on a zero normal.
    pub fn new(normal: Point, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::BadParameter("halfspace normal must be non-zero".into()));
        }
        Ok(Halfspace { normal: normal / n, offset: offset / n })
    }

    pub fn complement(&self) -> Halfspace {
        Halfspace { normal: -&self.normal, offset: -self.offset }
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.normal.dot(x) <= self.offset + tol
    }
}

/// Facet representation with vertex-facet incidence.
#[derive(Debug, Clone)]
pub struct HPolytope {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
    /// For each halfspace, indices of the V-representation vertices on its boundary.
    pub incidence: Vec<Vec<usize>>,
}

impl HPolytope {
    /// Vertex enumeration by brute force over n-subsets of bounding hyperplanes.
    pub fn vertices(&self, tol: f64) -> Vec<Point> {
        let n = self.dim;
        let mut out: Vec<Point> = Vec::new();
        for combo in (0..self.halfspaces.len()).combinations(n) {
            let a = DMatrix::from_fn(n, n, |r, c| self.halfspaces[combo[r]].normal[c]);
            let b = DVector::from_iterator(n, combo.iter().map(|&i| self.halfspaces[i].offset));
            let Some(x) = a.lu().solve(&b) else { continue };
            if !x.iter().all(|v| v.is_finite()) {
                continue;
            }
            if self.halfspaces.iter().all(|h| h.contains(&x, tol)) && !out.iter().any(|y| (y - &x).norm() <= tol) {
                out.push(x);
            }
        }
        out
    }
}

/// A full-dimensional convex polytope given by its (irredundant) vertices.
///
/// The facet structure is computed once at construction and shared by every
/// query; the type is immutable afterwards.
#[derive(Debug, Clone)]
pub struct VPolytope {
    cell: Cell,
}

impl VPolytope {
    /// Builds from an irredundant vertex list; rejects interior or duplicate points.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        Self::with_tolerance(vertices, DEFAULT_INCIDENCE_TOL)
    }

    pub fn with_tolerance(vertices: Vec<Point>, tol: f64) -> Result<Self> {
        let dim = check_dims(&vertices)?;
        for (i, j) in (0..vertices.len()).tuple_combinations() {
            if (&vertices[i] - &vertices[j]).norm() <= tol {
                return Err(Error::RedundantVertex(j));
            }
        }
        let cell = Cell::build(vertices, dim, tol)?;
        if let Some(&i) = cell.redundant_vertices().first() {
            return Err(Error::RedundantVertex(i));
        }
        Ok(VPolytope { cell })
    }

    /// Convex hull of an arbitrary point set: duplicates merged, non-extreme points dropped.
    pub fn hull_of(points: Vec<Point>) -> Result<Self> {
        Self::hull_of_with_tolerance(points, DEFAULT_INCIDENCE_TOL)
    }

    pub fn hull_of_with_tolerance(points: Vec<Point>, tol: f64) -> Result<Self> {
        let dim = check_dims(&points)?;
        let mut unique: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if !unique.iter().any(|q| (q - &p).norm() <= tol) {
                unique.push(p);
            }
        }
        // The exact builder enumerates dim-subsets; thin large sets first.
        if unique.len() > dim + 16 {
            let keep = hull::extreme_indices(&unique, tol.min(1e-12))?;
            unique = keep.into_iter().map(|i| unique[i].clone()).collect();
        }
        let cell = Cell::build(unique, dim, tol)?;
        let redundant = cell.redundant_vertices();
        if redundant.is_empty() {
            return Ok(VPolytope { cell });
        }
        let kept: Vec<Point> = cell
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| !redundant.contains(i))
            .map(|(_, v)| v.clone())
            .collect();
        Ok(VPolytope { cell: Cell::build(kept, dim, tol)? })
    }

    pub fn dim(&self) -> usize {
        self.cell.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.cell.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.cell.facets
    }

    pub fn tolerance(&self) -> f64 {
        self.cell.tol
    }

    /// V -> H conversion (facet-defining halfspaces with exact incidence).
    pub fn hull_facets(&self) -> HPolytope {
        HPolytope {
            dim: self.dim(),
            halfspaces: self
                .facets()
                .iter()
                .map(|f| Halfspace { normal: f.normal.clone(), offset: f.offset })
                .collect(),
            incidence: self.facets().iter().map(|f| f.vertex_indices.clone()).collect(),
        }
    }

    pub fn volume(&self) -> f64 {
        self.cell.volume
    }

    /// Volume summed over the explicit fan triangulation.
    pub fn triangulated_volume(&self) -> f64 {
        self.simplices().iter().map(|s| super::linalg::simplex_volume(s)).sum()
    }

    /// Fan triangulation from the vertex mean over triangulated facets.
    pub fn simplices(&self) -> Vec<Vec<Point>> {
        self.cell.simplices()
    }

    pub fn centroid(&self) -> Point {
        let (_, c, _) = moments(&self.simplices(), self.dim());
        c
    }

    /// Volume, centroid and second moment `int x x^T` from the triangulation.
    pub fn moments(&self) -> (f64, Point, DMatrix<f64>) {
        moments(&self.simplices(), self.dim())
    }

    /// Vertex mean; always an interior point.
    pub fn vertex_mean(&self) -> Point {
        mean(self.vertices())
    }

    /// (n-1)-volume of a facet, recomputed from its vertices in frame coordinates.
    pub fn facet_measure(&self, facet: &Facet) -> f64 {
        let local: Vec<Point> = facet
            .vertex_indices
            .iter()
            .map(|&i| facet.to_local(&self.vertices()[i]))
            .collect();
        if facet.dim() == 0 {
            return 1.0;
        }
        match Cell::build(local, facet.dim(), self.tolerance()) {
            Ok(c) => c.volume,
            Err(_) => 0.0,
        }
    }

    pub fn support(&self, u: &Point) -> f64 {
        self.vertices()
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Whether every facet has positive offset (origin strictly inside).
    pub fn contains_origin_in_interior(&self) -> bool {
        self.facets().iter().all(|f| f.offset > self.tolerance())
    }

    /// `sup {l >= 0 : l u in P}`.
    pub fn radial(&self, u: &Point) -> Result<f64> {
        if !self.contains_origin_in_interior() {
            return Err(Error::OriginNotInterior);
        }
        if u.norm() == 0.0 {
            return Err(Error::BadParameter("radial direction must be non-zero".into()));
        }
        Ok(self.radial_unchecked(u))
    }

    pub(crate) fn radial_unchecked(&self, u: &Point) -> f64 {
        self.facets()
            .iter()
            .filter_map(|f| {
                let den = u.dot(&f.normal);
                (den > 0.0).then(|| f.offset / den)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether `x` lies in the polytope up to `tol`.
    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        self.facets().iter().all(|f| f.normal.dot(x) <= f.offset + tol)
    }

    /// `P ∩ H` as a vertex polytope.
    pub fn clip(&self, h: &Halfspace) -> Result<VPolytope> {
        let tol = self.tolerance() * coordinate_scale(self.vertices()).max(1.0);
        let signed: Vec<f64> = self.vertices().iter().map(|v| h.normal.dot(v) - h.offset).collect();
        if signed.iter().all(|&s| s <= tol) {
            return Ok(self.clone());
        }
        let mut points: Vec<Point> = self
            .vertices()
            .iter()
            .zip(&signed)
            .filter(|(_, &s)| s <= tol)
            .map(|(v, _)| v.clone())
            .collect();
        if points.is_empty() {
            return Err(Error::EmptyIntersection);
        }
        for (i, j) in self.cell.edges() {
            let (si, sj) = (signed[i], signed[j]);
            if (si < -tol && sj > tol) || (si > tol && sj < -tol) {
                let lambda = si / (si - sj);
                let vi = &self.vertices()[i];
                let vj = &self.vertices()[j];
                points.push(vi + (vj - vi) * lambda);
            }
        }
        VPolytope::hull_of_with_tolerance(points, self.tolerance()).map_err(|e| match e {
            Error::DegenerateInput(_) => Error::EmptyIntersection,
            other => other,
        })
    }

    /// Volume of `P ∩ {<x, u> >= t}`.
    pub fn cap_volume(&self, u: &Point, t: f64) -> f64 {
        let n = u.norm();
        self.cell.cap_volume(&(u / n), t / n)
    }

    /// `|conv[P, x]|`: the volume plus one cone per facet visible from `x`.
    pub fn cone_hull_volume(&self, x: &Point) -> f64 {
        self.volume() + self.cone_hull_excess(x)
    }

    pub(crate) fn cone_hull_excess(&self, x: &Point) -> f64 {
        let n = self.dim() as f64;
        self.facets()
            .iter()
            .map(|f| (f.normal.dot(x) - f.offset).max(0.0) * f.measure / n)
            .sum()
    }

    /// Vertex-wise image under an invertible linear map.
    pub fn apply_linear(&self, l: &DMatrix<f64>) -> Result<VPolytope> {
        let n = self.dim();
        if l.nrows() != n || l.ncols() != n {
            return Err(Error::BadParameter(format!("expected a {n}x{n} matrix")));
        }
        let det = l.determinant();
        let scale = l.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
        if det.abs() <= 1e-12 * scale.powi(n as i32) {
            return Err(Error::SingularMatrix(det));
        }
        let verts = self.vertices().iter().map(|v| l * v).collect();
        VPolytope::with_tolerance(verts, self.tolerance())
    }

    /// Every vertex has its negative among the vertices (within tolerance).
    pub fn is_centrally_symmetric(&self) -> bool {
        let tol = self.tolerance() * coordinate_scale(self.vertices()).max(1.0);
        self.vertices()
            .iter()
            .all(|v| self.vertices().iter().any(|w| (v + w).norm() <= tol))
    }

    /// Index of the vertex equal to `x`, if any.
    pub fn vertex_index(&self, x: &Point) -> Option<usize> {
        let tol = self.tolerance() * coordinate_scale(self.vertices()).max(1.0);
        self.vertices().iter().position(|v| (v - x).norm() <= tol)
    }
}

fn check_dims(points: &[Point]) -> Result<usize> {
    let dim = points
        .first()
        .map(|p| p.len())
        .ok_or_else(|| Error::DegenerateInput("empty vertex list".into()))?;
    if !(1..=4).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::DegenerateInput("vertices have mixed dimensions".into()));
    }
    if points.iter().flat_map(|p| p.iter()).any(|x| !x.is_finite()) {
        return Err(Error::DegenerateInput("non-finite coordinate".into()));
    }
    Ok(dim)
}

/// On-disk polytope format: `{"dim": n, "vertices": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeFile {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl PolytopeFile {
    pub fn from_polytope(p: &VPolytope) -> Self {
        PolytopeFile {
            dim: p.dim(),
            vertices: p.vertices().iter().map(|v| v.iter().copied().collect()).collect(),
        }
    }

    pub fn into_polytope(self) -> Result<VPolytope> {
        self.into_polytope_with_tolerance(DEFAULT_INCIDENCE_TOL)
    }

    pub fn into_polytope_with_tolerance(self, tol: f64) -> Result<VPolytope> {
        if !(2..=4).contains(&self.dim) {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        if self.vertices.iter().any(|v| v.len() != self.dim) {
            return Err(Error::DegenerateInput(format!(
                "every vertex must have {} coordinates",
                self.dim
            )));
        }
        VPolytope::with_tolerance(self.vertices.into_iter().map(DVector::from_vec).collect(), tol)
    }
}
