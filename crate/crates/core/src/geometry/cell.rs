//! Recursive facet structure of a full-dimensional polytope.
//!
//! A [`Cell`] is a polytope in its own coordinate space R^d together with its
//! facets; each facet carries an orthonormal frame and the facet itself as a
//! `(d-1)`-dimensional [`Cell`] in frame coordinates. The recursion bottoms out
//! at dimension 0 (a single point of measure 1).
//!
//! Facets are found by brute force over all d-subsets of vertices. This is
//! O(m^d) but exact up to the incidence tolerance and fine for m <= 100.

use std::collections::HashSet;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use super::linalg::{affine_rank, coordinate_scale, hyperplane_normal, orthonormal_span, rank};
use super::Point;
use crate::error::{Error, Result};

/// An (n-1)-face of a polytope: supporting hyperplane, frame and measure.
#[derive(Debug, Clone)]
pub struct Facet {
    /// Indices (into the parent's vertex list) of vertices on this facet, ascending.
    pub vertex_indices: Vec<usize>,
    /// Outer unit normal.
    pub normal: Point,
    /// The facet lies in `<x, normal> = offset`.
    pub offset: f64,
    /// First incident vertex; origin of the local frame.
    pub origin: Point,
    /// Orthonormal basis of the facet's direction space (n-1 vectors).
    pub basis: Vec<Point>,
    /// (n-1)-dimensional volume.
    pub measure: f64,
    pub(crate) cell: Cell,
}

impl Facet {
    /// Coordinates of an ambient point in the facet frame.
    pub fn to_local(&self, x: &Point) -> Point {
        let diff = x - &self.origin;
        DVector::from_iterator(self.basis.len(), self.basis.iter().map(|b| b.dot(&diff)))
    }

    /// Ambient point for frame coordinates `y`.
    pub fn to_ambient(&self, y: &Point) -> Point {
        let mut x = self.origin.clone();
        for (b, c) in self.basis.iter().zip(y.iter()) {
            x.axpy(*c, b, 1.0);
        }
        x
    }

    /// Vertices of the facet in frame coordinates.
    pub fn local_vertices(&self) -> &[Point] {
        &self.cell.vertices
    }

    /// Facet dimension (n - 1).
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Cell {
    pub(crate) dim: usize,
    pub(crate) vertices: Vec<Point>,
    pub(crate) facets: Vec<Facet>,
    pub(crate) volume: f64,
    pub(crate) tol: f64,
}

impl Cell {
    /// Build the facet structure of `vertices` (assumed irredundant) in R^dim.
    pub(crate) fn build(vertices: Vec<Point>, dim: usize, tol: f64) -> Result<Cell> {
        match dim {
            0 => Ok(Cell { dim, vertices, facets: Vec::new(), volume: 1.0, tol }),
            1 => Self::build_interval(vertices, tol),
            _ => Self::build_general(vertices, dim, tol),
        }
    }

    fn build_interval(vertices: Vec<Point>, tol: f64) -> Result<Cell> {
        let (imin, lo) = vertices
            .iter()
            .map(|v| v[0])
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::DegenerateInput("empty vertex list".into()))?;
        let (imax, hi) = vertices
            .iter()
            .map(|v| v[0])
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        if hi - lo <= tol {
            return Err(Error::DegenerateInput("segment has zero length".into()));
        }
        let point = |idx: usize, sign: f64, offset: f64| Facet {
            vertex_indices: vec![idx],
            normal: DVector::from_element(1, sign),
            offset,
            origin: vertices[idx].clone(),
            basis: Vec::new(),
            measure: 1.0,
            cell: Cell {
                dim: 0,
                vertices: vec![DVector::zeros(0)],
                facets: Vec::new(),
                volume: 1.0,
                tol,
            },
        };
        let facets = vec![point(imax, 1.0, hi), point(imin, -1.0, -lo)];
        Ok(Cell { dim: 1, volume: hi - lo, vertices, facets, tol })
    }

    fn build_general(vertices: Vec<Point>, dim: usize, tol: f64) -> Result<Cell> {
        let m = vertices.len();
        if m < dim + 1 || affine_rank(&vertices, 1e-12) < dim {
            return Err(Error::DegenerateInput(format!(
                "affine hull of {m} points has dimension < {dim}"
            )));
        }
        let scale = coordinate_scale(&vertices).max(1.0);
        let mut facets: Vec<Facet> = Vec::new();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut member: Vec<Vec<bool>> = Vec::new();

        for combo in (0..m).combinations(dim) {
            if member.iter().any(|mask| combo.iter().all(|&i| mask[i])) {
                continue;
            }
            let pts: Vec<&Point> = combo.iter().map(|&i| &vertices[i]).collect();
            let raw = hyperplane_normal(&pts);
            let edge_scale: f64 = pts[1..]
                .iter()
                .map(|p| (*p - pts[0]).norm())
                .product::<f64>()
                .max(f64::MIN_POSITIVE);
            let len = raw.norm();
            if len <= 1e-12 * edge_scale {
                continue;
            }
            let mut normal = raw / len;
            let mut offset = normal.dot(pts[0]);
            let signed: Vec<f64> = vertices.iter().map(|v| normal.dot(v) - offset).collect();
            let above = signed.iter().any(|&s| s > tol * scale);
            let below = signed.iter().any(|&s| s < -tol * scale);
            if above && below {
                continue;
            }
            if above {
                normal = -normal;
                offset = -offset;
            }
            let incidence: Vec<usize> =
                (0..m).filter(|&i| signed[i].abs() <= tol * scale).collect();
            if !seen.insert(incidence.clone()) {
                continue;
            }
            let mut mask = vec![false; m];
            for &i in &incidence {
                mask[i] = true;
            }
            member.push(mask);
            facets.push(Self::make_facet(&vertices, incidence, normal, offset, dim, tol, scale)?);
        }
        if facets.len() < dim + 1 {
            return Err(Error::DegenerateInput("fewer than n+1 facets".into()));
        }
        let apex = mean(&vertices);
        let volume = facets
            .iter()
            .map(|f| (f.offset - f.normal.dot(&apex)) * f.measure)
            .sum::<f64>()
            / dim as f64;
        Ok(Cell { dim, vertices, facets, volume, tol })
    }

    fn make_facet(
        vertices: &[Point],
        incidence: Vec<usize>,
        normal: Point,
        offset: f64,
        dim: usize,
        tol: f64,
        scale: f64,
    ) -> Result<Facet> {
        // Snap incident vertices onto the hyperplane before building the frame.
        let snapped: Vec<Point> = incidence
            .iter()
            .map(|&i| {
                let v = &vertices[i];
                v - &normal * (normal.dot(v) - offset)
            })
            .collect();
        let origin_s = snapped[0].clone();
        let basis = orthonormal_span(
            snapped[1..].iter().map(|v| v - &origin_s),
            &normal,
            dim - 1,
            scale,
        );
        if basis.len() != dim - 1 {
            return Err(Error::DegenerateInput("facet frame is rank deficient".into()));
        }
        let local: Vec<Point> = snapped
            .iter()
            .map(|v| {
                let diff = v - &origin_s;
                DVector::from_iterator(dim - 1, basis.iter().map(|b| b.dot(&diff)))
            })
            .collect();
        let cell = Cell::build(local, dim - 1, tol)?;
        Ok(Facet {
            vertex_indices: incidence,
            normal,
            offset,
            origin: origin_s,
            basis,
            measure: cell.volume,
            cell,
        })
    }

    /// Vertices that are not extreme (their incident facet normals do not span R^d).
    pub(crate) fn redundant_vertices(&self) -> Vec<usize> {
        if self.dim <= 1 {
            let ends: HashSet<usize> =
                self.facets.iter().map(|f| f.vertex_indices[0]).collect();
            return (0..self.vertices.len()).filter(|i| !ends.contains(i)).collect();
        }
        (0..self.vertices.len())
            .filter(|&i| {
                let normals: Vec<&Point> = self
                    .facets
                    .iter()
                    .filter(|f| f.vertex_indices.binary_search(&i).is_ok())
                    .map(|f| &f.normal)
                    .collect();
                rank(&normals, 1e-9) < self.dim
            })
            .collect()
    }

    /// Triangulation into d-simplices: a fan from an interior apex (vertex mean)
    /// over the facets, each facet fan-triangulated from its first vertex.
    pub(crate) fn simplices(&self) -> Vec<Vec<Point>> {
        let apex = mean(&self.vertices);
        self.fan_from(&apex, None)
    }

    fn fan_from(&self, apex: &Point, skip_vertex: Option<usize>) -> Vec<Vec<Point>> {
        match self.dim {
            0 => vec![vec![self.vertices[0].clone()]],
            _ => {
                let mut out = Vec::new();
                for f in &self.facets {
                    if let Some(v) = skip_vertex {
                        if f.vertex_indices.binary_search(&v).is_ok() {
                            continue;
                        }
                    }
                    // First local vertex of the facet cell is local index 0.
                    let first = f.cell.vertices[0].clone();
                    let sub = if f.cell.dim == 0 {
                        f.cell.fan_from(&first, None)
                    } else {
                        f.cell.fan_from(&first, Some(0))
                    };
                    for s in sub {
                        let mut simplex = Vec::with_capacity(self.dim + 1);
                        simplex.push(apex.clone());
                        simplex.extend(s.iter().map(|y| f.to_ambient(y)));
                        out.push(simplex);
                    }
                }
                out
            }
        }
    }

    /// Volume of `{x in cell : <x, u> >= t}` for unit `u`, by the cone
    /// decomposition from an apex on the cutting hyperplane.
    pub(crate) fn cap_volume(&self, u: &Point, t: f64) -> f64 {
        if self.dim == 0 {
            return 1.0;
        }
        let mut total = 0.0;
        for f in &self.facets {
            let height = f.offset - t * u.dot(&f.normal);
            if height == 0.0 {
                continue;
            }
            let level = f.origin.dot(u);
            let sub = if f.cell.dim == 0 {
                if level >= t {
                    1.0
                } else {
                    0.0
                }
            } else {
                let w = DVector::from_iterator(f.basis.len(), f.basis.iter().map(|b| b.dot(u)));
                let wn = w.norm();
                if wn < 1e-12 {
                    if level >= t {
                        f.measure
                    } else {
                        0.0
                    }
                } else {
                    f.cell.cap_volume(&(w / wn), (t - level) / wn)
                }
            };
            total += height * sub;
        }
        (total / self.dim as f64).max(0.0)
    }

    /// Edges: vertex pairs sharing at least d-1 facets.
    pub(crate) fn edges(&self) -> Vec<(usize, usize)> {
        let m = self.vertices.len();
        let need = self.dim.saturating_sub(1).max(1);
        let mut out = Vec::new();
        for i in 0..m {
            for j in (i + 1)..m {
                let shared = self
                    .facets
                    .iter()
                    .filter(|f| {
                        f.vertex_indices.binary_search(&i).is_ok()
                            && f.vertex_indices.binary_search(&j).is_ok()
                    })
                    .count();
                if shared >= need {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

pub(crate) fn mean(points: &[Point]) -> Point {
    let d = points[0].len();
    let mut acc = DVector::zeros(d);
    for p in points {
        acc += p;
    }
    acc / points.len() as f64
}

/// Volume, centroid and second moment `int x x^T dx` of a simplex list.
pub(crate) fn moments(simplices: &[Vec<Point>], dim: usize) -> (f64, Point, DMatrix<f64>) {
    let mut vol = 0.0;
    let mut first = DVector::zeros(dim);
    let mut second = DMatrix::zeros(dim, dim);
    for s in simplices {
        let v = super::linalg::simplex_volume(s);
        if v == 0.0 {
            continue;
        }
        let mut sum = DVector::zeros(dim);
        let mut outer = DMatrix::zeros(dim, dim);
        for p in s {
            sum += p;
            outer += p * p.transpose();
        }
        vol += v;
        first += &sum * (v / (dim + 1) as f64);
        second += (outer + &sum * sum.transpose()) * (v / ((dim + 1) * (dim + 2)) as f64);
    }
    let centroid = if vol > 0.0 { first / vol } else { first };
    (vol, centroid, second)
}
