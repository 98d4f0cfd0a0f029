//! Incremental (beneath-beyond) convex hull for larger point sets.
//!
//! Facets are simplices, so coplanar facets come out split. Callers that need
//! true facets feed the surviving vertices to the exact `Cell` builder.

use std::collections::HashMap;

use super::linalg::{coordinate_scale, hyperplane_normal, rank};
use super::Point;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct Simplex {
    pub vertices: Vec<usize>,
    pub normal: Point,
    pub offset: f64,
}

/// Simplicial facets of `conv(points)`, with vertex indices into `points`.
/// A point within `tol` (relative to the coordinate scale) of the current
/// hull is treated as inside.
pub(crate) fn simplicial_hull(points: &[Point], tol: f64) -> Result<Vec<Simplex>> {
    let Some(dim) = points.first().map(|p| p.len()) else {
        return Err(Error::DegenerateInput("no points".into()));
    };
    if dim < 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    let eps = tol * coordinate_scale(points).max(1.0);
    let start = initial_simplex(points, dim, eps)?;
    let inside = start.iter().fold(Point::zeros(dim), |acc, &i| acc + &points[i]) / (dim + 1) as f64;

    let make = |vertices: Vec<usize>| -> Option<Simplex> {
        let pts: Vec<&Point> = vertices.iter().map(|&i| &points[i]).collect();
        let raw = hyperplane_normal(&pts);
        let len = raw.norm();
        if !(len > 0.0) {
            return None;
        }
        let mut normal = raw / len;
        let mut offset = normal.dot(pts[0]);
        if normal.dot(&inside) > offset {
            normal = -normal;
            offset = -offset;
        }
        Some(Simplex { vertices, normal, offset })
    };

    let mut facets: Vec<Simplex> = (0..=dim)
        .filter_map(|skip| {
            let vs: Vec<usize> = start.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect();
            make(vs)
        })
        .collect();

    // Far points first: they remove the most interior points early.
    let mut order: Vec<usize> = (0..points.len()).filter(|i| !start.contains(i)).collect();
    order.sort_by(|&a, &b| (&points[b] - &inside).norm().total_cmp(&(&points[a] - &inside).norm()));

    for p in order {
        let x = &points[p];
        let visible: Vec<bool> = facets.iter().map(|f| f.normal.dot(x) - f.offset > eps).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        // Ridges seen once among the visible facets form the horizon.
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for (f, _) in facets.iter().zip(&visible).filter(|(_, &v)| v) {
            for skip in 0..dim {
                let mut ridge: Vec<usize> = f.vertices.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect();
                ridge.sort_unstable();
                *ridges.entry(ridge).or_insert(0) += 1;
            }
        }
        let mut kept: Vec<Simplex> = facets.into_iter().zip(visible).filter(|(_, v)| !v).map(|(f, _)| f).collect();
        let mut horizon: Vec<Vec<usize>> = ridges.into_iter().filter(|(_, c)| *c == 1).map(|(r, _)| r).collect();
        horizon.sort();
        for mut ridge in horizon {
            ridge.push(p);
            if let Some(f) = make(ridge) {
                kept.push(f);
            }
        }
        facets = kept;
    }
    Ok(facets)
}

/// `dim + 1` affinely independent points, chosen greedily by distance.
fn initial_simplex(points: &[Point], dim: usize, eps: f64) -> Result<Vec<usize>> {
    let far = |from: &Point| {
        (0..points.len()).max_by(|&a, &b| (&points[a] - from).norm().total_cmp(&(&points[b] - from).norm()))
    };
    let a = far(&points[0]).unwrap();
    let b = far(&points[a]).unwrap();
    let mut chosen = vec![a, b];
    // Orthonormal basis of the current affine span.
    let mut basis: Vec<Point> = vec![(&points[b] - &points[a]).normalize()];
    if !((&points[b] - &points[a]).norm() > eps) {
        return Err(Error::DegenerateInput("all points coincide".into()));
    }
    while chosen.len() < dim + 1 {
        let residual = |i: usize| {
            let mut r = &points[i] - &points[a];
            for q in &basis {
                r -= q * q.dot(&r);
            }
            r
        };
        let best = (0..points.len())
            .max_by(|&i, &j| residual(i).norm().total_cmp(&residual(j).norm()))
            .unwrap();
        let r = residual(best);
        if !(r.norm() > eps) {
            return Err(Error::DegenerateInput(format!("points span fewer than {dim} dimensions")));
        }
        basis.push(r.normalize());
        chosen.push(best);
    }
    Ok(chosen)
}

/// Indices of the vertices of `conv(points)`. Boundary points that ended up
/// in the triangulation are dropped: their incident facet normals do not
/// span the space.
pub(crate) fn extreme_indices(points: &[Point], tol: f64) -> Result<Vec<usize>> {
    let facets = simplicial_hull(points, tol)?;
    let dim = points[0].len();
    let mut incident: HashMap<usize, Vec<&Point>> = HashMap::new();
    for f in &facets {
        for &v in &f.vertices {
            incident.entry(v).or_default().push(&f.normal);
        }
    }
    let mut used: Vec<usize> = incident.into_iter().filter(|(_, n)| rank(n, 1e-9) == dim).map(|(i, _)| i).collect();
    used.sort_unstable();
    Ok(used)
}
