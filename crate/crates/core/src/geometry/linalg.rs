//! Small dense helpers for n <= 4.

use nalgebra::{DMatrix, DVector};

use super::Point;

/// Normal of the hyperplane through `d` points in R^d (generalized cross
/// product of the difference vectors). Not normalized; zero when the points
/// are affinely dependent.
pub(crate) fn hyperplane_normal(points: &[&Point]) -> Point {
    let d = points[0].len();
    debug_assert_eq!(points.len(), d);
    if d == 1 {
        return DVector::from_element(1, 1.0);
    }
    let rows = d - 1;
    let mut m = DMatrix::<f64>::zeros(rows, d);
    for r in 0..rows {
        let diff = points[r + 1] - points[0];
        m.set_row(r, &diff.transpose());
    }
    let mut normal = DVector::zeros(d);
    for j in 0..d {
        let minor = m.clone().remove_column(j);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        normal[j] = sign * minor.determinant();
    }
    normal
}

/// Orthonormal basis for the span of `vectors`, built by modified Gram-Schmidt
/// in input order after projecting out `exclude`. Stops at `want` vectors.
pub(crate) fn orthonormal_span(
    vectors: impl IntoIterator<Item = Point>,
    exclude: &Point,
    want: usize,
    scale: f64,
) -> Vec<Point> {
    let mut basis: Vec<Point> = Vec::with_capacity(want);
    let ex_norm = exclude.norm();
    for mut v in vectors {
        if basis.len() == want {
            break;
        }
        if ex_norm > 0.0 {
            let e = exclude / ex_norm;
            let c = v.dot(&e);
            v.axpy(-c, &e, 1.0);
        }
        for b in &basis {
            let c = v.dot(b);
            v.axpy(-c, b, 1.0);
        }
        let n = v.norm();
        if n > 1e-10 * scale.max(1.0) {
            basis.push(v / n);
        }
    }
    basis
}

/// Affine rank of a point set.
pub(crate) fn affine_rank(points: &[Point], tol: f64) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let d = points[0].len();
    let mut m = DMatrix::<f64>::zeros(points.len() - 1, d);
    for (r, p) in points[1..].iter().enumerate() {
        m.set_row(r, &(p - &points[0]).transpose());
    }
    let scale = m.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
    m.rank(tol * scale)
}

/// Rank of a set of vectors.
pub(crate) fn rank(vectors: &[&Point], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let d = vectors[0].len();
    let m = DMatrix::from_fn(vectors.len(), d, |r, c| vectors[r][c]);
    m.rank(tol)
}

/// Volume of the simplex spanned by `d + 1` points in R^d.
pub(crate) fn simplex_volume(vertices: &[Point]) -> f64 {
    let d = vertices.len() - 1;
    if d == 0 {
        return 1.0;
    }
    let m = DMatrix::from_fn(d, d, |r, c| vertices[r + 1][c] - vertices[0][c]);
    m.determinant().abs() / factorial(d)
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Largest absolute coordinate, used to scale tolerances.
pub(crate) fn coordinate_scale(points: &[Point]) -> f64 {
    points
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |a, x| a.max(x.abs()))
}
