//! Named example polytopes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use nalgebra::DMatrix;

use crate::geometry::{pt, Point, VPolytope};

/// Parameters for [`generator`]; `dim` defaults to 2 and `eps` is required for the hexagon.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GeneratorParams {
    pub dim: Option<usize>,
    pub eps: Option<f64>,
}

/// Builds a polytope by name: `cube` (B_inf^n), `cross` (B_1^n) or `hexagon` (P(eps) in R^2).
pub fn generator(name: &str, params: GeneratorParams) -> Result<VPolytope> {
    match name {
        "cube" => cube(params.dim.unwrap_or(2)),
        "cross" => cross(params.dim.unwrap_or(2)),
        "hexagon" => {
            if let Some(d) = params.dim {
                if d != 2 {
                    return Err(Error::BadParameter(format!("hexagon lives in R^2, got dim {d}")));
                }
            }
            let eps = params
                .eps
                .ok_or_else(|| Error::BadParameter("hexagon needs eps in (0, 1)".into()))?;
            hexagon(eps)
        }
        other => Err(Error::UnknownGenerator(other.to_string())),
    }
}

fn check_dim(n: usize) -> Result<()> {
    if (2..=4).contains(&n) {
        Ok(())
    } else {
        Err(Error::BadParameter(format!("dimension must be 2, 3 or 4, got {n}")))
    }
}

/// `[-1, 1]^n`.
pub fn cube(n: usize) -> Result<VPolytope> {
    check_dim(n)?;
    let verts = (0..1usize << n)
        .map(|mask| Point::from_fn(n, |i, _| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }))
        .collect();
    VPolytope::new(verts)
}

/// `conv{±e_i}`.
pub fn cross(n: usize) -> Result<VPolytope> {
    check_dim(n)?;
    let mut verts = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut v = Point::zeros(n);
            v[i] = s;
            verts.push(v);
        }
    }
    VPolytope::new(verts)
}

/// `conv[±e2, ±sqrt(1-eps^2) e1 ± eps e2]`.
pub fn hexagon(eps: f64) -> Result<VPolytope> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::BadParameter(format!("hexagon eps must lie in (0, 1), got {eps}")));
    }
    let s = (1.0 - eps * eps).sqrt();
    VPolytope::new(vec![
        pt(&[0.0, 1.0]),
        pt(&[s, eps]),
        pt(&[s, -eps]),
        pt(&[0.0, -1.0]),
        pt(&[-s, -eps]),
        pt(&[-s, eps]),
    ])
}

/// Hull of `pairs` random antipodal point pairs with radii in [0.6, 1]; seeded.
pub fn random_symmetric(n: usize, pairs: usize, seed: u64) -> Result<VPolytope> {
    check_dim(n)?;
    if pairs < n {
        return Err(Error::BadParameter(format!("need at least {n} point pairs")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let mut pts = Vec::with_capacity(2 * pairs);
        while pts.len() < 2 * pairs {
            let v = Point::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let norm = v.norm();
            if !(0.1..=1.0).contains(&norm) {
                continue;
            }
            let v = v * (rng.random_range(0.6..1.0) / norm);
            pts.push(-&v);
            pts.push(v);
        }
        if let Ok(p) = VPolytope::hull_of(pts) {
            return Ok(p);
        }
    }
    Err(Error::DegenerateInput("could not draw a full-dimensional sample".into()))
}

/// Random `n x n` matrix `Q1 diag(s) Q2` with orthogonal `Q1`, `Q2` and singular
/// values in `[1, max_cond]`, so its condition number is at most `max_cond`.
pub fn random_linear_map(n: usize, max_cond: f64, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orthogonal = || {
        let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        m.qr().q()
    };
    let q1 = orthogonal();
    let q2 = orthogonal();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut s: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..max_cond)).collect();
    s[0] = 1.0;
    q1 * DMatrix::from_diagonal(&Point::from_vec(s)) * q2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_generators() {
        let c = generator("cube", GeneratorParams { dim: Some(3), eps: None }).unwrap();
        assert_eq!(c.vertices().len(), 8);
        assert!(c.vertices().iter().all(|v| v.iter().all(|x| x.abs() == 1.0)));
        let x = generator("cross", GeneratorParams { dim: Some(3), eps: None }).unwrap();
        assert_eq!(x.vertices().len(), 6);
        assert!(x.vertices().iter().all(|v| (v.norm() - 1.0).abs() < 1e-15));
        let h = generator("hexagon", GeneratorParams { dim: None, eps: Some(0.25) }).unwrap();
        assert_eq!(h.vertices().len(), 6);
        let s = (1.0f64 - 0.0625).sqrt();
        assert!(h.vertex_index(&pt(&[s, 0.25])).is_some());
        assert!(h.vertex_index(&pt(&[0.0, -1.0])).is_some());
    }

    #[test]
    fn generator_errors() {
        assert!(matches!(generator("dodecahedron", GeneratorParams::default()), Err(Error::UnknownGenerator(_))));
        assert!(matches!(hexagon(1.0), Err(Error::BadParameter(_))));
        assert!(matches!(hexagon(0.0), Err(Error::BadParameter(_))));
        assert!(matches!(generator("hexagon", GeneratorParams::default()), Err(Error::BadParameter(_))));
        assert!(matches!(cube(5), Err(Error::BadParameter(_))));
    }

    #[test]
    fn random_maps_are_well_conditioned() {
        for seed in 0..10 {
            let l = random_linear_map(3, 10.0, seed);
            let sv = l.singular_values();
            let cond = sv.max() / sv.min();
            assert!((1.0..=10.0 + 1e-9).contains(&cond));
        }
    }

    #[test]
    fn random_symmetric_is_symmetric_and_seeded() {
        for seed in 0..5 {
            let p = random_symmetric(3, 6, seed).unwrap();
            assert!(p.is_centrally_symmetric());
            let q = random_symmetric(3, 6, seed).unwrap();
            assert_eq!(p.vertices(), q.vertices());
        }
    }
}
