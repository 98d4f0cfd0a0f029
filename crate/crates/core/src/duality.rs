//! Polarity: polar bodies, the vertex-to-polar-facet correspondence, polars
//! relative to a facet's affine hull, and Santaló points of facets.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::geometry::{Facet, Point, VPolytope};
use crate::numeric::nelder_mead;

/// `P° = {y : <x, y> <= 1 for all x in P}`.
///
/// Vertex `i` of the result is `normal_i / offset_i` for facet `i` of `P`, so
/// the vertex order of the polar follows the facet order of `P`.
pub fn polar(p: &VPolytope) -> Result<VPolytope> {
    if !p.contains_origin_in_interior() {
        return Err(Error::OriginNotInterior);
    }
    let verts = p.facets().iter().map(|f| &f.normal / f.offset).collect();
    VPolytope::with_tolerance(verts, p.tolerance())
}

/// The facet `F_ξ` of `polar_p` with outer normal `ξ/|ξ|`, at offset `1/|ξ|`.
pub fn polar_facet_for_vertex(p: &VPolytope, polar_p: &VPolytope, xi: &Point) -> Result<Facet> {
    p.vertex_index(xi).ok_or(Error::NotAVertex)?;
    let norm = xi.norm();
    let target = xi / norm;
    polar_p
        .facets()
        .iter()
        .find(|f| (&f.normal - &target).norm() < 1e-7 && (f.offset - 1.0 / norm).abs() < 1e-7 * (1.0 + 1.0 / norm))
        .cloned()
        .ok_or(Error::NotAVertex)
}

/// `(F - z)°` taken inside the facet's own (n-1)-dimensional space, in frame coordinates.
pub fn relative_polar(f: &Facet, z: &Point) -> Result<VPolytope> {
    let scale = 1.0 + f.origin.norm();
    if (f.normal.dot(z) - f.offset).abs() > 1e-7 * scale {
        return Err(Error::PointNotInRelativeInterior);
    }
    local_polar(f, &f.to_local(z)).ok_or(Error::PointNotInRelativeInterior)
}

/// Polar of `G - z` for the facet cell `G`, `z` in frame coordinates; `None`
/// unless `z` is strictly inside.
fn local_polar(f: &Facet, z: &Point) -> Option<VPolytope> {
    let cell = &f.cell;
    let tol = cell.tol * (1.0 + crate::geometry::linalg::coordinate_scale(&cell.vertices));
    let mut verts = Vec::with_capacity(cell.facets.len());
    for g in &cell.facets {
        let gap = g.offset - g.normal.dot(z);
        if gap <= tol {
            return None;
        }
        verts.push(&g.normal / gap);
    }
    VPolytope::with_tolerance(verts, cell.tol).ok()
}

/// Stopping rule and iteration cap for [`santalo_point`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SantaloConfig {
    /// Required `|centroid((F - z)°)|` relative to the polar's diameter.
    pub residual: f64,
    pub max_iter: usize,
}

impl Default for SantaloConfig {
    fn default() -> Self {
        SantaloConfig { residual: 1e-10, max_iter: 200 }
    }
}

/// Santaló point of a facet, as an ambient point.
///
/// Segments return their midpoint. Otherwise a damped Newton iteration on the
/// centroid condition `g((F - z)°) = 0` is used: the gradient of
/// `z -> |(F - z)°|` is `(k+1)|Q| g(Q)` and its Hessian `(k+1)(k+2) ∫_Q y yᵀ`
/// with `Q = (F - z)°` and `k = dim F`. Falls back to Nelder-Mead on the
/// volume if Newton stalls.
pub fn santalo_point(f: &Facet, cfg: &SantaloConfig) -> Result<Point> {
    let k = f.dim();
    if k == 0 {
        return Ok(f.origin.clone());
    }
    if k == 1 {
        let v = f.local_vertices();
        let mid = DVector::from_element(1, 0.5 * (v[0][0] + v[1][0]));
        return Ok(f.to_ambient(&mid));
    }
    let local = santalo_local(f, cfg)?;
    Ok(f.to_ambient(&local))
}

fn residual(q: &VPolytope, g: &Point) -> f64 {
    let diam = q.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max) * 2.0;
    g.norm() / diam
}

fn santalo_local(f: &Facet, cfg: &SantaloConfig) -> Result<Point> {
    let k = f.dim() as f64;
    let start = VPolytope::with_tolerance(f.local_vertices().to_vec(), f.cell.tol)
        .map(|c| c.centroid())
        .map_err(|_| Error::DegenerateInput("facet is degenerate".into()))?;
    let mut z = start;
    let mut q = local_polar(f, &z).ok_or(Error::PointNotInRelativeInterior)?;
    let mut last_res = f64::INFINITY;
    for _ in 0..cfg.max_iter {
        let (vol, g, second) = q.moments();
        last_res = residual(&q, &g);
        if last_res <= cfg.residual {
            return Ok(z);
        }
        let hess = second * (k + 2.0);
        let Some(step) = hess.lu().solve(&(-&g * vol)) else { break };
        let mut tau = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand = &z + &step * tau;
            if let Some(q_new) = local_polar(f, &cand) {
                if q_new.volume() <= vol * (1.0 + 1e-14) {
                    z = cand;
                    q = q_new;
                    accepted = true;
                    break;
                }
            }
            tau *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    // Newton stalled: derivative-free descent on the polar volume.
    let objective = |x: &Point| local_polar(f, x).map_or(f64::INFINITY, |q| q.volume());
    let (z_nm, _) = nelder_mead(objective, &z, 0.05 * f.measure.powf(1.0 / k), 1e-15, 2000);
    if let Some(q_nm) = local_polar(f, &z_nm) {
        let (_, g, _) = q_nm.moments();
        let res = residual(&q_nm, &g);
        if res <= cfg.residual {
            return Ok(z_nm);
        }
        last_res = last_res.min(res);
    }
    Err(Error::ConvergenceFailure { iterations: cfg.max_iter, residual: last_res })
}

/// Everything attached to one vertex `ξ` of `P` through its polar facet.
#[derive(Debug, Clone)]
pub struct PolarFacetData {
    pub vertex: Point,
    pub polar_facet: Facet,
    /// Santaló point of `F_ξ` (ambient coordinates).
    pub santalo: Point,
    /// `|(F_ξ - s(F_ξ))°|_{n-1}`.
    pub relative_polar_measure: f64,
}

pub fn polar_facet_data(
    p: &VPolytope,
    polar_p: &VPolytope,
    xi: &Point,
    cfg: &SantaloConfig,
) -> Result<PolarFacetData> {
    let polar_facet = polar_facet_for_vertex(p, polar_p, xi)?;
    let santalo = santalo_point(&polar_facet, cfg)?;
    let relative_polar_measure = relative_polar(&polar_facet, &santalo)?.volume();
    Ok(PolarFacetData { vertex: xi.clone(), polar_facet, santalo, relative_polar_measure })
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::geometry::pt;
    use crate::invariants::generator;

    fn same_vertex_sets(a: &[Point], b: &[Point], tol: f64) -> bool {
        a.len() == b.len() && a.iter().all(|v| b.iter().any(|w| (v - w).norm() <= tol))
    }

    /// A polytope whose single facet is the given (n-1)-dimensional shape,
    /// lifted to height 1: the pyramid over `base x {1}` with apex at a far point.
    fn facet_of(base: &[Point]) -> Facet {
        let k = base[0].len();
        let mut verts: Vec<Point> = base
            .iter()
            .map(|b| Point::from_fn(k + 1, |i, _| if i < k { b[i] } else { 1.0 }))
            .collect();
        verts.push(Point::from_fn(k + 1, |i, _| if i < k { 0.0 } else { -3.0 }));
        let p = VPolytope::new(verts).unwrap();
        let mut up = Point::zeros(k + 1);
        up[k] = 1.0;
        p.facets().iter().find(|f| (&f.normal - &up).norm() < 1e-12).unwrap().clone()
    }

    #[test]
    fn polar_of_cube_is_cross() {
        for n in 2..=4 {
            let c = polar(&generator::cube(n).unwrap()).unwrap();
            assert!(same_vertex_sets(c.vertices(), generator::cross(n).unwrap().vertices(), 1e-12));
        }
    }

    #[test]
    fn hexagon_polar_vertices_and_volume() {
        for eps in [0.1, 0.25, 0.4] {
            let s = (1.0f64 - eps * eps).sqrt();
            let q = polar(&generator::hexagon(eps).unwrap()).unwrap();
            let a = (1.0 - eps) / s;
            let expected = vec![
                pt(&[1.0 / s, 0.0]),
                pt(&[-1.0 / s, 0.0]),
                pt(&[a, 1.0]),
                pt(&[a, -1.0]),
                pt(&[-a, 1.0]),
                pt(&[-a, -1.0]),
            ];
            assert!(same_vertex_sets(q.vertices(), &expected, 1e-12));
            assert!((q.volume() - (4.0 - 2.0 * eps) / s).abs() < 1e-12);
        }
    }

    #[test]
    fn polar_requires_interior_origin() {
        let off = VPolytope::new(vec![pt(&[1.0, 1.0]), pt(&[2.0, 1.0]), pt(&[1.0, 2.0])]).unwrap();
        assert_eq!(polar(&off).unwrap_err(), Error::OriginNotInterior);
    }

    #[test]
    fn bipolar_involution() {
        for seed in 0..5 {
            for n in 2..=3 {
                let p = generator::random_symmetric(n, 6, seed).unwrap();
                let pp = polar(&polar(&p).unwrap()).unwrap();
                assert!(same_vertex_sets(p.vertices(), pp.vertices(), 1e-9));
            }
        }
    }

    #[test]
    fn polar_facets_match_closed_forms() {
        // Cross-polytope, ξ = e_n: F_ξ = e_n + B_inf^{n-1}.
        for n in 2..=4usize {
            let p = generator::cross(n).unwrap();
            let q = polar(&p).unwrap();
            let mut en = Point::zeros(n);
            en[n - 1] = 1.0;
            let f = polar_facet_for_vertex(&p, &q, &en).unwrap();
            assert_eq!(f.vertex_indices.len(), 1 << (n - 1));
            for &i in &f.vertex_indices {
                let y = &q.vertices()[i];
                assert!((y[n - 1] - 1.0).abs() < 1e-12);
                assert!(y.iter().take(n - 1).all(|c| (c.abs() - 1.0).abs() < 1e-12));
            }
            // Cube, ξ = (1,...,1): F_ξ = conv[e_1..e_n].
            let c = generator::cube(n).unwrap();
            let cq = polar(&c).unwrap();
            let f = polar_facet_for_vertex(&c, &cq, &pt(&vec![1.0; n])).unwrap();
            assert_eq!(f.vertex_indices.len(), n);
            for &i in &f.vertex_indices {
                let y = &cq.vertices()[i];
                assert!((y.sum() - 1.0).abs() < 1e-12 && (y.norm() - 1.0).abs() < 1e-12);
            }
        }
        // Hexagon, ξ = e2: segment between (±(1-ε)/sqrt(1-ε²), 1).
        let eps = 0.25f64;
        let h = generator::hexagon(eps).unwrap();
        let hq = polar(&h).unwrap();
        let f = polar_facet_for_vertex(&h, &hq, &pt(&[0.0, 1.0])).unwrap();
        let a = (1.0 - eps) / (1.0 - eps * eps).sqrt();
        let ends: Vec<Point> = f.vertex_indices.iter().map(|&i| hq.vertices()[i].clone()).collect();
        assert!(same_vertex_sets(&ends, &[pt(&[a, 1.0]), pt(&[-a, 1.0])], 1e-12));
        assert!((f.measure - 2.0 * a).abs() < 1e-12);
        assert_eq!(
            polar_facet_for_vertex(&h, &hq, &pt(&[0.5, 0.5])).unwrap_err(),
            Error::NotAVertex
        );
    }

    #[test]
    fn polar_facet_incidence() {
        for seed in 0..4 {
            for n in 2..=3 {
                let p = generator::random_symmetric(n, 6, seed).unwrap();
                let q = polar(&p).unwrap();
                for xi in p.vertices() {
                    let f = polar_facet_for_vertex(&p, &q, xi).unwrap();
                    for (i, y) in q.vertices().iter().enumerate() {
                        let s = xi.dot(y);
                        if f.vertex_indices.contains(&i) {
                            assert!((s - 1.0).abs() < 1e-9);
                        } else {
                            assert!(s < 1.0 - 1e-9);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn relative_polar_examples() {
        // Segment of length 2l about its midpoint -> length 2/l.
        let l = 0.7;
        let seg = facet_of(&[pt(&[-l]), pt(&[l])]);
        let centre = santalo_point(&seg, &SantaloConfig::default()).unwrap();
        assert!((&centre - pt(&[0.0, 1.0])).norm() < 1e-12);
        let rp = relative_polar(&seg, &centre).unwrap();
        assert!((rp.volume() - 2.0 / l).abs() < 1e-12);

        // e_n + B_inf^{n-1} about e_n -> B_1^{n-1}.
        for n in 2..=4usize {
            let p = generator::cross(n).unwrap();
            let q = polar(&p).unwrap();
            let mut en = Point::zeros(n);
            en[n - 1] = 1.0;
            let f = polar_facet_for_vertex(&p, &q, &en).unwrap();
            let rp = relative_polar(&f, &en).unwrap();
            let fact: f64 = (1..n).map(|k| k as f64).product();
            assert!((rp.volume() - 2f64.powi(n as i32 - 1) / fact).abs() < 1e-12);
        }

        // Regular simplex conv[e_1..e_n] about its Santaló point.
        for n in 2..=4usize {
            let c = generator::cube(n).unwrap();
            let q = polar(&c).unwrap();
            let f = polar_facet_for_vertex(&c, &q, &pt(&vec![1.0; n])).unwrap();
            let s = santalo_point(&f, &SantaloConfig::default()).unwrap();
            let fact: f64 = (1..n).map(|k| k as f64).product();
            let expected = (n as f64).powi(n as i32) / ((n as f64).sqrt() * fact);
            assert!((relative_polar(&f, &s).unwrap().volume() - expected).abs() < 1e-9 * expected);
        }

        let f = polar_facet_for_vertex(
            &generator::cube(3).unwrap(),
            &polar(&generator::cube(3).unwrap()).unwrap(),
            &pt(&[1.0, 1.0, 1.0]),
        )
        .unwrap();
        assert_eq!(relative_polar(&f, &pt(&[1.0, 0.0, 0.0])).unwrap_err(), Error::PointNotInRelativeInterior);
        assert_eq!(relative_polar(&f, &pt(&[0.5, 0.5, 0.5])).unwrap_err(), Error::PointNotInRelativeInterior);
    }

    #[test]
    fn santalo_points_of_symmetric_facets() {
        let cfg = SantaloConfig::default();
        // Square facet -> centre.
        let sq = facet_of(&[pt(&[0.0, 0.0]), pt(&[2.0, 0.0]), pt(&[2.0, 2.0]), pt(&[0.0, 2.0])]);
        let s = santalo_point(&sq, &cfg).unwrap();
        assert!((&s - pt(&[1.0, 1.0, 1.0])).norm() < 1e-9);
        // Regular triangle conv[e1, e2, e3] -> barycentre.
        let c = generator::cube(3).unwrap();
        let f = polar_facet_for_vertex(&c, &polar(&c).unwrap(), &pt(&[1.0, 1.0, 1.0])).unwrap();
        let s = santalo_point(&f, &cfg).unwrap();
        assert!((&s - pt(&[1.0, 1.0, 1.0]) / 3.0).norm() < 1e-9);
    }

    #[test]
    fn santalo_is_a_local_minimum() {
        let cfg = SantaloConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let tri = facet_of(&[pt(&[0.0, 0.0]), pt(&[3.0, 0.2]), pt(&[0.4, 1.0]), pt(&[2.0, 1.5])]);
        let s = santalo_point(&tri, &cfg).unwrap();
        let base = relative_polar(&tri, &s).unwrap().volume();
        for _ in 0..20 {
            let h = tri.to_ambient(&pt(&[rng.random_range(-1e-3..1e-3), rng.random_range(-1e-3..1e-3)]))
                - tri.to_ambient(&pt(&[0.0, 0.0]));
            let v = relative_polar(&tri, &(&s + h)).unwrap().volume();
            assert!(v >= base - 1e-9);
        }
        // Centroid of the relative polar sits at the origin.
        let q = relative_polar(&tri, &s).unwrap();
        assert!(q.centroid().norm() < 1e-9);
    }

    #[test]
    fn santalo_equivariance() {
        let cfg = SantaloConfig::default();
        // A facet symmetric under x -> 2 - x: the Santaló point lies on the mirror axis.
        let kite = facet_of(&[pt(&[0.0, 0.0]), pt(&[2.0, 0.0]), pt(&[1.5, 1.0]), pt(&[0.5, 1.0])]);
        let s = kite.to_local(&santalo_point(&kite, &cfg).unwrap());
        let mirrored: Vec<Point> = kite.local_vertices().iter().map(|v| pt(&[-v[0], v[1]])).collect();
        let k_loc: Vec<Point> = kite.local_vertices().to_vec();
        // The mirror is an isometry of the local shape if the mirrored set is a translate.
        let shift = k_loc.iter().map(|v| v[0]).sum::<f64>() / 2.0;
        assert!(mirrored.iter().all(|m| k_loc.iter().any(|v| (pt(&[m[0] + shift, m[1]]) - v).norm() < 1e-9)));
        assert!((s[0] - shift / 2.0).abs() < 1e-8);
    }

    #[test]
    fn santalo_measure_is_translation_invariant() {
        let cfg = SantaloConfig::default();
        let base = [pt(&[0.0, 0.0]), pt(&[3.0, 0.2]), pt(&[0.4, 1.0]), pt(&[2.0, 1.5])];
        let shifted: Vec<Point> = base.iter().map(|b| b + pt(&[0.7, -0.4])).collect();
        let f1 = facet_of(&base);
        let f2 = facet_of(&shifted);
        let m1 = relative_polar(&f1, &santalo_point(&f1, &cfg).unwrap()).unwrap().volume();
        let m2 = relative_polar(&f2, &santalo_point(&f2, &cfg).unwrap()).unwrap().volume();
        assert!((m1 - m2).abs() < 1e-9 * m1);
    }
}
