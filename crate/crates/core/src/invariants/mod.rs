//! Per-vertex cone-measure constants and the affine invariant `G(P)`.

pub mod generator;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::duality::{self, SantaloConfig};
use crate::error::{Error, Result};
use crate::geometry::{Point, VPolytope};

/// Constants attached to one vertex `ξ` of a symmetric polytope `P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexInvariants {
    pub vertex: Vec<f64>,
    /// `n_P(ξ) = ‖ξ‖ |(F_ξ - s)°| / (n |P|)`.
    pub cone_density: f64,
    /// `n_{P°}(ξ) = |F_ξ| / (n |P°| ‖ξ‖)`.
    pub cone_density_polar: f64,
    pub alpha: f64,
    pub beta: f64,
    /// `|F_ξ|_{n-1}` for the polar facet.
    pub polar_facet_measure: f64,
    /// `|(F_ξ - s(F_ξ))°|_{n-1}`.
    pub relative_polar_measure: f64,
    pub santalo_point: Vec<f64>,
}

impl VertexInvariants {
    /// Where the falling branch `α - cβ` meets the rising branch `c β_max`.
    pub fn crossing(&self, beta_max: f64) -> f64 {
        self.alpha / (self.beta + beta_max)
    }

    fn mirrored(&self) -> VertexInvariants {
        VertexInvariants {
            vertex: self.vertex.iter().map(|x| -x).collect(),
            santalo_point: self.santalo_point.iter().map(|x| -x).collect(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub dim: usize,
    pub volume: f64,
    pub polar_volume: f64,
    /// One row per vertex of `P`, in vertex order.
    pub per_vertex: Vec<VertexInvariants>,
    pub beta_max: f64,
    pub lambda: f64,
    pub g: f64,
    pub c_star: f64,
    /// Indices of the vertices whose falling branch is active at `c_star`.
    pub arg_vertices: Vec<usize>,
    /// `G` recomputed directly from the cone-measure densities.
    pub g_cone_form: f64,
}

impl InvariantReport {
    /// `G_c(P) = max(max_ξ(α_ξ - c β_ξ), c β)`.
    pub fn g_at(&self, c: f64) -> f64 {
        g_c(&self.per_vertex, self.beta_max, c)
    }

    pub fn max_crossing(&self) -> f64 {
        self.per_vertex.iter().map(|v| v.crossing(self.beta_max)).fold(0.0, f64::max)
    }
}

pub fn g_c(rows: &[VertexInvariants], beta_max: f64, c: f64) -> f64 {
    let falling = rows.iter().map(|v| v.alpha - c * v.beta).fold(f64::NEG_INFINITY, f64::max);
    falling.max(c * beta_max)
}

fn check_symmetric(p: &VPolytope) -> Result<()> {
    if !p.is_centrally_symmetric() {
        return Err(Error::SymmetryRequired);
    }
    if !p.contains_origin_in_interior() {
        return Err(Error::OriginNotInterior);
    }
    Ok(())
}

pub fn vertex_invariants(p: &VPolytope, xi: &Point) -> Result<VertexInvariants> {
    check_symmetric(p)?;
    let polar = duality::polar(p)?;
    vertex_invariants_with(p, &polar, xi, &SantaloConfig::default())
}

/// As [`vertex_invariants`], reusing a precomputed polar.
pub fn vertex_invariants_with(
    p: &VPolytope,
    polar: &VPolytope,
    xi: &Point,
    cfg: &SantaloConfig,
) -> Result<VertexInvariants> {
    let n = p.dim() as f64;
    let data = duality::polar_facet_data(p, polar, xi, cfg)?;
    let norm = xi.norm();
    let vol = p.volume();
    let polar_vol = polar.volume();
    let fm = data.polar_facet.measure;
    let rm = data.relative_polar_measure;
    Ok(VertexInvariants {
        vertex: xi.iter().copied().collect(),
        cone_density: norm * rm / (n * vol),
        cone_density_polar: fm / (n * polar_vol * norm),
        alpha: (n * vol / (rm * norm)).powf(1.0 / n),
        beta: n * polar_vol * norm / fm,
        polar_facet_measure: fm,
        relative_polar_measure: rm,
        santalo_point: data.santalo.iter().copied().collect(),
    })
}

/// `Λ = min over facets F of P of |P| / (b_F |F|)`, i.e. `|P| ‖ζ‖ / |F_ζ|` over polar vertices `ζ = n_F / b_F`.
pub fn lambda_constant(p: &VPolytope) -> Result<f64> {
    check_symmetric(p)?;
    let vol = p.volume();
    Ok(p.facets().iter().map(|f| vol / (f.offset * f.measure)).fold(f64::INFINITY, f64::min))
}

pub fn invariant_g(p: &VPolytope) -> Result<InvariantReport> {
    invariant_g_with(p, &SantaloConfig::default())
}

pub fn invariant_g_with(p: &VPolytope, cfg: &SantaloConfig) -> Result<InvariantReport> {
    check_symmetric(p)?;
    let polar = duality::polar(p)?;
    let verts = p.vertices();
    let partner: Vec<usize> =
        verts.iter().map(|v| p.vertex_index(&-v).ok_or(Error::SymmetryRequired)).collect::<Result<_>>()?;
    let reps: Vec<usize> = (0..verts.len()).filter(|&i| partner[i] > i).collect();
    let computed: Vec<VertexInvariants> = reps
        .par_iter()
        .map(|&i| vertex_invariants_with(p, &polar, &verts[i], cfg))
        .collect::<Result<_>>()?;
    let mut rows: Vec<Option<VertexInvariants>> = vec![None; verts.len()];
    for (&i, row) in reps.iter().zip(computed) {
        rows[partner[i]] = Some(row.mirrored());
        rows[i] = Some(row);
    }
    let per_vertex: Vec<VertexInvariants> = rows.into_iter().map(|r| r.expect("every vertex has a partner")).collect();

    let beta_max = per_vertex.iter().map(|v| v.beta).fold(0.0, f64::max);
    let (c_star, g) = per_vertex
        .iter()
        .map(|v| {
            let c = v.crossing(beta_max);
            (c, g_c(&per_vertex, beta_max, c))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("polytope has vertices");
    let falling = g_c(&per_vertex, beta_max, c_star);
    let arg_vertices = per_vertex
        .iter()
        .enumerate()
        .filter(|(_, v)| (v.alpha - c_star * v.beta - falling).abs() <= 1e-12 * falling.max(1.0))
        .map(|(i, _)| i)
        .collect();

    Ok(InvariantReport {
        dim: p.dim(),
        volume: p.volume(),
        polar_volume: polar.volume(),
        g_cone_form: g_from_densities(&per_vertex, p.dim()),
        per_vertex,
        beta_max,
        lambda: lambda_constant(p)?,
        g,
        c_star,
        arg_vertices,
    })
}

/// `min_c max(max_ξ (n°(ξ) - c n(ξ)^{1/n}) / (n(ξ)^{1/n} n°(ξ)), c / min_ξ n°(ξ))`,
/// evaluated at the crossings `c = n(ξ)^{-1/n} / (1/n°(ξ) + 1/m)`.
fn g_from_densities(rows: &[VertexInvariants], dim: usize) -> f64 {
    let inv_n = 1.0 / dim as f64;
    let m = rows.iter().map(|v| v.cone_density_polar).fold(f64::INFINITY, f64::min);
    let value = |c: f64| {
        let falling = rows
            .iter()
            .map(|v| {
                let root = v.cone_density.powf(inv_n);
                (v.cone_density_polar - c * root) / (root * v.cone_density_polar)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        falling.max(c / m)
    };
    rows.iter()
        .map(|v| v.cone_density.powf(-inv_n) / (1.0 / v.cone_density_polar + 1.0 / m))
        .map(value)
        .fold(f64::INFINITY, f64::min)
}
