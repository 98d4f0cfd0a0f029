//! Numerical side: floating bodies, illumination bodies, the sandwich
//! distance `d` and the optimized distance `d_P(δ)`.

mod floating;
mod grid;
mod illumination;
mod search;

pub use floating::{floating_radial, floating_support, vertex_float_ratio, FloatingBody, DEFAULT_CAP_TOL};
pub use grid::{default_grid_size, DirectionGrid, GridKind};
pub use illumination::{illumination_candidates, illumination_radial, polar_illumination_oracle, PolarIllumination};
pub use search::{
    convergence_table, dp_delta, extrapolate, inclusion_chain_check, uniform_bound_check, uniform_constant,
    BoundReport, BoundRow, ConvergenceRow, ConvergenceTable, DpResult, InclusionReport, SearchConfig,
};

use std::f64::consts::PI;

use grid::{angle_point, planar_angle};

use crate::duality::{self, SantaloConfig};
use crate::error::{Error, Result};
use crate::geometry::{Point, VPolytope};
use crate::numeric::golden_min;

/// A star body seen through its radial and support functions.
pub trait BodyOracle: Sync {
    fn label(&self) -> &str;
    fn dim(&self) -> usize;
    /// `sup {l >= 0 : l u in K}`.
    fn radial(&self, u: &Point) -> f64;
    /// Same as `radial` for exact oracles; approximating oracles may spend more work here.
    fn radial_precise(&self, u: &Point) -> f64 {
        self.radial(u)
    }
    fn support(&self, u: &Point) -> f64;
    /// Directions where the radial function is not smooth.
    fn kinks(&self) -> Vec<Point> {
        Vec::new()
    }
}

#[derive(Debug, Clone)]
pub struct PolytopeOracle {
    p: VPolytope,
    label: String,
}

impl PolytopeOracle {
    pub fn new(p: VPolytope, label: impl Into<String>) -> Result<Self> {
        if !p.contains_origin_in_interior() {
            return Err(Error::OriginNotInterior);
        }
        Ok(PolytopeOracle { p, label: label.into() })
    }
}

impl BodyOracle for PolytopeOracle {
    fn label(&self) -> &str {
        &self.label
    }

    fn dim(&self) -> usize {
        self.p.dim()
    }

    fn radial(&self, u: &Point) -> f64 {
        self.p.radial_unchecked(u)
    }

    fn support(&self, u: &Point) -> f64 {
        self.p.support(u)
    }

    fn kinks(&self) -> Vec<Point> {
        self.p.vertices().iter().map(|v| v / v.norm()).collect()
    }
}

/// `r B_2^n`.
#[derive(Debug, Clone)]
pub struct BallOracle {
    pub dim: usize,
    pub radius: f64,
}

impl BodyOracle for BallOracle {
    fn label(&self) -> &str {
        "ball"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn radial(&self, u: &Point) -> f64 {
        self.radius / u.norm()
    }

    fn support(&self, u: &Point) -> f64 {
        self.radius * u.norm()
    }
}

/// A grid for `P` with the directions of its vertices, its facet normals and
/// the Santaló points of its polar facets added.
pub fn polytope_grid(p: &VPolytope, size: usize, seed: u64) -> Result<DirectionGrid> {
    let polar = duality::polar(p)?;
    let cfg = SantaloConfig::default();
    let mut extra: Vec<Point> = p.vertices().to_vec();
    extra.extend(polar.vertices().iter().cloned());
    for xi in p.vertices() {
        let f = duality::polar_facet_for_vertex(p, &polar, xi)?;
        extra.push(duality::santalo_point(&f, &cfg)?);
    }
    Ok(DirectionGrid::new(p.dim(), size, seed)?.with_extra(&extra))
}

/// Number of local maxima refined by [`distance_d`] in the plane.
const REFINED_MAXIMA: usize = 8;

/// `d(A, B) = sup_u max(r_A/r_B, r_B/r_A)` over the grid and both bodies'
/// kink directions. In the plane the largest local maxima are refined by
/// golden-section search on the angle.
pub fn distance_d(a: &dyn BodyOracle, b: &dyn BodyOracle, grid: &DirectionGrid) -> Result<f64> {
    if a.dim() != b.dim() || grid.dim() != a.dim() {
        return Err(Error::BadParameter("dimension mismatch between bodies and grid".into()));
    }
    let ratio = |u: &Point, precise: bool| -> f64 {
        let (ra, rb) = if precise { (a.radial_precise(u), b.radial_precise(u)) } else { (a.radial(u), b.radial(u)) };
        (ra / rb).max(rb / ra)
    };
    let mut dirs: Vec<(Point, bool)> = grid.directions().iter().map(|u| (u.clone(), false)).collect();
    for k in a.kinks().into_iter().chain(b.kinks()) {
        let norm = k.norm();
        if norm > 0.0 {
            dirs.push((k / norm, true));
        }
    }
    if a.dim() == 2 {
        dirs.sort_by(|x, y| planar_angle(&x.0).total_cmp(&planar_angle(&y.0)));
    }
    let values: Vec<f64> = dirs.iter().map(|(u, precise)| ratio(u, *precise)).collect();
    if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::BadParameter("radial functions must be positive and finite on the grid".into()));
    }
    let mut best = values.iter().copied().fold(1.0, f64::max);
    if a.dim() == 2 {
        let m = values.len();
        let mut peaks: Vec<usize> = (0..m)
            .filter(|&i| values[i] >= values[(i + m - 1) % m] && values[i] >= values[(i + 1) % m])
            .collect();
        peaks.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
        for &i in peaks.iter().take(REFINED_MAXIMA) {
            let centre = planar_angle(&dirs[i].0);
            let lo = unwrap_near(planar_angle(&dirs[(i + m - 1) % m].0), centre);
            let hi = unwrap_near(planar_angle(&dirs[(i + 1) % m].0), centre);
            if hi - lo < 1e-14 {
                continue;
            }
            let (_, neg) = golden_min(|t| -ratio(&angle_point(t), true), lo, hi, 1e-10 * (hi - lo).max(1e-3));
            best = best.max(-neg).max(ratio(&dirs[i].0, true));
        }
    }
    Ok(best)
}

fn unwrap_near(angle: f64, centre: f64) -> f64 {
    if angle - centre > PI {
        angle - 2.0 * PI
    } else if centre - angle > PI {
        angle + 2.0 * PI
    } else {
        angle
    }
}
