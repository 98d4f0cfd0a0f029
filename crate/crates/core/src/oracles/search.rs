//! `d_P(δ) = inf_δ' d(P_δ, I^δ'(P))`, convergence tables and the uniform bound.

use std::cell::RefCell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{distance_d, illumination_radial, polar_illumination_oracle, BodyOracle, DirectionGrid, FloatingBody, PolytopeOracle};
use crate::duality;
use crate::error::{Error, Result};
use crate::geometry::VPolytope;
use crate::invariants;
use crate::numeric::golden_min;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Golden-section searches over equal sub-brackets of `[0, hi]`.
    pub brackets: usize,
    /// Golden-section stopping width relative to `hi`.
    pub rel_tol: f64,
    /// Points in the final scan around the best `δ'`.
    pub scan_points: usize,
    /// `hi = c_hi_factor · max_ξ c_ξ · δ^{1/n}`.
    pub c_hi_factor: f64,
    /// Relative residual for the cap-volume equation.
    pub cap_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { brackets: 3, rel_tol: 1e-7, scan_points: 16, c_hi_factor: 4.0, cap_tol: super::DEFAULT_CAP_TOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpResult {
    pub delta: f64,
    pub value: f64,
    pub best_delta_prime: f64,
    /// `d(P_δ, P)`, the value at `δ' = 0`.
    pub value_at_zero: f64,
    pub evaluations: usize,
}

/// `d_P(δ)` with its minimizing `δ'`.
pub fn dp_delta(p: &VPolytope, delta: f64, grid: &DirectionGrid, cfg: &SearchConfig) -> Result<DpResult> {
    let report = invariants::invariant_g(p)?;
    let floating = FloatingBody::new(p, delta, grid, cfg.cap_tol)?.with_radial_cache();
    let hi = cfg.c_hi_factor * report.max_crossing() * delta.powf(1.0 / p.dim() as f64);
    dp_delta_with(&floating, hi, grid, cfg)
}

/// As [`dp_delta`] with a prepared floating body and bracket end `hi`.
pub fn dp_delta_with(floating: &FloatingBody, hi: f64, grid: &DirectionGrid, cfg: &SearchConfig) -> Result<DpResult> {
    let p = floating.polytope();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let evaluations = RefCell::new(0usize);
    let eval = |dp: f64| -> f64 {
        *evaluations.borrow_mut() += 1;
        let result = polar_illumination_oracle(p, dp.max(0.0)).and_then(|i| distance_d(floating, &i, grid));
        result.unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            f64::INFINITY
        })
    };
    let at_zero = eval(0.0);
    let mut best = (0.0, at_zero);
    let tol = cfg.rel_tol * hi;
    let brackets = cfg.brackets.max(1);
    let width = hi / brackets as f64;
    for k in 0..brackets {
        let (x, fx) = golden_min(eval, k as f64 * width, (k + 1) as f64 * width, tol);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    // Local scan for bumps the bracketed searches stepped over.
    let step = hi * 1e-3;
    let half = cfg.scan_points as i64 / 2;
    let centre = best.0;
    for j in -half..=half {
        let x = centre + j as f64 * step;
        if j != 0 && (0.0..=hi).contains(&x) {
            let fx = eval(x);
            if fx < best.1 {
                best = (x, fx);
            }
        }
    }
    if best.0 != centre {
        let (x, fx) = golden_min(eval, (best.0 - step).max(0.0), best.0 + step, tol);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    if !best.1.is_finite() {
        return Err(failure.into_inner().unwrap_or(Error::BadParameter("distance search failed".into())));
    }
    Ok(DpResult {
        delta: floating.delta(),
        value: best.1,
        best_delta_prime: best.0,
        value_at_zero: at_zero,
        evaluations: evaluations.into_inner(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub delta: f64,
    pub d_p: f64,
    /// `(d_P(δ) - 1) / δ^{1/n}`.
    pub normalized: f64,
    pub best_delta_prime: f64,
    pub g_closed_form: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub dim: usize,
    pub rows: Vec<ConvergenceRow>,
    pub g_closed_form: f64,
    /// Limit estimate from the last two rows.
    pub extrapolated: Option<f64>,
    /// Inclusion checks run at each row's best `δ'`.
    pub inclusion: Vec<InclusionReport>,
}

pub fn convergence_table(
    p: &VPolytope,
    deltas: &[f64],
    grid: &DirectionGrid,
    cfg: &SearchConfig,
) -> Result<ConvergenceTable> {
    let report = invariants::invariant_g(p)?;
    let n = p.dim() as f64;
    let mut rows = Vec::with_capacity(deltas.len());
    let mut inclusion = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let floating = FloatingBody::new(p, delta, grid, cfg.cap_tol)?.with_radial_cache();
        let hi = cfg.c_hi_factor * report.max_crossing() * delta.powf(1.0 / n);
        let r = dp_delta_with(&floating, hi, grid, cfg)?;
        inclusion.push(inclusion_chain_check(&floating, r.best_delta_prime, grid)?);
        rows.push(ConvergenceRow {
            delta,
            d_p: r.value,
            normalized: (r.value - 1.0) / delta.powf(1.0 / n),
            best_delta_prime: r.best_delta_prime,
            g_closed_form: report.g,
        });
    }
    let extrapolated = extrapolate(&rows, p.dim());
    Ok(ConvergenceTable { dim: p.dim(), rows, g_closed_form: report.g, extrapolated, inclusion })
}

/// Fits `N(x) = G + C x` with `x = δ^{1/n}` through the last two rows and returns `G`.
pub fn extrapolate(rows: &[ConvergenceRow], dim: usize) -> Option<f64> {
    let [.., a, b] = rows else { return None };
    let x1 = a.delta.powf(1.0 / dim as f64);
    let x2 = b.delta.powf(1.0 / dim as f64);
    if x1 == x2 {
        return None;
    }
    Some((b.normalized * x1 - a.normalized * x2) / (x1 - x2))
}

/// Counts of grid directions violating `r_{P_δ} <= r_P`, `r_{I^δ'(P)} <= r_P`
/// and `r_{P°} <= r_{(P°)^δ'}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub delta: f64,
    pub delta_prime: f64,
    pub directions: usize,
    pub floating_outside: usize,
    pub illumination_outside: usize,
    pub polar_outside: usize,
}

impl InclusionReport {
    pub fn ok(&self) -> bool {
        self.floating_outside == 0 && self.illumination_outside == 0 && self.polar_outside == 0
    }
}

pub fn inclusion_chain_check(floating: &FloatingBody, delta_prime: f64, grid: &DirectionGrid) -> Result<InclusionReport> {
    let p = floating.polytope();
    let polar = duality::polar(p)?;
    let illum = polar_illumination_oracle(p, delta_prime)?;
    let slack = 1e-12;
    let mut report = InclusionReport {
        delta: floating.delta(),
        delta_prime,
        directions: grid.len(),
        floating_outside: 0,
        illumination_outside: 0,
        polar_outside: 0,
    };
    for u in grid.directions() {
        let rp = p.radial_unchecked(u);
        if floating.radial(u) > rp * (1.0 + slack) {
            report.floating_outside += 1;
        }
        if illum.radial(u) > rp * (1.0 + slack) {
            report.illumination_outside += 1;
        }
        if polar.radial_unchecked(u) > illumination_radial(&polar, delta_prime, u)? * (1.0 + slack) {
            report.polar_outside += 1;
        }
    }
    Ok(report)
}

/// `G_n = sqrt(n) (n |B_2^n| / |B_2^{n-1}|)^{1/n}`.
pub fn uniform_constant(n: usize) -> f64 {
    let ball = |k: usize| match k {
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        4 => PI * PI / 2.0,
        _ => f64::NAN,
    };
    let nf = n as f64;
    nf.sqrt() * (nf * ball(n) / ball(n - 1)).powf(1.0 / nf)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub delta: f64,
    pub distance: f64,
    pub bound: f64,
    /// `bound - distance`; negative means a violation.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub dim: usize,
    pub constant: f64,
    pub rows: Vec<BoundRow>,
    pub passed: bool,
}

/// Checks `d(S_δ, S) <= 1 + G_n δ^{1/n}` for `S` with `B_2^n ⊆ S ⊆ sqrt(n) B_2^n`.
pub fn uniform_bound_check(s: &VPolytope, deltas: &[f64], grid: &DirectionGrid, cfg: &SearchConfig) -> Result<BoundReport> {
    if !s.is_centrally_symmetric() {
        return Err(Error::SymmetryRequired);
    }
    let n = s.dim();
    let radii: Vec<f64> = grid.directions().iter().map(|u| s.radial_unchecked(u)).collect();
    let min_radial = radii.iter().copied().fold(f64::INFINITY, f64::min);
    let max_radial = radii.iter().copied().fold(0.0, f64::max);
    let tol = 1e-9;
    if min_radial < 1.0 - tol || max_radial > (n as f64).sqrt() * (1.0 + tol) {
        return Err(Error::NotInJohnSandwich { min_radial, max_radial });
    }
    let constant = uniform_constant(n);
    let body = PolytopeOracle::new(s.clone(), "S")?;
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let bound = 1.0 + constant * delta.powf(1.0 / n as f64);
        let distance = if delta == 0.0 {
            1.0
        } else {
            let floating = FloatingBody::new(s, delta, grid, cfg.cap_tol)?.with_radial_cache();
            distance_d(&floating, &body, grid)?
        };
        rows.push(BoundRow { delta, distance, bound, margin: bound - distance });
    }
    let passed = rows.iter().all(|r| r.margin >= 0.0);
    Ok(BoundReport { dim: n, constant, rows, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::generator::{cube, hexagon};
    use crate::oracles::polytope_grid;

    #[test]
    fn uniform_constants() {
        assert!((uniform_constant(2) - (2.0 * PI).sqrt()).abs() < 1e-14);
        let g3 = 3f64.sqrt() * (3.0 * (4.0 * PI / 3.0) / PI).powf(1.0 / 3.0);
        assert!((uniform_constant(3) - g3).abs() < 1e-14);
    }

    #[test]
    fn extrapolation_is_exact_for_linear_rows() {
        let row = |delta: f64| {
            let x = delta.sqrt();
            ConvergenceRow { delta, d_p: 0.0, normalized: 0.7 + 3.0 * x, best_delta_prime: 0.0, g_closed_form: 0.7 }
        };
        let rows = [row(1e-4), row(1e-5), row(1e-6)];
        assert!((extrapolate(&rows, 2).unwrap() - 0.7).abs() < 1e-12);
        assert!(extrapolate(&rows[..1], 2).is_none());
    }

    #[test]
    fn square_bound_report() {
        let s = cube(2).unwrap();
        let grid = polytope_grid(&s, 1024, 0).unwrap();
        let rep = uniform_bound_check(&s, &[0.0, 1e-2, 1e-4], &grid, &SearchConfig::default()).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.rows[0].margin, 0.0);
        // The worst ratio sits on the diagonal: 1 / (1 - sqrt(2δ)).
        let expected = 1.0 / (1.0 - (2.0 * 1e-4f64).sqrt());
        assert!((rep.rows[2].distance - expected).abs() < 1e-9);
    }

    #[test]
    fn unsandwiched_input_rejected() {
        let s = hexagon(0.25).unwrap();
        let grid = DirectionGrid::new(2, 256, 0).unwrap();
        assert!(matches!(
            uniform_bound_check(&s, &[1e-3], &grid, &SearchConfig::default()),
            Err(Error::NotInJohnSandwich { .. })
        ));
    }

    #[test]
    fn dp_is_at_most_distance_to_p() {
        let p = cube(2).unwrap();
        let grid = polytope_grid(&p, 1024, 0).unwrap();
        let r = dp_delta(&p, 1e-3, &grid, &SearchConfig::default()).unwrap();
        assert!(r.value <= r.value_at_zero);
        assert!(r.value >= 1.0);
        assert!(r.best_delta_prime > 0.0);
    }
}
