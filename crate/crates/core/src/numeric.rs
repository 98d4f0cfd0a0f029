//! One-dimensional root finding and minimization, plus Nelder-Mead.

use crate::geometry::Point;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimization of a unimodal `f` on `[a, b]`.
pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Root of a continuous `g` with `g(lo) > 0 > g(hi)` (or the reverse) by the
/// Illinois variant of regula falsi. Stops once `|g| <= ftol`, the bracket
/// collapses, or after `max_iter` steps. Returns `(root, iterations, |g(root)|)`.
pub(crate) fn illinois_root(
    g: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    ftol: f64,
    max_iter: usize,
) -> (f64, usize, f64) {
    let mut glo = g(lo);
    let mut ghi = g(hi);
    if glo.abs() <= ftol {
        return (lo, 0, glo.abs());
    }
    if ghi.abs() <= ftol {
        return (hi, 0, ghi.abs());
    }
    let mut side = 0i8;
    let mut best = (lo, glo.abs());
    for it in 1..=max_iter {
        let mut x = (lo * ghi - hi * glo) / (ghi - glo);
        if !(x > lo.min(hi) && x < lo.max(hi)) {
            x = 0.5 * (lo + hi);
        }
        let gx = g(x);
        if gx.abs() < best.1 {
            best = (x, gx.abs());
        }
        if gx.abs() <= ftol || (hi - lo).abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
            return (x, it, gx.abs());
        }
        if (gx > 0.0) == (glo > 0.0) {
            lo = x;
            glo = gx;
            if side == -1 {
                ghi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            ghi = gx;
            if side == 1 {
                glo *= 0.5;
            }
            side = 1;
        }
    }
    (best.0, max_iter, best.1)
}

/// Plain Nelder-Mead with standard coefficients.
pub(crate) fn nelder_mead(f: impl Fn(&Point) -> f64, x0: &Point, step: f64, ftol: f64, max_iter: usize) -> (Point, f64) {
    let n = x0.len();
    let mut simplex: Vec<(Point, f64)> = (0..=n)
        .map(|i| {
            let mut x = x0.clone();
            if i > 0 {
                x[i - 1] += step;
            }
            let fx = f(&x);
            (x, fx)
        })
        .collect();
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if (simplex[n].1 - simplex[0].1).abs() <= ftol * simplex[0].1.abs().max(1e-300) {
            break;
        }
        let centroid = simplex[..n].iter().fold(Point::zeros(n), |acc, (x, _)| acc + x) / n as f64;
        let worst = simplex[n].0.clone();
        let reflect = &centroid + (&centroid - &worst);
        let fr = f(&reflect);
        if fr < simplex[0].1 {
            let expand = &centroid + (&reflect - &centroid) * 2.0;
            let fe = f(&expand);
            simplex[n] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflect, fr);
        } else {
            let contract = &centroid + (&worst - &centroid) * 0.5;
            let fc = f(&contract);
            if fc < simplex[n].1 {
                simplex[n] = (contract, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x = &best + (&entry.0 - &best) * 0.5;
                    let fx = f(&x);
                    *entry = (x, fx);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pt;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_min(|x| (x - 0.3).powi(2) + 1.0, -2.0, 5.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7 && (fx - 1.0).abs() < 1e-14);
    }

    #[test]
    fn illinois_solves_steep_and_flat_roots() {
        let (x, _, _) = illinois_root(|t| 1.0 - t * t * t, 0.0, 3.0, 1e-15, 200);
        assert!((x - 1.0).abs() < 1e-12);
        let (x, _, _) = illinois_root(|t| (1.0 - t).powi(2) * 0.5 - 1e-10, 0.0, 1.0, 1e-24, 200);
        assert!((x - (1.0 - (2e-10f64).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn nelder_mead_on_quadratic() {
        let (x, _) = nelder_mead(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2), &pt(&[0.0, 0.0]), 0.5, 1e-16, 2000);
        assert!((x - pt(&[1.0, -0.5])).norm() < 1e-6);
    }
}
