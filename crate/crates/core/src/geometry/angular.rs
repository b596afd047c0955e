//! Integration over directions with known kinks.

use std::f64::consts::PI;

use super::body::{ConvexBody, Polytope};
use super::sphere::SphereGrid;
use crate::error::Result;
use crate::quadrature::QuadRule;

/// Uniform panels added to every planar angular rule.
const BASE_PANELS: usize = 64;
const ORDER: usize = 16;

/// Angles at which the radial function of a planar body is not smooth:
/// the vertex directions of a polygon. Smooth bodies have none; sampled
/// bodies return `None` because their kinks are too dense to resolve.
pub fn radial_kinks(k: &ConvexBody) -> Option<Vec<f64>> {
    match k {
        ConvexBody::Polytope(Polytope::Planar(p)) => {
            Some(p.vertices().iter().map(|v| v[1].atan2(v[0])).collect())
        }
        ConvexBody::Ellipsoid(_) => Some(vec![]),
        _ => None,
    }
}

/// Composite Gauss-Legendre rule on `[0, 2 pi)` with panel breaks at the
/// given angles and at `BASE_PANELS` uniform points.
pub fn circle_rule(kinks: &[f64]) -> QuadRule {
    let mut breaks: Vec<f64> = (0..=BASE_PANELS)
        .map(|i| 2.0 * PI * i as f64 / BASE_PANELS as f64)
        .collect();
    breaks.extend(kinks.iter().map(|t| t.rem_euclid(2.0 * PI)));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    QuadRule::composite(&breaks, ORDER)
}

/// `int_{S^{n-1}} f(u) du` for an integrand whose kinks lie at the
/// radial kinks of the given bodies. Planar integrands with resolvable kinks
/// use a kink-aware Gauss-Legendre rule; otherwise the default sphere grid.
pub fn integrate_directions(dim: usize, bodies: &[&ConvexBody], extra: &[f64], f: impl Fn(&[f64]) -> f64) -> Result<f64> {
    if dim == 2 {
        let mut kinks = extra.to_vec();
        let mut resolvable = true;
        for b in bodies {
            match radial_kinks(b) {
                Some(k) => kinks.extend(k),
                None => resolvable = false,
            }
        }
        if resolvable {
            let rule = circle_rule(&kinks);
            return Ok(rule.integrate(|t| f(&[t.cos(), t.sin()])));
        }
    }
    Ok(SphereGrid::default_for(dim)?.integrate(f))
}
