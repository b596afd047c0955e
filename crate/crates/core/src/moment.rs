//! L_p moment and centroid bodies of convex bodies, compact domains and
//! nonnegative functions, stored by their support values on a sphere grid.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fields::{Profile, ScalarField};
use crate::geometry::sphere::{dot, SphereGrid};
use crate::geometry::{ConvexBody, Polytope, SampledBody};
use crate::par::par_map;
use crate::params::c_np_raw;
use crate::special::{ln_beta, omega};
use crate::star::CompactDomain;

/// Support values below this threshold mark a source concentrated on a hyperplane.
pub const DEGENERATE_SUPPORT: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentSource {
    Body,
    Domain,
    Field,
}

/// A moment or centroid body, kept as support values on a sphere grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentBody {
    pub body: SampledBody,
    pub source: MomentSource,
    pub p: f64,
}

impl MomentBody {
    fn from_powers(grid: Arc<SphereGrid>, powers: Vec<f64>, source: MomentSource, p: f64) -> Result<Self> {
        if powers.iter().all(|v| *v == 0.0) {
            return invalid("source has zero mass");
        }
        let values: Vec<f64> = powers.iter().map(|v| v.max(0.0).powf(1.0 / p)).collect();
        if let Some(i) = values.iter().position(|v| !(*v >= DEGENERATE_SUPPORT)) {
            return Err(Error::DegenerateSource(format!(
                "support value {} in direction {:?} is below {DEGENERATE_SUPPORT:e}",
                values[i],
                grid.node(i)
            )));
        }
        Ok(MomentBody {
            body: SampledBody::new(grid, values)?,
            source,
            p,
        })
    }

    pub fn support(&self, xi: &[f64]) -> f64 {
        self.body.support(xi)
    }

    pub fn values(&self) -> &[f64] {
        self.body.values()
    }

    pub fn volume(&self) -> f64 {
        self.body.volume()
    }

    pub fn to_body(&self) -> ConvexBody {
        ConvexBody::Sampled(self.body.clone())
    }

    /// The body with support `c * h`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let values = self.values().iter().map(|v| c * v).collect();
        Ok(MomentBody {
            body: SampledBody::new(self.body.grid().clone(), values)?,
            source: self.source,
            p: self.p,
        })
    }
}

/// `int_B |x_1|^p dx = omega_{n-1} B((p+1)/2, (n+1)/2)`.
pub fn ball_moment(n: usize, p: f64) -> Result<f64> {
    Ok(omega(n as i64 - 1)? * ln_beta((p + 1.0) / 2.0, (n as f64 + 1.0) / 2.0).exp())
}

/// `int_0^1 |a + t (b - a)|^p dt`.
fn segment_power_mean(a: f64, b: f64, p: f64) -> f64 {
    let (aa, ab) = (a.abs(), b.abs());
    let scale = aa.max(ab);
    if scale == 0.0 {
        return 0.0;
    }
    if a * b < 0.0 {
        return (aa.powf(p + 1.0) + ab.powf(p + 1.0)) / ((p + 1.0) * (aa + ab));
    }
    let d = ab - aa;
    if d.abs() <= 1e-6 * scale {
        // Second-order expansion around the midpoint.
        let m = 0.5 * (aa + ab);
        return m.powf(p) * (1.0 + p * (p - 1.0) * d * d / (24.0 * m * m));
    }
    (ab.powf(p + 1.0) - aa.powf(p + 1.0)) / ((p + 1.0) * d)
}

/// `int_P |<x, xi>|^p dx` for a polygon containing the origin, exactly,
/// by the fan of triangles `(0, v_i, v_{i+1})`.
fn polygon_moment(vertices: &[[f64; 2]], p: f64, xi: &[f64]) -> f64 {
    let m = vertices.len();
    let mut total = 0.0;
    for i in 0..m {
        let a = vertices[i];
        let b = vertices[(i + 1) % m];
        let area2 = (a[0] * b[1] - a[1] * b[0]).abs();
        let la = a[0] * xi[0] + a[1] * xi[1];
        let lb = b[0] * xi[0] + b[1] * xi[1];
        total += area2 / (p + 2.0) * segment_power_mean(la, lb, p);
    }
    total
}

/// `h_{M_p K}(xi)^p = int_K |<x, xi>|^p dx`.
///
/// Exact for ellipsoids and polygons (including the Wulff polygon of a
/// sampled planar body); solid polytopes and sampled solids use the sphere
/// grid formula `(n+p)^{-1} int r_K^{n+p} |<u, xi>|^p du`.
pub fn body_moment_pow(k: &ConvexBody, p: f64, xi: &[f64]) -> Result<f64> {
    match k {
        ConvexBody::Ellipsoid(e) => Ok(e.volume() / omega(e.dim() as i64)? * e.support(xi).powf(p) * ball_moment(e.dim(), p)?),
        ConvexBody::Polytope(Polytope::Planar(poly)) => Ok(polygon_moment(poly.vertices(), p, xi)),
        ConvexBody::Sampled(s) if s.dim() == 2 => Ok(polygon_moment(s.wulff().vertices(), p, xi)),
        _ => {
            let grid = match k {
                ConvexBody::Sampled(s) => s.grid().clone(),
                _ => SphereGrid::default_for(k.dim())?,
            };
            let radial: Vec<f64> = match k {
                ConvexBody::Sampled(s) => s.node_radial().to_vec(),
                _ => grid.nodes().map(|u| k.radial(u)).collect(),
            };
            Ok(grid_moment(&grid, &radial, k.dim() as f64 + p, p, xi))
        }
    }
}

fn grid_moment(grid: &SphereGrid, radial: &[f64], s: f64, p: f64, xi: &[f64]) -> f64 {
    grid.nodes()
        .zip(grid.weights())
        .zip(radial)
        .map(|((u, w), r)| w * r.powf(s) * dot(u, xi).abs().powf(p))
        .sum::<f64>()
        / s
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return invalid(format!("moment exponent must be >= 1, got {p}"));
    }
    Ok(())
}

/// `M_p K` on the given grid.
pub fn moment_body(k: &ConvexBody, p: f64, grid: Arc<SphereGrid>) -> Result<MomentBody> {
    check_p(p)?;
    if grid.dim() != k.dim() {
        return invalid("grid dimension does not match body dimension");
    }
    let powers: Vec<f64> = if matches!(k, ConvexBody::Polytope(Polytope::Planar(_)) | ConvexBody::Ellipsoid(_))
        || k.dim() == 2
    {
        par_map(grid.len(), |i| body_moment_pow(k, p, grid.node(i))).into_iter().collect::<Result<_>>()?
    } else {
        let g2 = match k {
            ConvexBody::Sampled(s) => s.grid().clone(),
            _ => SphereGrid::default_for(k.dim())?,
        };
        let radial: Vec<f64> = match k {
            ConvexBody::Sampled(s) => s.node_radial().to_vec(),
            _ => g2.nodes().map(|u| k.radial(u)).collect(),
        };
        let s = k.dim() as f64 + p;
        par_map(grid.len(), |i| grid_moment(&g2, &radial, s, p, grid.node(i)))
    };
    MomentBody::from_powers(grid, powers, MomentSource::Body, p)
}

/// `Gamma_p K = (vol(K) c_{n,p})^{-1/p} M_p K`.
pub fn centroid_body(k: &ConvexBody, p: f64, grid: Arc<SphereGrid>) -> Result<MomentBody> {
    let m = moment_body(k, p, grid)?;
    let norm = (k.volume() * c_np_raw(k.dim() as f64, p)).powf(-1.0 / p);
    m.scaled(norm)
}

/// `M_p M` for a compact domain, on the domain's own grid.
pub fn domain_moment_body(m: &CompactDomain, p: f64) -> Result<MomentBody> {
    check_p(p)?;
    let grid = m.grid().clone();
    let weights = m.moment_weights(p);
    let powers = par_map(grid.len(), |i| {
        let xi = grid.node(i);
        grid.nodes()
            .zip(grid.weights())
            .zip(&weights)
            .map(|((u, w), mw)| w * mw * dot(u, xi).abs().powf(p))
            .sum::<f64>()
    });
    MomentBody::from_powers(grid, powers, MomentSource::Domain, p)
}

pub fn domain_centroid_body(m: &CompactDomain, p: f64) -> Result<MomentBody> {
    let mb = domain_moment_body(m, p)?;
    let norm = (m.volume() * c_np_raw(m.dim() as f64, p)).powf(-1.0 / p);
    mb.scaled(norm)
}

/// `M_p g` for a nonnegative field.
pub fn field_moment_body(g: &ScalarField, p: f64, grid: Arc<SphereGrid>) -> Result<MomentBody> {
    check_p(p)?;
    if grid.dim() != g.dim() {
        return invalid("grid dimension does not match field dimension");
    }
    let powers = g.moment_pow_values(&grid, p)?;
    MomentBody::from_powers(grid, powers, MomentSource::Field, p)
}

/// The factor `((n+p) int_0^inf t^{n+p-1} G(t) dt)^{1/p}` with
/// `M_p G(||.||_K) = factor * M_p K`. Divergent integrals are rejected.
pub fn radial_factor(profile: &Profile, n: usize, p: f64) -> Result<f64> {
    check_p(p)?;
    let s = n as f64 + p;
    let m = profile.moment(s)?;
    if !m.is_finite() {
        return invalid(format!("the profile's moment of order {s} diverges"));
    }
    Ok((s * m).powf(1.0 / p))
}
