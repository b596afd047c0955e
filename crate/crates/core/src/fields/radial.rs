//! Fields `f(x) = P(||x||_K)` given by a one-dimensional profile and a gauge body.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::profile::Profile;
use super::DiscreteMeasure;
use crate::error::{invalid, Error, Result};
use crate::geometry::sphere::SphereGrid;
use crate::geometry::ConvexBody;
use crate::mixed::surface_atoms;
use crate::moment::body_moment_pow;
use crate::star::CompactDomain;

#[derive(Clone, Debug, PartialEq)]
pub struct RadialField {
    profile: Profile,
    gauge: ConvexBody,
}

/// Serialized form: `{"profile": {...}, "gauge": <body>, "R": radius}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadialFieldSpec {
    pub profile: Profile,
    pub gauge: serde_json::Value,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<f64>,
}

impl RadialField {
    pub fn new(profile: Profile, gauge: ConvexBody) -> Result<Self> {
        profile.validate()?;
        if !(2..=3).contains(&gauge.dim()) {
            return invalid("radial fields live in dimension 2 or 3");
        }
        Ok(RadialField { profile, gauge })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn gauge(&self) -> &ConvexBody {
        &self.gauge
    }

    pub fn dim(&self) -> usize {
        self.gauge.dim()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.profile.value(self.gauge.gauge(x))
    }

    /// `P'(||x||_K) grad ||x||_K`; zero at the origin.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let rho = self.gauge.gauge(x);
        if rho == 0.0 {
            return vec![0.0; self.dim()];
        }
        let d = self.profile.deriv(rho);
        self.gauge.gauge_gradient(x).iter().map(|g| d * g).collect()
    }

    /// Radius of a ball containing the support, if the profile has compact support.
    pub fn support_radius(&self) -> Option<f64> {
        let grid = SphereGrid::default_for(self.dim()).ok()?;
        let rmax = grid.nodes().map(|u| self.gauge.radial(u)).fold(0.0, f64::max);
        self.profile.support_radius().map(|s| 1.02 * s * rmax)
    }

    pub fn max_value(&self) -> f64 {
        self.profile.max_value()
    }

    fn n(&self) -> f64 {
        self.dim() as f64
    }

    /// `(int |f|^q)^{1/q} = (n vol(K) int t^{n-1} |P|^q dt)^{1/q}`.
    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        if !(q > 0.0) {
            return invalid(format!("norm exponent must be positive, got {q}"));
        }
        let m = self.profile.power_moment(self.n(), q)?;
        if !m.is_finite() {
            return invalid(format!("the field is not in L_{q}"));
        }
        Ok((self.n() * self.gauge.volume() * m).powf(1.0 / q))
    }

    /// `vol({|f| >= t}) = vol(K) rho(t)^n`.
    pub fn level_volume(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return invalid("level must be positive");
        }
        Ok(self.gauge.volume() * self.profile.level_radius(t)?.powf(self.n()))
    }

    /// `int_0^inf vol(N_t)^eta dt`.
    pub fn layer_integral(&self, eta: f64) -> Result<f64> {
        if !(eta > 0.0) {
            return invalid("layer exponent must be positive");
        }
        let v = self.profile.level_power_integral(self.n() * eta)?;
        Ok(self.gauge.volume().powf(eta) * v)
    }

    /// `int f |<x, xi>|^p dx = (n+p) int t^{n+p-1} P dt * int_K |<x, xi>|^p dx`.
    pub fn moment_pow(&self, xi: &[f64], p: f64) -> Result<f64> {
        let s = self.n() + p;
        let m = self.profile.moment(s)?;
        if !m.is_finite() {
            return invalid(format!("the field's moment of order {p} diverges"));
        }
        Ok(s * m * body_moment_pow(&self.gauge, p, xi)?)
    }

    /// `(int_{P'<0} t^{n-1}|P'|^r, int_{P'>0} t^{n-1}|P'|^r)`: the weights with which
    /// the L_r surface measure of `K` and its reflection enter that of `f`.
    pub fn gradient_weights(&self, r: f64) -> Result<(f64, f64)> {
        let (a, b) = self.profile.grad_moment(self.n(), r)?;
        if !(a + b).is_finite() {
            return invalid(format!("the gradient is not in L_{r}"));
        }
        if a + b == 0.0 {
            return Err(Error::DegenerateField("the field is constant".into()));
        }
        Ok((a, b))
    }

    /// `int phi(-grad f) dx = I_- int phi dS_r(K) + I_+ int phi(-u) dS_r(K)`, binned on `grid`.
    pub fn surface_measure(&self, r: f64, grid: Arc<SphereGrid>) -> Result<DiscreteMeasure> {
        let (neg, pos) = self.gradient_weights(r)?;
        let atoms = surface_atoms(&self.gauge, r)?;
        let mut weights = vec![0.0; grid.len()];
        for (u, w) in atoms.normals.iter().zip(&atoms.weights) {
            if neg > 0.0 {
                weights[grid.nearest(u)] += neg * w;
            }
            if pos > 0.0 {
                let v: Vec<f64> = u.iter().map(|c| -c).collect();
                weights[grid.nearest(&v)] += pos * w;
            }
        }
        DiscreteMeasure::new(grid, weights)
    }

    /// `N_t = rho(t) K` as a domain on `grid`.
    pub fn level_domain(&self, t: f64, grid: Arc<SphereGrid>) -> Result<CompactDomain> {
        let rho = self.profile.level_radius(t)?;
        let radial: Vec<f64> = grid.nodes().map(|u| rho * self.gauge.radial(u)).collect();
        CompactDomain::from_radial(grid, &radial)
    }

    /// The level radius `rho(t)` with `N_t = rho(t) K`.
    pub fn level_radius(&self, t: f64) -> Result<f64> {
        self.profile.level_radius(t)
    }

    /// `rho(t)^{n-1} |P'(rho(t))|^{r-1}`: the factor with `V_r(f, t, Q) = factor * V_r(K, Q)`.
    pub fn level_factor(&self, t: f64, r: f64) -> Result<f64> {
        let rho = self.profile.level_radius(t)?;
        let d = self.profile.deriv(rho).abs();
        Ok(rho.powf(self.n() - 1.0) * d.powf(r - 1.0))
    }
}
