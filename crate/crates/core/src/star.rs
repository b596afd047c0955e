//! Compact domains described ray by ray, and their volume-preserving star
//! symmetrization.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::geometry::sphere::{dot, SphereGrid};

/// Maximum number of radial intervals per ray.
pub const MAX_INTERVALS: usize = 16;

/// A compact domain `M` given, for each grid direction `xi`, by the set
/// `L_xi = {t >= 0 : t xi in M}` as a sorted union of disjoint intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct CompactDomain {
    grid: Arc<SphereGrid>,
    rays: Vec<Vec<(f64, f64)>>,
}

impl CompactDomain {
    pub fn new(grid: Arc<SphereGrid>, rays: Vec<Vec<(f64, f64)>>) -> Result<Self> {
        if rays.len() != grid.len() {
            return invalid(format!("{} rays given for a grid of {} nodes", rays.len(), grid.len()));
        }
        for (k, ray) in rays.iter().enumerate() {
            if ray.len() > MAX_INTERVALS {
                return invalid(format!("ray {k} has {} intervals (max {MAX_INTERVALS})", ray.len()));
            }
            let mut prev = -1.0;
            for &(a, b) in ray {
                if !(a.is_finite() && b.is_finite() && a >= 0.0 && b > a && a > prev) {
                    return invalid(format!("ray {k}: intervals must be finite, sorted, disjoint with 0 <= a < b"));
                }
                prev = b;
            }
        }
        let d = CompactDomain { grid, rays };
        if !(d.volume() > 0.0) {
            return invalid("domain has zero volume");
        }
        Ok(d)
    }

    /// Star body with the given radial values, as a domain with one interval per ray.
    pub fn from_radial(grid: Arc<SphereGrid>, radial: &[f64]) -> Result<Self> {
        let rays = radial
            .iter()
            .map(|&r| if r > 0.0 { vec![(0.0, r)] } else { vec![] })
            .collect();
        Self::new(grid, rays)
    }

    /// Ray-marches `inside` from the origin out to `r_max` with step `step`
    /// along every grid direction; interval endpoints are refined by bisection.
    pub fn from_indicator(
        grid: Arc<SphereGrid>,
        r_max: f64,
        step: f64,
        inside: impl Fn(&[f64]) -> bool + Sync,
    ) -> Result<Self> {
        let dim = grid.dim();
        let steps = (r_max / step).ceil() as usize;
        let rays: Vec<Vec<(f64, f64)>> = (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let u = grid.node(k);
                let point = |t: f64| -> Vec<f64> { (0..dim).map(|i| t * u[i]).collect() };
                let test = |t: f64| inside(&point(t));
                let refine = |mut lo: f64, mut hi: f64, lo_in: bool| {
                    for _ in 0..40 {
                        let mid = 0.5 * (lo + hi);
                        if test(mid) == lo_in {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    0.5 * (lo + hi)
                };
                let mut out = Vec::new();
                let mut was = test(0.0);
                let mut start = 0.0;
                for s in 1..=steps {
                    let t = (s as f64 * step).min(r_max);
                    let now = test(t);
                    if now != was {
                        let edge = refine(t - step, t, was);
                        if now {
                            start = edge;
                        } else {
                            out.push((start, edge));
                        }
                        was = now;
                    }
                }
                if was {
                    out.push((start, r_max));
                }
                out
            })
            .collect();
        if let Some(k) = rays.iter().position(|r| r.len() > MAX_INTERVALS) {
            return invalid(format!("ray {k} crosses the boundary too often"));
        }
        Self::new(grid, rays)
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn rays(&self) -> &[Vec<(f64, f64)>] {
        &self.rays
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    /// `sum_i (b_i^s - a_i^s)` on ray `k`.
    pub fn ray_power(&self, k: usize, s: f64) -> f64 {
        self.rays[k].iter().map(|&(a, b)| b.powf(s) - a.powf(s)).sum()
    }

    pub fn volume(&self) -> f64 {
        let n = self.dim() as f64;
        (0..self.grid.len())
            .map(|k| self.grid.weight(k) * self.ray_power(k, n))
            .sum::<f64>()
            / n
    }

    /// `int_M |<x, xi>|^p dx`.
    pub fn moment(&self, p: f64, xi: &[f64]) -> f64 {
        let n = self.dim() as f64;
        let s = n + p;
        (0..self.grid.len())
            .map(|k| {
                let c = dot(self.grid.node(k), xi).abs();
                if c == 0.0 {
                    0.0
                } else {
                    self.grid.weight(k) * c.powf(p) * self.ray_power(k, s)
                }
            })
            .sum::<f64>()
            / s
    }

    /// Radial mass weights `sum_i (b_i^{n+p} - a_i^{n+p}) / (n+p)` per node.
    pub fn moment_weights(&self, p: f64) -> Vec<f64> {
        let s = self.dim() as f64 + p;
        (0..self.grid.len()).map(|k| self.ray_power(k, s) / s).collect()
    }

    /// The star set `SM` with radial function `(sum_i (b_i^n - a_i^n))^{1/n}`.
    pub fn sm_symmetrize(&self) -> StarBody {
        let n = self.dim() as f64;
        let radial = (0..self.grid.len())
            .map(|k| self.ray_power(k, n).max(0.0).powf(1.0 / n))
            .collect();
        StarBody {
            grid: self.grid.clone(),
            radial,
        }
    }
}

/// A star body given by nonnegative radial values on a sphere grid.
#[derive(Clone, Debug, PartialEq)]
pub struct StarBody {
    grid: Arc<SphereGrid>,
    radial: Vec<f64>,
}

impl StarBody {
    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn radial(&self) -> &[f64] {
        &self.radial
    }

    pub fn volume(&self) -> f64 {
        let n = self.grid.dim() as f64;
        self.grid
            .weights()
            .iter()
            .zip(&self.radial)
            .map(|(w, r)| w * r.powf(n))
            .sum::<f64>()
            / n
    }

    pub fn to_domain(&self) -> Result<CompactDomain> {
        CompactDomain::from_radial(self.grid.clone(), &self.radial)
    }
}
