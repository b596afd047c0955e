use std::sync::{Arc, OnceLock};

use super::polygon::{wulff_polygon, ConvexPolygon};
use super::sphere::{dot, norm, SphereGrid};
use crate::error::{invalid, Error, Result};

/// A body known through its support values on a sphere grid.
///
/// Support values between nodes are interpolated piecewise-linearly. Radial
/// values come from polar duality, `r(u) = min h(xi)/<u, xi>` over nodes with
/// `<u, xi> > 0`, which in the plane is exactly the radial function of the
/// Wulff polygon of the samples.
#[derive(Clone, Debug)]
pub struct SampledBody {
    grid: Arc<SphereGrid>,
    values: Vec<f64>,
    wulff: OnceLock<ConvexPolygon>,
    node_radial: OnceLock<Vec<f64>>,
}

impl PartialEq for SampledBody {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.values == other.values
    }
}

impl SampledBody {
    pub fn new(grid: Arc<SphereGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return invalid(format!(
                "support sample count {} does not match grid size {}",
                values.len(),
                grid.len()
            ));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "support values must be positive and finite (origin interior), found {v}"
            )));
        }
        Ok(SampledBody {
            grid,
            values,
            wulff: OnceLock::new(),
            node_radial: OnceLock::new(),
        })
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn support(&self, xi: &[f64]) -> f64 {
        let l = norm(xi);
        if l == 0.0 {
            return 0.0;
        }
        let u: Vec<f64> = xi.iter().map(|v| v / l).collect();
        l * self.grid.interpolate(&self.values, &u)
    }

    /// The Wulff polygon of the samples (planar grids only).
    pub fn wulff(&self) -> &ConvexPolygon {
        self.wulff.get_or_init(|| {
            let angles: Vec<f64> = (0..self.grid.len()).map(|i| self.grid.angle(i)).collect();
            wulff_polygon(&angles, &self.values).expect("positive samples give a bounded polygon")
        })
    }

    fn duality_argmin(&self, u: &[f64]) -> (f64, usize) {
        let mut best = f64::INFINITY;
        let mut arg = usize::MAX;
        for (i, xi) in self.grid.nodes().enumerate() {
            let c = dot(u, xi);
            if c > 1e-12 {
                let v = self.values[i] / c;
                if v < best {
                    best = v;
                    arg = i;
                }
            }
        }
        (best, arg)
    }

    pub fn radial(&self, u: &[f64]) -> f64 {
        if self.dim() == 2 {
            return self.wulff().radial(u);
        }
        let l = norm(u);
        self.duality_argmin(&u.iter().map(|v| v / l).collect::<Vec<_>>()).0
    }

    pub fn gauge(&self, x: &[f64]) -> f64 {
        let l = norm(x);
        if l == 0.0 {
            return 0.0;
        }
        if self.dim() == 2 {
            return self.wulff().gauge(x);
        }
        l / self.radial(x)
    }

    pub fn gauge_gradient(&self, x: &[f64]) -> Vec<f64> {
        if self.dim() == 2 {
            return self.wulff().gauge_gradient(x).to_vec();
        }
        let l = norm(x);
        let (_, i) = self.duality_argmin(&x.iter().map(|v| v / l).collect::<Vec<_>>());
        let h = self.values[i];
        self.grid.node(i).iter().map(|v| v / h).collect()
    }

    /// Radial values at the grid nodes.
    pub fn node_radial(&self) -> &[f64] {
        self.node_radial.get_or_init(|| {
            (0..self.grid.len())
                .map(|i| self.radial(self.grid.node(i)))
                .collect()
        })
    }

    /// Planar: exact area of the Wulff polygon. Space: `(1/3) int r^3` on the grid.
    pub fn volume(&self) -> f64 {
        if self.dim() == 2 {
            return self.wulff().area();
        }
        let r = self.node_radial();
        self.grid
            .weights()
            .iter()
            .zip(r)
            .map(|(w, r)| w * r.powi(3))
            .sum::<f64>()
            / 3.0
    }
}
