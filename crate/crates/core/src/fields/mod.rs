//! Radial and gridded functions on R^n and their level-set quantities.

pub mod grid;
pub mod profile;
pub mod radial;

use std::sync::Arc;

use nalgebra::DMatrix;

pub use grid::{ContourSegment, GridField};
pub use profile::{Bump, Profile};
pub use radial::{RadialField, RadialFieldSpec};

use crate::error::{invalid, Result};
use crate::geometry::SphereGrid;
use crate::star::CompactDomain;

/// Nonnegative weights on the nodes of a sphere grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    grid: Arc<SphereGrid>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(grid: Arc<SphereGrid>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != grid.len() {
            return invalid("one weight per grid node is required");
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return invalid("measure weights must be nonnegative");
        }
        Ok(DiscreteMeasure { grid, weights })
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, phi: impl Fn(&[f64]) -> f64) -> f64 {
        self.grid
            .nodes()
            .zip(&self.weights)
            .filter(|(_, w)| **w > 0.0)
            .map(|(u, w)| w * phi(u))
            .sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Dimension of the linear span of the support.
    pub fn span_rank(&self) -> usize {
        let n = self.grid.dim();
        let mut m = DMatrix::<f64>::zeros(n, n);
        for (u, w) in self.grid.nodes().zip(&self.weights) {
            if *w > 0.0 {
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] += w * u[i] * u[j];
                    }
                }
            }
        }
        let ev = m.symmetric_eigenvalues();
        let top = ev.iter().copied().fold(0.0, f64::max);
        ev.iter().filter(|&&e| e > 1e-10 * top).count()
    }
}

/// A scalar field on R^n: closed-form radial, or sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarField {
    Grid(GridField),
    Radial(RadialField),
}

impl From<GridField> for ScalarField {
    fn from(g: GridField) -> Self {
        ScalarField::Grid(g)
    }
}

impl From<RadialField> for ScalarField {
    fn from(r: RadialField) -> Self {
        ScalarField::Radial(r)
    }
}

impl ScalarField {
    pub fn kind(&self) -> &'static str {
        match self {
            ScalarField::Grid(_) => "grid",
            ScalarField::Radial(_) => "radial",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ScalarField::Grid(g) => g.dim(),
            ScalarField::Radial(r) => r.dim(),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            ScalarField::Grid(g) => g.value(x),
            ScalarField::Radial(r) => r.value(x),
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match self {
            ScalarField::Grid(g) => g.gradient(x),
            ScalarField::Radial(r) => r.gradient(x),
        }
    }

    /// `sup |f|`.
    pub fn max_value(&self) -> f64 {
        match self {
            ScalarField::Grid(g) => g.max_abs(),
            ScalarField::Radial(r) => r.max_value(),
        }
    }

    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        match self {
            ScalarField::Grid(g) => g.lq_norm(q),
            ScalarField::Radial(r) => r.lq_norm(q),
        }
    }

    pub fn level_volume(&self, t: f64) -> Result<f64> {
        match self {
            ScalarField::Grid(g) => g.level_volume(t),
            ScalarField::Radial(r) => r.level_volume(t),
        }
    }

    pub fn layer_integral(&self, eta: f64) -> Result<f64> {
        match self {
            ScalarField::Grid(g) => g.layer_integral(eta),
            ScalarField::Radial(r) => r.layer_integral(eta),
        }
    }

    /// `int g |<x, xi>|^p dx` for every node of `grid`.
    pub fn moment_pow_values(&self, grid: &SphereGrid, p: f64) -> Result<Vec<f64>> {
        match self {
            ScalarField::Grid(g) => g.moment_pow_values(grid, p),
            ScalarField::Radial(r) => grid.nodes().map(|u| r.moment_pow(u, p)).collect(),
        }
    }

    /// The L_r surface measure `int phi(-grad f) dx`, binned on `grid`.
    pub fn surface_measure(&self, r: f64, grid: Arc<SphereGrid>) -> Result<DiscreteMeasure> {
        if !(r >= 1.0) {
            return invalid(format!("L_r surface measure needs r >= 1, got {r}"));
        }
        match self {
            ScalarField::Grid(g) => g.surface_measure(r, grid),
            ScalarField::Radial(f) => f.surface_measure(r, grid),
        }
    }

    /// `N_t = {|f| >= t}` as a domain on `grid`.
    pub fn level_domain(&self, t: f64, grid: Arc<SphereGrid>) -> Result<CompactDomain> {
        if !(t > 0.0) {
            return invalid("level must be positive");
        }
        match self {
            ScalarField::Grid(g) => g.level_domain(t, grid),
            ScalarField::Radial(r) => r.level_domain(t, grid),
        }
    }
}
