//! Quadrature grids on the unit circle and the unit sphere.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::quadrature::gauss_legendre;

/// Default number of nodes on the circle.
pub const DEFAULT_CIRCLE_N: usize = 1024;
/// Default Gauss-Legendre count in `cos(theta)` for the sphere; `phi` uses twice as many.
pub const DEFAULT_SPHERE_M: usize = 64;

#[derive(Clone, Debug, PartialEq)]
enum Layout {
    /// `n` uniformly spaced angles starting at 0.
    Circle { n: usize },
    /// Gauss-Legendre in `z = cos(theta)` (`m_theta` nodes) times `m_phi` uniform longitudes.
    Sphere { z: Vec<f64>, m_phi: usize },
}

/// Nodes and weights for integrals over `S^{n-1}`, `n` in {2, 3}.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    dim: usize,
    layout: Layout,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl SphereGrid {
    /// Periodic trapezoid rule with `n` equally spaced angles.
    pub fn circle(n: usize) -> Result<Arc<Self>> {
        if n < 8 {
            return invalid(format!("circle grid needs at least 8 nodes, got {n}"));
        }
        let mut nodes = Vec::with_capacity(2 * n);
        for k in 0..n {
            let t = 2.0 * PI * k as f64 / n as f64;
            nodes.push(t.cos());
            nodes.push(t.sin());
        }
        Ok(Arc::new(SphereGrid {
            dim: 2,
            layout: Layout::Circle { n },
            nodes,
            weights: vec![2.0 * PI / n as f64; n],
        }))
    }

    /// Product rule: Gauss-Legendre in `cos(theta)` times uniform `phi`.
    pub fn sphere(m_theta: usize, m_phi: usize) -> Result<Arc<Self>> {
        if m_theta < 4 || m_phi < 8 {
            return invalid("sphere grid too coarse");
        }
        let (z, wz) = gauss_legendre(m_theta);
        let mut nodes = Vec::with_capacity(3 * m_theta * m_phi);
        let mut weights = Vec::with_capacity(m_theta * m_phi);
        let dphi = 2.0 * PI / m_phi as f64;
        for (zi, wi) in z.iter().zip(&wz) {
            let s = (1.0 - zi * zi).sqrt();
            for j in 0..m_phi {
                let phi = dphi * j as f64;
                nodes.extend_from_slice(&[s * phi.cos(), s * phi.sin(), *zi]);
                weights.push(wi * dphi);
            }
        }
        Ok(Arc::new(SphereGrid {
            dim: 3,
            layout: Layout::Sphere { z, m_phi },
            nodes,
            weights,
        }))
    }

    pub fn default_for(dim: usize) -> Result<Arc<Self>> {
        match dim {
            2 => Self::circle(DEFAULT_CIRCLE_N),
            3 => Self::sphere(DEFAULT_SPHERE_M, 2 * DEFAULT_SPHERE_M),
            _ => invalid(format!("sphere grids exist for n = 2, 3 only, got {dim}")),
        }
    }

    /// Grid of the same kind with `size` as the primary resolution.
    pub fn with_resolution(dim: usize, size: usize) -> Result<Arc<Self>> {
        match dim {
            2 => Self::circle(size),
            3 => Self::sphere(size, 2 * size),
            _ => invalid(format!("sphere grids exist for n = 2, 3 only, got {dim}")),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.chunks_exact(self.dim)
    }

    /// The primary resolution: circle node count, or `m_theta` for the sphere.
    pub fn resolution(&self) -> usize {
        match &self.layout {
            Layout::Circle { n } => *n,
            Layout::Sphere { z, .. } => z.len(),
        }
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.nodes()
            .zip(&self.weights)
            .map(|(u, w)| w * f(u))
            .sum()
    }

    /// Angle of circle node `i`.
    pub fn angle(&self, i: usize) -> f64 {
        match &self.layout {
            Layout::Circle { n } => 2.0 * PI * i as f64 / *n as f64,
            Layout::Sphere { .. } => panic!("angle() is defined for circle grids only"),
        }
    }

    /// Piecewise-linear interpolation of node values at the unit direction `u`:
    /// linear in the angle on the circle, bilinear in `(theta, phi)` on the sphere.
    pub fn interpolate(&self, values: &[f64], u: &[f64]) -> f64 {
        match &self.layout {
            Layout::Circle { n } => {
                let n = *n;
                let t = u[1].atan2(u[0]).rem_euclid(2.0 * PI);
                let x = t * n as f64 / (2.0 * PI);
                let i0 = (x.floor() as usize) % n;
                let f = x - x.floor();
                let i1 = (i0 + 1) % n;
                values[i0] * (1.0 - f) + values[i1] * f
            }
            Layout::Sphere { z, m_phi } => {
                let m_phi = *m_phi;
                let zc = u[2].clamp(-1.0, 1.0);
                let theta = zc.acos();
                let phi = u[1].atan2(u[0]).rem_euclid(2.0 * PI);
                let xp = phi * m_phi as f64 / (2.0 * PI);
                let j0 = (xp.floor() as usize) % m_phi;
                let fp = xp - xp.floor();
                let j1 = (j0 + 1) % m_phi;
                // Gauss-Legendre z nodes are increasing, so theta nodes are decreasing.
                let m = z.len();
                let th = |i: usize| z[i].acos();
                let ring = |i: usize| values[i * m_phi + j0] * (1.0 - fp) + values[i * m_phi + j1] * fp;
                if theta >= th(0) {
                    // Between the south pole and the first ring: use the ring mean at the pole.
                    let pole = (0..m_phi).map(|j| values[j]).sum::<f64>() / m_phi as f64;
                    let f = (theta - th(0)) / (PI - th(0));
                    return ring(0) * (1.0 - f) + pole * f;
                }
                if theta <= th(m - 1) {
                    let pole = (0..m_phi).map(|j| values[(m - 1) * m_phi + j]).sum::<f64>()
                        / m_phi as f64;
                    let f = (th(m - 1) - theta) / th(m - 1);
                    return ring(m - 1) * (1.0 - f) + pole * f;
                }
                // Find i with th(i) >= theta > th(i+1).
                let mut lo = 0;
                let mut hi = m - 1;
                while hi - lo > 1 {
                    let mid = (lo + hi) / 2;
                    if th(mid) >= theta {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let f = (th(lo) - theta) / (th(lo) - th(hi));
                ring(lo) * (1.0 - f) + ring(hi) * f
            }
        }
    }

    /// Index of the grid node closest to the unit direction `u`.
    pub fn nearest(&self, u: &[f64]) -> usize {
        match &self.layout {
            Layout::Circle { n } => {
                let t = u[1].atan2(u[0]).rem_euclid(2.0 * PI);
                ((t * *n as f64 / (2.0 * PI)).round() as usize) % n
            }
            Layout::Sphere { z, m_phi } => {
                let m_phi = *m_phi;
                let phi = u[1].atan2(u[0]).rem_euclid(2.0 * PI);
                let x = phi * m_phi as f64 / (2.0 * PI);
                let i = z.partition_point(|v| *v < u[2]);
                let lo = i.saturating_sub(1);
                let hi = (i + 1).min(z.len());
                let j0 = x.floor() as usize;
                let mut best = (f64::NEG_INFINITY, 0);
                for ring in lo..hi {
                    for dj in 0..2 {
                        let k = ring * m_phi + (j0 + dj) % m_phi;
                        let d = dot(self.node(k), u);
                        if d > best.0 {
                            best = (d, k);
                        }
                    }
                }
                best.1
            }
        }
    }

    /// Surface area of the unit sphere in this dimension.
    pub fn area(&self) -> f64 {
        match self.dim {
            2 => 2.0 * PI,
            _ => 4.0 * PI,
        }
    }
}

/// Unit vector at angle `t`.
pub fn unit(t: f64) -> [f64; 2] {
    [t.cos(), t.sin()]
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
