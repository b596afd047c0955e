use std::sync::Arc;

use nalgebra::DMatrix;

use super::ellipsoid::Ellipsoid;
use super::polygon::ConvexPolygon;
use super::polytope::Polytope3;
use super::sampled::SampledBody;
use super::sphere::{norm, SphereGrid};
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Polytope {
    Planar(ConvexPolygon),
    Solid(Polytope3),
}

/// A convex body with the origin in its interior.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexBody {
    Polytope(Polytope),
    Ellipsoid(Ellipsoid),
    Sampled(SampledBody),
}

impl ConvexBody {
    /// Convex hull of the given points (dimension 2 or 3).
    pub fn polytope(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map(|p| p.len()).unwrap_or(0);
        if points.iter().any(|p| p.len() != dim) {
            return invalid("all polytope vertices must have the same dimension");
        }
        match dim {
            2 => {
                let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
                Ok(ConvexBody::Polytope(Polytope::Planar(ConvexPolygon::from_points(&pts)?)))
            }
            3 => {
                let pts: Vec<[f64; 3]> = points.iter().map(|p| [p[0], p[1], p[2]]).collect();
                Ok(ConvexBody::Polytope(Polytope::Solid(Polytope3::from_points(&pts)?)))
            }
            _ => invalid(format!("polytopes are supported in dimension 2 and 3, got {dim}")),
        }
    }

    pub fn polygon(points: &[[f64; 2]]) -> Result<Self> {
        Ok(ConvexBody::Polytope(Polytope::Planar(ConvexPolygon::from_points(points)?)))
    }

    /// `[-s, s]^n`.
    pub fn cube(dim: usize, s: f64) -> Result<Self> {
        let mut pts = Vec::new();
        for mask in 0..(1usize << dim) {
            pts.push((0..dim).map(|i| if mask >> i & 1 == 1 { s } else { -s }).collect());
        }
        Self::polytope(&pts)
    }

    pub fn ellipsoid(a: DMatrix<f64>) -> Result<Self> {
        Ok(ConvexBody::Ellipsoid(Ellipsoid::new(a)?))
    }

    pub fn ball(dim: usize) -> Self {
        ConvexBody::Ellipsoid(Ellipsoid::ball(dim))
    }

    pub fn sampled(grid: Arc<SphereGrid>, values: Vec<f64>) -> Result<Self> {
        Ok(ConvexBody::Sampled(SampledBody::new(grid, values)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polytope(Polytope::Planar(_)) => 2,
            ConvexBody::Polytope(Polytope::Solid(_)) => 3,
            ConvexBody::Ellipsoid(e) => e.dim(),
            ConvexBody::Sampled(s) => s.dim(),
        }
    }

    /// Short description used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            ConvexBody::Polytope(_) => "polytope",
            ConvexBody::Ellipsoid(_) => "ellipsoid",
            ConvexBody::Sampled(_) => "support",
        }
    }

    pub fn support(&self, xi: &[f64]) -> f64 {
        match self {
            ConvexBody::Polytope(Polytope::Planar(p)) => p.support(xi),
            ConvexBody::Polytope(Polytope::Solid(p)) => p.support(xi),
            ConvexBody::Ellipsoid(e) => e.support(xi),
            ConvexBody::Sampled(s) => s.support(xi),
        }
    }

    /// Radial function at a unit vector.
    pub fn radial(&self, u: &[f64]) -> f64 {
        match self {
            ConvexBody::Polytope(Polytope::Planar(p)) => p.radial(u),
            ConvexBody::Polytope(Polytope::Solid(p)) => 1.0 / p.gauge(u),
            ConvexBody::Ellipsoid(e) => e.radial(u),
            ConvexBody::Sampled(s) => s.radial(u),
        }
    }

    pub fn gauge(&self, x: &[f64]) -> f64 {
        if norm(x) == 0.0 {
            return 0.0;
        }
        match self {
            ConvexBody::Polytope(Polytope::Planar(p)) => p.gauge(x),
            ConvexBody::Polytope(Polytope::Solid(p)) => p.gauge(x),
            ConvexBody::Ellipsoid(e) => e.gauge(x),
            ConvexBody::Sampled(s) => s.gauge(x),
        }
    }

    /// Gradient of the gauge, homogeneous of degree 0. At a polytope ridge
    /// the limiting value from one adjacent facet is returned.
    pub fn gauge_gradient(&self, x: &[f64]) -> Vec<f64> {
        match self {
            ConvexBody::Polytope(Polytope::Planar(p)) => p.gauge_gradient(x).to_vec(),
            ConvexBody::Polytope(Polytope::Solid(p)) => p.gauge_gradient(x).to_vec(),
            ConvexBody::Ellipsoid(e) => e.gauge_gradient(x),
            ConvexBody::Sampled(s) => s.gauge_gradient(x),
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            ConvexBody::Polytope(Polytope::Planar(p)) => p.area(),
            ConvexBody::Polytope(Polytope::Solid(p)) => p.volume(),
            ConvexBody::Ellipsoid(e) => e.volume(),
            ConvexBody::Sampled(s) => s.volume(),
        }
    }

    pub fn support_values(&self, grid: &SphereGrid) -> Vec<f64> {
        grid.nodes().map(|u| self.support(u)).collect()
    }

    pub fn to_sampled(&self, grid: Arc<SphereGrid>) -> Result<SampledBody> {
        if grid.dim() != self.dim() {
            return invalid("grid dimension does not match body dimension");
        }
        let values = self.support_values(&grid);
        SampledBody::new(grid, values)
    }

    /// `A K`, with support function `h_K(A^T xi)`.
    pub fn linear_image(&self, a: &DMatrix<f64>) -> Result<Self> {
        let n = self.dim();
        if a.nrows() != n || a.ncols() != n {
            return invalid(format!("linear map must be {n}x{n}"));
        }
        let det = a.determinant();
        let scale = a.iter().map(|v| v.abs()).fold(0.0, f64::max).powi(n as i32);
        if !(det.abs() > 1e-12 * scale.max(1e-300)) {
            return invalid("linear map is singular");
        }
        let apply = |v: &[f64]| -> Vec<f64> {
            (0..n).map(|i| (0..n).map(|j| a[(i, j)] * v[j]).sum()).collect()
        };
        match self {
            ConvexBody::Polytope(Polytope::Planar(p)) => {
                let pts: Vec<Vec<f64>> = p.vertices().iter().map(|v| apply(v)).collect();
                Self::polytope(&pts)
            }
            ConvexBody::Polytope(Polytope::Solid(p)) => {
                let pts: Vec<Vec<f64>> = p.vertices().iter().map(|v| apply(v)).collect();
                Self::polytope(&pts)
            }
            ConvexBody::Ellipsoid(e) => Ok(ConvexBody::Ellipsoid(e.map(a)?)),
            ConvexBody::Sampled(s) => {
                let at = a.transpose();
                let values = s
                    .grid()
                    .nodes()
                    .map(|u| {
                        let v: Vec<f64> = (0..n).map(|i| (0..n).map(|j| at[(i, j)] * u[j]).sum()).collect();
                        s.support(&v)
                    })
                    .collect();
                Self::sampled(s.grid().clone(), values)
            }
        }
    }

    /// The body with support `(h_K^r + eps h_L^r)^{1/r}`, sampled on a shared grid:
    /// the grid of whichever operand is sampled, or the default grid.
    pub fn lr_combination(k: &Self, l: &Self, eps: f64, r: f64) -> Result<Self> {
        if k.dim() != l.dim() {
            return invalid("bodies of different dimension");
        }
        if !(eps >= 0.0 && r >= 1.0) {
            return invalid("L_r combination needs eps >= 0 and r >= 1");
        }
        let grid = match (k, l) {
            (ConvexBody::Sampled(a), ConvexBody::Sampled(b)) => {
                if a.grid() != b.grid() {
                    return invalid("sampled bodies live on incompatible grids");
                }
                a.grid().clone()
            }
            (ConvexBody::Sampled(a), _) | (_, ConvexBody::Sampled(a)) => a.grid().clone(),
            _ => SphereGrid::default_for(k.dim())?,
        };
        Self::lr_combination_on(k, l, eps, r, grid)
    }

    pub fn lr_combination_on(k: &Self, l: &Self, eps: f64, r: f64, grid: Arc<SphereGrid>) -> Result<Self> {
        let values = grid
            .nodes()
            .map(|u| (k.support(u).powf(r) + eps * l.support(u).powf(r)).powf(1.0 / r))
            .collect();
        Self::sampled(grid, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn golden_values() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        assert_relative_eq!(sq.support(&[1.0, 1.0]), 2.0);
        assert_relative_eq!(sq.volume(), 4.0, epsilon = 1e-14);
        let d = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(sq.radial(&[d, d]), 2f64.sqrt(), epsilon = 1e-14);

        let e = ConvexBody::ellipsoid(DMatrix::from_diagonal(&nalgebra::dvector![2.0, 1.0])).unwrap();
        assert_relative_eq!(e.support(&[1.0, 0.0]), 2.0);
        assert_relative_eq!(e.radial(&[1.0, 0.0]), 2.0);
        assert_relative_eq!(e.volume(), 2.0 * PI, epsilon = 1e-14);

        let grid = SphereGrid::circle(512).unwrap();
        let disk = ConvexBody::sampled(grid, vec![1.0; 512]).unwrap();
        for t in [0.0, 0.1, 1.3, 4.0] {
            assert_relative_eq!(disk.support(&[f64::cos(t), f64::sin(t)]), 1.0, epsilon = 1e-12);
        }
        assert_relative_eq!(ConvexBody::ball(2).volume(), PI, epsilon = 1e-14);
    }

    #[test]
    fn lr_combination_cases() {
        let disk = ConvexBody::ball(2);
        let c = ConvexBody::lr_combination(&disk, &disk, 1.0, 2.0).unwrap();
        assert_relative_eq!(c.support(&[0.6, 0.8]), 2f64.sqrt(), epsilon = 1e-12);
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let c0 = ConvexBody::lr_combination(&sq, &disk, 0.0, 3.0).unwrap();
        if let ConvexBody::Sampled(s) = &c0 {
            for (i, u) in s.grid().nodes().enumerate() {
                assert_relative_eq!(s.values()[i], sq.support(u), epsilon = 1e-12);
            }
        }
        let c2 = ConvexBody::lr_combination(&sq, &sq, 1.0, 1.0).unwrap();
        assert_relative_eq!(c2.volume(), 16.0, max_relative = 1e-9);
        let g1 = SphereGrid::circle(64).unwrap();
        let g2 = SphereGrid::circle(128).unwrap();
        let a = ConvexBody::sampled(g1, vec![1.0; 64]).unwrap();
        let b = ConvexBody::sampled(g2, vec![1.0; 128]).unwrap();
        assert!(ConvexBody::lr_combination(&a, &b, 1.0, 1.0).is_err());
    }

    #[test]
    fn sampled_radial_matches_exact_polygon() {
        let pts = [[1.0, 0.2], [0.4, 1.1], [-0.7, 0.9], [-1.1, -0.2], [-0.3, -1.0], [0.9, -0.6]];
        let hex = ConvexBody::polygon(&pts).unwrap();
        let grid = SphereGrid::circle(2048).unwrap();
        let s = ConvexBody::Sampled(hex.to_sampled(grid).unwrap());
        // Between two grid normals straddling an edge normal the sampled body
        // carries a tent of height at most edge_length * dtheta / 4.
        let max_edge = (0..pts.len())
            .map(|i| {
                let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
                ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
            })
            .fold(0.0, f64::max);
        let bound = max_edge * (2.0 * PI / 2048.0) / 4.0;
        let mut worst: f64 = 0.0;
        for k in 0..5000 {
            let t = 2.0 * PI * k as f64 / 5000.0 + 0.001;
            let u = [t.cos(), t.sin()];
            let d = s.radial(&u) - hex.radial(&u);
            assert!(d >= -1e-12, "sampled body must contain the polygon");
            worst = worst.max(d);
        }
        assert!(worst <= bound, "{worst} > {bound}");
        // Each tent has area at most edge_length^2 * dtheta / 8.
        let excess = s.volume() - hex.volume();
        let sum_sq: f64 = (0..pts.len())
            .map(|i| {
                let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
                (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
            })
            .sum();
        assert!(excess >= 0.0 && excess <= sum_sq * (2.0 * PI / 2048.0) / 8.0, "{excess}");
    }

    #[test]
    fn sampled_disk_volume_converges_quadratically() {
        let mut prev = f64::INFINITY;
        for n in [64, 128, 256, 512] {
            let d = ConvexBody::sampled(SphereGrid::circle(n).unwrap(), vec![1.0; n]).unwrap();
            let err = (d.volume() - PI).abs();
            assert!(err * 4.0 <= prev * 1.01, "n={n}: {err} vs {prev}");
            prev = err;
        }
    }

    #[test]
    fn linear_images() {
        let disk = ConvexBody::ball(2);
        let two = disk.linear_image(&(DMatrix::identity(2, 2) * 2.0)).unwrap();
        assert_relative_eq!(two.support(&[0.3, -0.4]), 1.0, epsilon = 1e-14);
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let a = nalgebra::dmatrix![1.0, 0.5; -0.2, 1.3];
        let img = sq.linear_image(&a).unwrap();
        assert_relative_eq!(img.volume(), a.determinant().abs() * 4.0, epsilon = 1e-12);
    }

    #[test]
    fn three_dimensional_bodies() {
        let cube = ConvexBody::cube(3, 1.0).unwrap();
        assert_relative_eq!(cube.volume(), 8.0, epsilon = 1e-12);
        let grid = SphereGrid::sphere(32, 64).unwrap();
        let ball = ConvexBody::sampled(grid.clone(), vec![1.0; grid.len()]).unwrap();
        assert_relative_eq!(ball.volume(), 4.0 * PI / 3.0, max_relative = 5e-3);
        let e = ConvexBody::ball(3);
        let u = [0.48, 0.6, 0.64];
        assert_relative_eq!(e.radial(&u) * e.gauge(&u), 1.0, epsilon = 1e-12);
    }
}
