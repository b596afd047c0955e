//! Convex polygons containing the origin, and Wulff polygons built from
//! sampled support values.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

pub type P2 = [f64; 2];

/// Minimum distance from the origin to every edge line.
pub const ORIGIN_CLEARANCE: f64 = 1e-9;

/// Andrew's monotone chain; returns the hull counter-clockwise without
/// collinear points.
pub fn convex_hull(points: &[P2]) -> Vec<P2> {
    let mut pts: Vec<P2> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: P2, a: P2, b: P2| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<P2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// A convex polygon with the origin in its interior, vertices counter-clockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<P2>,
    /// Outward unit normal of edge `i` (from vertex `i` to `i+1`).
    normals: Vec<P2>,
    /// Distance from the origin to edge `i`.
    offsets: Vec<f64>,
    lengths: Vec<f64>,
    /// Polar angle of each vertex, unwrapped to be increasing from `angles[0]`.
    angles: Vec<f64>,
}

impl ConvexPolygon {
    /// Convex hull of `points`, which must contain the origin strictly inside.
    pub fn from_points(points: &[P2]) -> Result<Self> {
        let hull = convex_hull(points);
        Self::from_hull(hull)
    }

    fn from_hull(vertices: Vec<P2>) -> Result<Self> {
        let m = vertices.len();
        if m < 3 {
            return Err(Error::InvalidArgument("polygon needs at least 3 non-collinear vertices".into()));
        }
        let mut normals = Vec::with_capacity(m);
        let mut offsets = Vec::with_capacity(m);
        let mut lengths = Vec::with_capacity(m);
        for i in 0..m {
            let a = vertices[i];
            let b = vertices[(i + 1) % m];
            let e = [b[0] - a[0], b[1] - a[1]];
            let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
            let nrm = [e[1] / len, -e[0] / len];
            let off = nrm[0] * a[0] + nrm[1] * a[1];
            if !(off >= ORIGIN_CLEARANCE) {
                return invalid(format!(
                    "origin must lie strictly inside the polygon (edge {i} at distance {off:e})"
                ));
            }
            normals.push(nrm);
            offsets.push(off);
            lengths.push(len);
        }
        let mut angles = Vec::with_capacity(m);
        let mut prev = vertices[0][1].atan2(vertices[0][0]);
        angles.push(prev);
        for v in &vertices[1..] {
            let mut t = v[1].atan2(v[0]);
            while t <= prev {
                t += 2.0 * PI;
            }
            angles.push(t);
            prev = t;
        }
        Ok(ConvexPolygon {
            vertices,
            normals,
            offsets,
            lengths,
            angles,
        })
    }

    pub fn vertices(&self) -> &[P2] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len()
    }

    /// `(outward normal, distance to origin, length)` of edge `i`.
    pub fn edge(&self, i: usize) -> (P2, f64, f64) {
        (self.normals[i], self.offsets[i], self.lengths[i])
    }

    /// Polar angle (in `[angles[0], angles[0] + 2 pi)`) of vertex `i`.
    pub fn vertex_angle(&self, i: usize) -> f64 {
        self.angles[i]
    }

    pub fn support(&self, xi: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| v[0] * xi[0] + v[1] * xi[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the edge hit by the ray in direction `u` (any nonzero vector).
    pub fn edge_of_direction(&self, u: &[f64]) -> usize {
        let m = self.vertices.len();
        let mut t = u[1].atan2(u[0]);
        let a0 = self.angles[0];
        while t < a0 {
            t += 2.0 * PI;
        }
        while t >= a0 + 2.0 * PI {
            t -= 2.0 * PI;
        }
        // Largest i with angles[i] <= t.
        let i = self.angles.partition_point(|&a| a <= t);
        (i + m - 1) % m
    }

    pub fn radial(&self, u: &[f64]) -> f64 {
        let i = self.edge_of_direction(u);
        let n = self.normals[i];
        let len = (u[0] * u[0] + u[1] * u[1]).sqrt();
        self.offsets[i] * len / (n[0] * u[0] + n[1] * u[1])
    }

    pub fn gauge(&self, x: &[f64]) -> f64 {
        if x[0] == 0.0 && x[1] == 0.0 {
            return 0.0;
        }
        let i = self.edge_of_direction(x);
        let n = self.normals[i];
        (n[0] * x[0] + n[1] * x[1]) / self.offsets[i]
    }

    /// Gradient of the gauge at `x`; on a vertex ray the limiting value of the
    /// counter-clockwise edge is returned.
    pub fn gauge_gradient(&self, x: &[f64]) -> P2 {
        let i = self.edge_of_direction(x);
        let n = self.normals[i];
        [n[0] / self.offsets[i], n[1] / self.offsets[i]]
    }

    pub fn area(&self) -> f64 {
        0.5 * self
            .offsets
            .iter()
            .zip(&self.lengths)
            .map(|(h, l)| h * l)
            .sum::<f64>()
    }

    pub fn map(&self, a: [[f64; 2]; 2]) -> Result<Self> {
        let pts: Vec<P2> = self
            .vertices
            .iter()
            .map(|v| [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]])
            .collect();
        Self::from_points(&pts)
    }

    /// Area centroid.
    pub fn centroid(&self) -> P2 {
        centroid(&self.vertices)
    }
}

/// Area centroid of a simple polygon given counter-clockwise.
pub fn centroid(v: &[P2]) -> P2 {
    let m = v.len();
    let mut a = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..m {
        let p = v[i];
        let q = v[(i + 1) % m];
        let c = p[0] * q[1] - q[0] * p[1];
        a += c;
        cx += (p[0] + q[0]) * c;
        cy += (p[1] + q[1]) * c;
    }
    [cx / (3.0 * a), cy / (3.0 * a)]
}

/// Intersection of the half-planes `<x, (cos t_k, sin t_k)> <= h_k`: the
/// largest convex set with support function at most `h` at the given angles.
/// Angles need not be sorted or uniform; `h` must be positive.
pub fn wulff_polygon(angles: &[f64], h: &[f64]) -> Result<ConvexPolygon> {
    if angles.len() != h.len() || angles.len() < 3 {
        return invalid("Wulff polygon needs at least 3 angle/value pairs of equal length");
    }
    if h.iter().any(|v| !(*v > 0.0)) {
        return invalid("Wulff polygon needs strictly positive support values");
    }
    let hmax = h.iter().cloned().fold(0.0, f64::max);
    let b = 16.0 * hmax;
    let mut poly: Vec<P2> = vec![[-b, -b], [b, -b], [b, b], [-b, b]];
    // Clip in angle order so each step removes at most a short chain.
    let mut order: Vec<usize> = (0..angles.len()).collect();
    order.sort_by(|&i, &j| angles[i].rem_euclid(2.0 * PI).total_cmp(&angles[j].rem_euclid(2.0 * PI)));
    let mut next: Vec<P2> = Vec::with_capacity(poly.len() + 2);
    for &k in &order {
        let u = [angles[k].cos(), angles[k].sin()];
        let hk = h[k];
        next.clear();
        let m = poly.len();
        for i in 0..m {
            let p = poly[i];
            let q = poly[(i + 1) % m];
            let sp = u[0] * p[0] + u[1] * p[1] - hk;
            let sq = u[0] * q[0] + u[1] * q[1] - hk;
            if sp <= 0.0 {
                next.push(p);
            }
            if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
                let t = sp / (sp - sq);
                next.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
        std::mem::swap(&mut poly, &mut next);
        if poly.len() < 3 {
            return Err(Error::NumericFailure("Wulff polygon collapsed".into()));
        }
    }
    // Drop coincident vertices produced by constraints through a vertex.
    let scale = hmax * 1e-13;
    let mut cleaned: Vec<P2> = Vec::with_capacity(poly.len());
    for p in poly {
        if let Some(last) = cleaned.last() {
            if (p[0] - last[0]).abs() <= scale && (p[1] - last[1]).abs() <= scale {
                continue;
            }
        }
        cleaned.push(p);
    }
    while cleaned.len() > 3 {
        let f = cleaned[0];
        let l = cleaned[cleaned.len() - 1];
        if (f[0] - l[0]).abs() <= scale && (f[1] - l[1]).abs() <= scale {
            cleaned.pop();
        } else {
            break;
        }
    }
    ConvexPolygon::from_points(&cleaned)
}

/// Area of the Wulff polygon of `(angles, h)`.
pub fn wulff_area(angles: &[f64], h: &[f64]) -> Result<f64> {
    Ok(wulff_polygon(angles, h)?.area())
}
