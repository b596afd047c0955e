//! Polytopes in dimension 3, given by their vertices. Facets are found by
//! brute force over vertex triples, which is adequate for a few dozen vertices.

use crate::error::{invalid, Result};

pub type P3 = [f64; 3];

#[derive(Clone, Debug, PartialEq)]
pub struct Facet3 {
    pub normal: P3,
    pub offset: f64,
    pub area: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polytope3 {
    vertices: Vec<P3>,
    facets: Vec<Facet3>,
}

fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: P3, b: P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl Polytope3 {
    pub fn from_points(points: &[P3]) -> Result<Self> {
        if points.len() < 4 {
            return invalid("a 3-polytope needs at least 4 vertices");
        }
        let scale = points
            .iter()
            .map(|p| dot(*p, *p).sqrt())
            .fold(0.0, f64::max);
        let tol = 1e-10 * scale.max(1e-300);
        let m = points.len();
        let mut facets: Vec<Facet3> = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let c = cross(sub(points[j], points[i]), sub(points[k], points[i]));
                    let len = dot(c, c).sqrt();
                    if len <= tol * scale {
                        continue;
                    }
                    let mut nrm = [c[0] / len, c[1] / len, c[2] / len];
                    let mut off = dot(nrm, points[i]);
                    if off < 0.0 {
                        nrm = [-nrm[0], -nrm[1], -nrm[2]];
                        off = -off;
                    }
                    if points.iter().any(|p| dot(nrm, *p) > off + tol) {
                        continue;
                    }
                    if facets
                        .iter()
                        .any(|f| dot(f.normal, nrm) > 1.0 - 1e-12 && (f.offset - off).abs() <= tol)
                    {
                        continue;
                    }
                    if off < 1e-9 {
                        return invalid("origin must lie strictly inside the polytope");
                    }
                    let on: Vec<P3> = points
                        .iter()
                        .copied()
                        .filter(|p| (dot(nrm, *p) - off).abs() <= tol)
                        .collect();
                    facets.push(Facet3 {
                        normal: nrm,
                        offset: off,
                        area: planar_hull_area(&on, nrm),
                    });
                }
            }
        }
        if facets.len() < 4 {
            return invalid("points do not span a 3-dimensional polytope");
        }
        let vertices: Vec<P3> = points
            .iter()
            .copied()
            .filter(|p| facets.iter().filter(|f| (dot(f.normal, *p) - f.offset).abs() <= tol).count() >= 3)
            .collect();
        Ok(Polytope3 { vertices, facets })
    }

    pub fn vertices(&self) -> &[P3] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet3] {
        &self.facets
    }

    pub fn support(&self, xi: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| v[0] * xi[0] + v[1] * xi[1] + v[2] * xi[2])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn gauge(&self, x: &[f64]) -> f64 {
        self.facets
            .iter()
            .map(|f| (f.normal[0] * x[0] + f.normal[1] * x[1] + f.normal[2] * x[2]) / f.offset)
            .fold(0.0, f64::max)
    }

    pub fn gauge_gradient(&self, x: &[f64]) -> P3 {
        let mut best = f64::NEG_INFINITY;
        let mut g = [0.0; 3];
        for f in &self.facets {
            let v = (f.normal[0] * x[0] + f.normal[1] * x[1] + f.normal[2] * x[2]) / f.offset;
            if v > best {
                best = v;
                g = [f.normal[0] / f.offset, f.normal[1] / f.offset, f.normal[2] / f.offset];
            }
        }
        g
    }

    pub fn volume(&self) -> f64 {
        self.facets.iter().map(|f| f.offset * f.area).sum::<f64>() / 3.0
    }
}

/// Area of the convex hull of coplanar points with plane normal `nrm`.
fn planar_hull_area(points: &[P3], nrm: P3) -> f64 {
    let a = if nrm[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = cross(nrm, a);
    let l1 = dot(e1, e1).sqrt();
    let e1 = [e1[0] / l1, e1[1] / l1, e1[2] / l1];
    let e2 = cross(nrm, e1);
    let pts: Vec<[f64; 2]> = points.iter().map(|p| [dot(*p, e1), dot(*p, e2)]).collect();
    let hull = super::polygon::convex_hull(&pts);
    let m = hull.len();
    let mut s = 0.0;
    for i in 0..m {
        let p = hull[i];
        let q = hull[(i + 1) % m];
        s += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * s.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cube() -> Polytope3 {
        let mut pts = Vec::new();
        for x in [-1.0, 1.0] {
            for y in [-1.0, 1.0] {
                for z in [-1.0, 1.0] {
                    pts.push([x, y, z]);
                }
            }
        }
        Polytope3::from_points(&pts).unwrap()
    }

    #[test]
    fn cube_has_six_facets_and_volume_eight() {
        let c = cube();
        assert_eq!(c.facets().len(), 6);
        assert_relative_eq!(c.volume(), 8.0, epsilon = 1e-12);
        assert_relative_eq!(c.support(&[1.0, 1.0, 1.0]), 3.0);
        assert_relative_eq!(c.gauge(&[0.5, 0.2, -0.1]), 0.5);
    }

    #[test]
    fn octahedron_volume() {
        let pts = [
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ];
        let o = Polytope3::from_points(&pts).unwrap();
        assert_eq!(o.facets().len(), 8);
        assert_relative_eq!(o.volume(), 4.0 / 3.0, epsilon = 1e-12);
    }
}
