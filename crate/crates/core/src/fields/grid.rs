//! Fields sampled on a uniform box grid, read as the piecewise linear
//! interpolant on the Kuhn triangulation of the cells.

use std::sync::Arc;

use super::DiscreteMeasure;
use crate::error::{invalid, Error, Result};
use crate::geometry::sphere::{dot, norm, SphereGrid};
use crate::geometry::ConvexBody;
use crate::par::{det_sum, det_sum_vec, par_map};
use crate::quadrature::QuadRule;
use crate::star::CompactDomain;

/// Boundary values above this fraction of the maximum violate compact support.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Panels of the level quadrature used by [`GridField::layer_integral`].
pub const LAYER_PANELS: usize = 256;
const LAYER_GRADING: usize = 16;
const LAYER_ORDER: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    lo: Vec<f64>,
    h: Vec<f64>,
    shape: Vec<usize>,
    strides: Vec<usize>,
    values: Vec<f64>,
    grads: Vec<f64>,
}

/// One segment of a planar level curve.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourSegment {
    pub a: [f64; 2],
    pub b: [f64; 2],
    /// Unit normal pointing out of the superlevel set.
    pub normal: [f64; 2],
    /// `|grad f|` at the midpoint.
    pub grad_norm: f64,
}

impl ContourSegment {
    pub fn length(&self) -> f64 {
        ((self.b[0] - self.a[0]).powi(2) + (self.b[1] - self.a[1]).powi(2)).sqrt()
    }
}

/// The Kuhn simplices of the unit cube: one vertex path per axis permutation.
fn kuhn_paths(dim: usize) -> Vec<Vec<usize>> {
    match dim {
        2 => vec![vec![0, 1], vec![1, 0]],
        _ => vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ],
    }
}

/// Fraction of a triangle on which the linear interpolant of the sorted
/// vertex values `a <= b <= c` is at least `t`.
fn triangle_fraction(a: f64, b: f64, c: f64, t: f64) -> f64 {
    if t <= a {
        1.0
    } else if t > c {
        0.0
    } else if t <= b {
        1.0 - (t - a) * (t - a) / ((b - a) * (c - a))
    } else {
        (c - t) * (c - t) / ((c - a) * (c - b))
    }
}

/// Fraction of a tetrahedron on which the linear interpolant of the sorted
/// vertex values `a <= b <= c <= d` is at least `t`.
fn tet_fraction(a: f64, b: f64, c: f64, d: f64, t: f64) -> f64 {
    if t <= a {
        return 1.0;
    }
    if t > d {
        return 0.0;
    }
    let below = if t <= b {
        (t - a).powi(3) / ((b - a) * (c - a) * (d - a))
    } else if t > c {
        1.0 - (d - t).powi(3) / ((d - a) * (d - b) * (d - c))
    } else {
        let (lo, hi) = (b - a, d - c);
        if lo.max(hi) <= 1e-8 * (d - a) {
            // Values cluster at two levels: the interpolant is Beta(2, 2) distributed.
            let x = (t - b) / (c - b);
            x * x * (3.0 - 2.0 * x)
        } else if lo >= hi {
            (t - a).powi(3) / ((b - a) * (c - a) * (d - a)) - (t - b).powi(3) / ((b - a) * (c - b) * (d - b))
        } else {
            1.0 - (d - t).powi(3) / ((d - a) * (d - b) * (d - c)) + (c - t).powi(3) / ((d - c) * (c - a) * (c - b))
        }
    };
    (1.0 - below).clamp(0.0, 1.0)
}

impl GridField {
    /// Field with node values on the box `[lo_i, hi_i]`, `shape[i]` nodes per
    /// axis, row-major with axis 0 slowest. Values must vanish on the boundary.
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let dim = shape.len();
        if !(2..=3).contains(&dim) || lo.len() != dim || hi.len() != dim {
            return invalid("grid fields live in dimension 2 or 3");
        }
        if shape.iter().any(|&s| s < 3) {
            return invalid("every axis needs at least 3 nodes");
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(b > a)) {
            return invalid("box must have positive extent on every axis");
        }
        if values.len() != shape.iter().product::<usize>() {
            return invalid(format!(
                "expected {} values for shape {:?}, got {}",
                shape.iter().product::<usize>(),
                shape,
                values.len()
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("field values must be finite");
        }
        let h: Vec<f64> = (0..dim).map(|i| (hi[i] - lo[i]) / (shape[i] - 1) as f64).collect();
        let mut strides = vec![1; dim];
        for i in (0..dim - 1).rev() {
            strides[i] = strides[i + 1] * shape[i + 1];
        }
        let mut field = GridField {
            lo,
            h,
            shape,
            strides,
            values,
            grads: vec![],
        };
        let max = field.max_abs();
        let boundary = (0..field.values.len())
            .filter(|&k| field.on_boundary(k))
            .map(|k| field.values[k].abs())
            .fold(0.0, f64::max);
        if boundary > BOUNDARY_TOLERANCE * max {
            return invalid(format!(
                "field does not vanish on the box boundary (|value| up to {boundary:e})"
            ));
        }
        field.grads = field.node_gradients();
        Ok(field)
    }

    /// Samples `f` at the nodes of the box.
    pub fn from_fn(lo: Vec<f64>, hi: Vec<f64>, shape: Vec<usize>, f: impl Fn(&[f64]) -> f64 + Sync) -> Result<Self> {
        let dim = shape.len();
        if lo.len() != dim || hi.len() != dim || !(2..=3).contains(&dim) {
            return invalid("grid fields live in dimension 2 or 3");
        }
        let total: usize = shape.iter().product();
        let h: Vec<f64> = (0..dim).map(|i| (hi[i] - lo[i]) / (shape[i].max(2) - 1) as f64).collect();
        let values = par_map(total, |k| {
            let mut x = vec![0.0; dim];
            let mut rem = k;
            for i in (0..dim).rev() {
                x[i] = lo[i] + h[i] * (rem % shape[i]) as f64;
                rem /= shape[i];
            }
            f(&x)
        });
        Self::new(lo, hi, shape, values)
    }

    /// Square/cubic box `[-half, half]^n` with `m` nodes per axis.
    pub fn on_cube(dim: usize, half: f64, m: usize, f: impl Fn(&[f64]) -> f64 + Sync) -> Result<Self> {
        Self::from_fn(vec![-half; dim], vec![half; dim], vec![m; dim], f)
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.lo[i] + self.h[i] * (self.shape[i] - 1) as f64).collect()
    }

    pub fn spacing(&self) -> &[f64] {
        &self.h
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.iter().product()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn multi_index(&self, k: usize) -> Vec<usize> {
        let dim = self.dim();
        let mut idx = vec![0; dim];
        let mut rem = k;
        for i in (0..dim).rev() {
            idx[i] = rem % self.shape[i];
            rem /= self.shape[i];
        }
        idx
    }

    fn on_boundary(&self, k: usize) -> bool {
        self.multi_index(k)
            .iter()
            .zip(&self.shape)
            .any(|(&i, &s)| i == 0 || i == s - 1)
    }

    pub fn node_position(&self, k: usize) -> Vec<f64> {
        self.multi_index(k)
            .iter()
            .enumerate()
            .map(|(i, &j)| self.lo[i] + self.h[i] * j as f64)
            .collect()
    }

    /// Central differences, with zero values assumed outside the box.
    fn node_gradients(&self) -> Vec<f64> {
        let dim = self.dim();
        let per: Vec<Vec<f64>> = par_map(self.values.len(), |k| {
            let idx = self.multi_index(k);
            (0..dim)
                .map(|i| {
                    let s = self.strides[i];
                    let plus = if idx[i] + 1 < self.shape[i] { self.values[k + s] } else { 0.0 };
                    let minus = if idx[i] > 0 { self.values[k - s] } else { 0.0 };
                    (plus - minus) / (2.0 * self.h[i])
                })
                .collect()
        });
        per.into_iter().flatten().collect()
    }

    pub fn node_gradient(&self, k: usize) -> &[f64] {
        &self.grads[k * self.dim()..(k + 1) * self.dim()]
    }

    /// Cell containing `x` and the local coordinates in `[0, 1]^n`, if inside the box.
    fn locate(&self, x: &[f64]) -> Option<(usize, Vec<f64>)> {
        let dim = self.dim();
        let mut base = 0;
        let mut frac = vec![0.0; dim];
        for i in 0..dim {
            let s = (x[i] - self.lo[i]) / self.h[i];
            if !(s >= 0.0 && s <= (self.shape[i] - 1) as f64) {
                return None;
            }
            let j = (s.floor() as usize).min(self.shape[i] - 2);
            frac[i] = s - j as f64;
            base += j * self.strides[i];
        }
        Some((base, frac))
    }

    /// Multilinear interpolation of per-node data with `width` components.
    fn interpolate(&self, data: &[f64], width: usize, x: &[f64]) -> Vec<f64> {
        let dim = self.dim();
        let mut out = vec![0.0; width];
        let Some((base, frac)) = self.locate(x) else {
            return out;
        };
        for corner in 0..(1usize << dim) {
            let mut w = 1.0;
            let mut k = base;
            for (i, f) in frac.iter().enumerate() {
                if corner >> i & 1 == 1 {
                    w *= f;
                    k += self.strides[i];
                } else {
                    w *= 1.0 - f;
                }
            }
            if w != 0.0 {
                for (o, d) in out.iter_mut().zip(&data[k * width..(k + 1) * width]) {
                    *o += w * d;
                }
            }
        }
        out
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.interpolate(&self.values, 1, x)[0]
    }

    /// Interpolated central-difference gradient; zero outside the box.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.interpolate(&self.grads, self.dim(), x)
    }

    /// `(h^n sum |v|^q)^{1/q}`, the exact integral of the interpolant for `q = 1`.
    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        if !(q > 0.0) {
            return invalid(format!("norm exponent must be positive, got {q}"));
        }
        let s = det_sum(self.values.len(), |k| self.values[k].abs().powf(q));
        Ok((self.cell_volume() * s).powf(1.0 / q))
    }

    fn cell_count(&self) -> usize {
        self.shape.iter().map(|s| s - 1).product()
    }

    /// Node index of the lower corner of cell `c`.
    fn cell_base(&self, c: usize) -> usize {
        let dim = self.dim();
        let mut rem = c;
        let mut base = 0;
        for i in (0..dim).rev() {
            let m = self.shape[i] - 1;
            base += (rem % m) * self.strides[i];
            rem /= m;
        }
        base
    }

    /// Calls `f` with the node indices of every Kuhn simplex of cell `c`.
    fn for_simplices(&self, c: usize, paths: &[Vec<usize>], mut f: impl FnMut(&[usize])) {
        let base = self.cell_base(c);
        let mut verts = [0usize; 4];
        for path in paths {
            verts[0] = base;
            for (j, &axis) in path.iter().enumerate() {
                verts[j + 1] = verts[j] + self.strides[axis];
            }
            f(&verts[..=path.len()]);
        }
    }

    /// `vol({|f| >= t})` for every level in `levels` (sorted ascending, positive).
    pub fn level_volumes(&self, levels: &[f64]) -> Vec<f64> {
        let dim = self.dim();
        let m = levels.len();
        let paths = kuhn_paths(dim);
        let svol = self.cell_volume() / paths.len() as f64;
        // Slots 0..=m: difference array for simplices entirely above a level;
        // slots m+1..: direct contributions of partially covered simplices.
        let acc = det_sum_vec(self.cell_count(), 2 * m + 1, |c, acc| {
            self.for_simplices(c, &paths, |verts| {
                let mut v = [0.0f64; 4];
                for (j, &k) in verts.iter().enumerate() {
                    v[j] = self.values[k].abs();
                }
                let v = &mut v[..verts.len()];
                v.sort_by(f64::total_cmp);
                let (lo, hi) = (v[0], v[v.len() - 1]);
                if hi <= 0.0 {
                    return;
                }
                let full = levels.partition_point(|&t| t <= lo);
                acc[0] += svol;
                acc[full] -= svol;
                let end = levels.partition_point(|&t| t <= hi);
                for (j, &t) in levels.iter().enumerate().take(end).skip(full) {
                    let frac = if dim == 2 {
                        triangle_fraction(v[0], v[1], v[2], t)
                    } else {
                        tet_fraction(v[0], v[1], v[2], v[3], t)
                    };
                    acc[m + 1 + j] += svol * frac;
                }
            });
        });
        let mut out = Vec::with_capacity(m);
        let mut run = 0.0;
        for j in 0..m {
            run += acc[j];
            out.push(run + acc[m + 1 + j]);
        }
        out
    }

    pub fn level_volume(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return invalid("level must be positive");
        }
        Ok(self.level_volumes(&[t])[0])
    }

    /// The level quadrature on `[0, max |f|]`.
    pub fn level_rule(&self) -> QuadRule {
        QuadRule::graded(0.0, self.max_abs(), LAYER_PANELS, LAYER_GRADING, LAYER_ORDER)
    }

    /// `int_0^inf vol(N_t)^eta dt` with a graded composite Gauss rule in `t`.
    pub fn layer_integral(&self, eta: f64) -> Result<f64> {
        if !(eta > 0.0) {
            return invalid("layer exponent must be positive");
        }
        if self.max_abs() == 0.0 {
            return Ok(0.0);
        }
        let rule = self.level_rule();
        let vols = self.level_volumes(&rule.nodes);
        Ok(vols.iter().zip(&rule.weights).map(|(v, w)| w * v.max(0.0).powf(eta)).sum())
    }

    fn check_nonnegative(&self) -> Result<()> {
        if self.min_value() < -BOUNDARY_TOLERANCE * self.max_abs() {
            return invalid("moment bodies need a nonnegative field");
        }
        Ok(())
    }

    /// `h^n sum_nodes g |<x, xi>|^p` for every direction of `grid`.
    pub fn moment_pow_values(&self, grid: &SphereGrid, p: f64) -> Result<Vec<f64>> {
        self.check_nonnegative()?;
        let dim = self.dim();
        let support: Vec<(Vec<f64>, f64)> = (0..self.values.len())
            .filter(|&k| self.values[k] > 0.0)
            .map(|k| (self.node_position(k), self.values[k]))
            .collect();
        let cv = self.cell_volume();
        if p == 2.0 {
            let mut second = vec![0.0; dim * dim];
            for (x, g) in &support {
                for i in 0..dim {
                    for j in 0..dim {
                        second[i * dim + j] += g * x[i] * x[j];
                    }
                }
            }
            return Ok(grid
                .nodes()
                .map(|u| {
                    let mut s = 0.0;
                    for i in 0..dim {
                        for j in 0..dim {
                            s += u[i] * second[i * dim + j] * u[j];
                        }
                    }
                    cv * s
                })
                .collect());
        }
        Ok(par_map(grid.len(), |i| {
            let u = grid.node(i);
            let s: f64 = if p == 1.0 {
                support.iter().map(|(x, g)| g * dot(x, u).abs()).sum()
            } else {
                support.iter().map(|(x, g)| g * dot(x, u).abs().powf(p)).sum()
            };
            cv * s
        }))
    }

    /// `(1/n) h^n sum_nodes h_Q(-grad f)^r`.
    pub fn mixed_volume(&self, q: &ConvexBody, r: f64) -> Result<f64> {
        if q.dim() != self.dim() {
            return invalid("body and field dimensions differ");
        }
        let dim = self.dim();
        let s = det_sum(self.values.len(), |k| {
            let g = self.node_gradient(k);
            if g.iter().all(|c| *c == 0.0) {
                return 0.0;
            }
            let m: Vec<f64> = g.iter().map(|c| -c).collect();
            q.support(&m).powf(r)
        });
        Ok(self.cell_volume() * s / dim as f64)
    }

    /// `int phi(-grad f) dx` as a measure on `grid`: each node's normalised
    /// `-grad f` is binned to the nearest direction with weight `|grad f|^r h^n`.
    pub fn surface_measure(&self, r: f64, grid: Arc<SphereGrid>) -> Result<DiscreteMeasure> {
        if grid.dim() != self.dim() {
            return invalid("grid and field dimensions differ");
        }
        let cv = self.cell_volume();
        let weights = det_sum_vec(self.values.len(), grid.len(), |k, acc| {
            let g = self.node_gradient(k);
            let len = norm(g);
            if len > 0.0 {
                let u: Vec<f64> = g.iter().map(|c| -c / len).collect();
                acc[grid.nearest(&u)] += len.powf(r) * cv;
            }
        });
        if weights.iter().all(|w| *w == 0.0) {
            return Err(Error::DegenerateField("all gradients vanish".into()));
        }
        DiscreteMeasure::new(grid, weights)
    }

    /// `int |<grad f, xi>|^p dx` for every direction of `grid`.
    pub fn gradient_moment_values(&self, grid: &SphereGrid, p: f64) -> Vec<f64> {
        let cv = self.cell_volume();
        let dim = self.dim();
        let grads: Vec<&[f64]> = (0..self.values.len())
            .map(|k| self.node_gradient(k))
            .filter(|g| g.iter().any(|c| *c != 0.0))
            .collect();
        par_map(grid.len(), |i| {
            let u = grid.node(i);
            cv * grads.iter().map(|g| dot(&g[..dim], u).abs().powf(p)).sum::<f64>()
        })
    }

    /// `N_t = {|f| >= t}` traced along the rays of `grid`.
    pub fn level_domain(&self, t: f64, grid: Arc<SphereGrid>) -> Result<CompactDomain> {
        let hi = self.hi();
        let r_max = (0..self.dim())
            .map(|i| self.lo[i].abs().max(hi[i].abs()).powi(2))
            .sum::<f64>()
            .sqrt();
        let step = 0.5 * self.h.iter().copied().fold(f64::INFINITY, f64::min);
        CompactDomain::from_indicator(grid, r_max, step, |x| self.value(x).abs() >= t)
    }

    /// The level curve `{|f| = t}` of a planar field, traced through the
    /// Kuhn triangles. Normals are `-grad |f|` at segment midpoints.
    pub fn contour(&self, t: f64) -> Result<Vec<ContourSegment>> {
        if self.dim() != 2 {
            return Err(Error::Unsupported("level curves are extracted for planar fields only".into()));
        }
        if !(t > 0.0) {
            return invalid("level must be positive");
        }
        let paths = kuhn_paths(2);
        let segments: Vec<Vec<ContourSegment>> = par_map(self.cell_count(), |c| {
            let mut out = Vec::new();
            self.for_simplices(c, &paths, |verts| {
                let pos: Vec<Vec<f64>> = verts.iter().map(|&k| self.node_position(k)).collect();
                let val: Vec<f64> = verts.iter().map(|&k| self.values[k].abs()).collect();
                let mut pts = Vec::with_capacity(2);
                for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                    let (a, b) = (val[i] >= t, val[j] >= t);
                    if a != b {
                        let s = (t - val[i]) / (val[j] - val[i]);
                        pts.push([
                            pos[i][0] + s * (pos[j][0] - pos[i][0]),
                            pos[i][1] + s * (pos[j][1] - pos[i][1]),
                        ]);
                    }
                }
                if pts.len() != 2 {
                    return;
                }
                let mid = [(pts[0][0] + pts[1][0]) / 2.0, (pts[0][1] + pts[1][1]) / 2.0];
                let g = self.gradient(&mid);
                let sign = if self.value(&mid) < 0.0 { -1.0 } else { 1.0 };
                let len = norm(&g);
                let normal = if len > 0.0 {
                    [-sign * g[0] / len, -sign * g[1] / len]
                } else {
                    // Fall back on the segment geometry, oriented away from the larger values.
                    let d = [pts[1][0] - pts[0][0], pts[1][1] - pts[0][1]];
                    let dl = norm(&d);
                    let mut nrm = [d[1] / dl, -d[0] / dl];
                    let best = (0..3).max_by(|&i, &j| val[i].total_cmp(&val[j])).unwrap_or(0);
                    if nrm[0] * (pos[best][0] - mid[0]) + nrm[1] * (pos[best][1] - mid[1]) > 0.0 {
                        nrm = [-nrm[0], -nrm[1]];
                    }
                    nrm
                };
                out.push(ContourSegment {
                    a: pts[0],
                    b: pts[1],
                    normal,
                    grad_norm: len,
                });
            });
            out
        });
        Ok(segments.into_iter().flatten().collect())
    }

    /// `(1/2) int_{|f| = t} h_Q(nu)^r |grad f|^{r-1}` along the extracted contour.
    /// The second value counts segments with vanishing gradient.
    pub fn level_mixed_volume(&self, t: f64, q: &ConvexBody, r: f64) -> Result<(f64, usize)> {
        let segs = self.contour(t)?;
        let mut irregular = 0;
        let mut total = 0.0;
        for s in &segs {
            if s.grad_norm == 0.0 {
                irregular += 1;
                if r > 1.0 {
                    continue;
                }
            }
            total += s.length() * q.support(&s.normal).powf(r) * s.grad_norm.powf(r - 1.0);
        }
        Ok((total / 2.0, irregular))
    }

    /// The field `x -> f(A^{-1} x)` resampled on a box of the same shape
    /// that contains the image of the current box.
    pub fn linear_image(&self, a: &nalgebra::DMatrix<f64>) -> Result<Self> {
        let dim = self.dim();
        if a.nrows() != dim || a.ncols() != dim {
            return invalid("matrix size does not match the field dimension");
        }
        let inv = a
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("matrix is singular".into()))?;
        let hi = self.hi();
        let mut lo2 = vec![f64::INFINITY; dim];
        let mut hi2 = vec![f64::NEG_INFINITY; dim];
        for corner in 0..(1usize << dim) {
            let x: Vec<f64> = (0..dim).map(|i| if corner >> i & 1 == 1 { hi[i] } else { self.lo[i] }).collect();
            for i in 0..dim {
                let y: f64 = (0..dim).map(|j| a[(i, j)] * x[j]).sum();
                lo2[i] = lo2[i].min(y);
                hi2[i] = hi2[i].max(y);
            }
        }
        Self::from_fn(lo2, hi2, self.shape.clone(), |y| {
            let x: Vec<f64> = (0..dim).map(|i| (0..dim).map(|j| inv[(i, j)] * y[j]).sum()).collect();
            self.value(&x)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn cone(m: usize) -> GridField {
        GridField::on_cube(2, 1.1, m, |x| (1.0 - norm(x)).max(0.0)).unwrap()
    }

    #[test]
    fn fractions_are_consistent() {
        // Integrating the fraction over t recovers the mean vertex value.
        let rule = QuadRule::uniform(0.0, 4.0, 400, 8);
        let tri = rule.integrate(|t| triangle_fraction(0.5, 1.5, 3.0, t));
        assert_relative_eq!(tri, (0.5 + 1.5 + 3.0) / 3.0, epsilon = 1e-12);
        for v in [[0.2, 0.9, 1.7, 3.1], [0.0, 0.0, 2.0, 2.0], [1.0, 1.0, 1.0, 2.0], [0.3, 1.2, 1.2 + 1e-12, 2.5]] {
            let mut br = vec![0.0, 4.0];
            br.extend(v);
            br.sort_by(f64::total_cmp);
            let tet = QuadRule::composite(&br, 16).integrate(|t| tet_fraction(v[0], v[1], v[2], v[3], t));
            assert_relative_eq!(tet, v.iter().sum::<f64>() / 4.0, epsilon = 1e-10);
        }
        // Continuity across the middle branch choices.
        let a = tet_fraction(0.0, 1.0, 2.0, 3.0, 1.5);
        let b = 1.0 - (1.5f64.powi(3) / 6.0 - 0.5f64.powi(3) / 2.0);
        assert_relative_eq!(a, b, epsilon = 1e-14);
    }

    #[test]
    fn cone_quantities() {
        let f = cone(401);
        assert_relative_eq!(f.lq_norm(1.0).unwrap(), PI / 3.0, max_relative = 1e-3);
        assert_relative_eq!(f.lq_norm(2.0).unwrap(), (PI / 6.0).sqrt(), max_relative = 1e-3);
        assert_relative_eq!(f.level_volume(0.5).unwrap(), PI / 4.0, max_relative = 1e-3);
        assert_eq!(f.level_volume(2.0).unwrap(), 0.0);
        assert_relative_eq!(f.layer_integral(1.0).unwrap(), f.lq_norm(1.0).unwrap(), max_relative = 1e-4);
        assert_relative_eq!(f.layer_integral(0.5).unwrap(), PI.sqrt() / 2.0, max_relative = 2e-3);
        assert_relative_eq!(f.layer_integral(1.5).unwrap(), PI.powf(1.5) / 4.0, max_relative = 2e-3);
        let g = f.gradient(&[0.5, 0.0]);
        assert_relative_eq!(g[0], -1.0, epsilon = 1e-9);
        assert_relative_eq!(g[1], 0.0, epsilon = 1e-9);
        assert_eq!(f.gradient(&[3.0, 0.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn level_volumes_are_monotone() {
        let f = cone(101);
        let levels: Vec<f64> = (1..=32).map(|i| i as f64 / 32.0).collect();
        let v = f.level_volumes(&levels);
        for w in v.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn cone_mixed_volumes() {
        let f = cone(401);
        let disk = ConvexBody::ball(2);
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        assert_relative_eq!(f.mixed_volume(&disk, 1.0).unwrap(), PI / 2.0, max_relative = 1e-2);
        assert_relative_eq!(f.mixed_volume(&sq, 1.0).unwrap(), 2.0, max_relative = 1e-2);
        let (lv, irregular) = f.level_mixed_volume(0.5, &disk, 2.0).unwrap();
        assert_eq!(irregular, 0);
        assert_relative_eq!(lv, PI / 2.0, max_relative = 1e-3);
    }

    #[test]
    fn gradient_convergence_is_second_order() {
        let bump = |x: &[f64]| {
            let s = x[0] * x[0] + x[1] * x[1];
            if s < 1.0 {
                (1.0 - s).powi(4)
            } else {
                0.0
            }
        };
        let exact = |x: &[f64]| {
            let s = x[0] * x[0] + x[1] * x[1];
            let d = -8.0 * (1.0 - s).powi(3);
            [d * x[0], d * x[1]]
        };
        let err = |m: usize| {
            let f = GridField::on_cube(2, 1.2, m, bump).unwrap();
            let mut e: f64 = 0.0;
            for k in 0..f.values().len() {
                let x = f.node_position(k);
                let g = f.node_gradient(k);
                let ex = exact(&x);
                if x[0] * x[0] + x[1] * x[1] < 1.0 {
                    e = e.max((g[0] - ex[0]).abs()).max((g[1] - ex[1]).abs());
                }
            }
            e
        };
        let ratio = err(97) / err(193);
        assert!(ratio > 3.5 && ratio < 4.5, "ratio {ratio}");
    }

    #[test]
    fn surface_measure_of_the_cone() {
        let f = cone(301);
        let grid = SphereGrid::circle(64).unwrap();
        let m = f.surface_measure(1.0, grid.clone()).unwrap();
        let total: f64 = f.lq_norm(1.0).map(|_| m.total_mass()).unwrap();
        assert_relative_eq!(total, PI, max_relative = 1e-2);
        let direct = det_sum(f.values().len(), |k| norm(f.node_gradient(k))) * f.cell_volume();
        assert_relative_eq!(m.integrate(|_| 1.0), direct, max_relative = 1e-12);
        assert_eq!(m.span_rank(), 2);
    }

    #[test]
    fn product_bump_measure_spans_the_plane() {
        let f = GridField::on_cube(2, 1.2, 121, |x| {
            let a = (1.0 - x[0] * x[0]).max(0.0);
            let b = (1.0 - x[1] * x[1]).max(0.0);
            a * a * b * b
        })
        .unwrap();
        let m = f.surface_measure(1.0, SphereGrid::circle(64).unwrap()).unwrap();
        assert_eq!(m.span_rank(), 2);
    }

    #[test]
    fn rejects_nonvanishing_boundary() {
        assert!(GridField::on_cube(2, 1.0, 11, |_| 1.0).is_err());
    }

    #[test]
    fn three_dimensional_ball() {
        let f = GridField::on_cube(3, 1.1, 81, |x| (1.0 - norm(x)).max(0.0)).unwrap();
        // int (1 - |x|) over the unit ball = 4 pi (1/3 - 1/4) = pi/3
        assert_relative_eq!(f.lq_norm(1.0).unwrap(), PI / 3.0, max_relative = 5e-3);
        assert_relative_eq!(f.layer_integral(1.0).unwrap(), f.lq_norm(1.0).unwrap(), max_relative = 1e-4);
        assert_relative_eq!(f.level_volume(0.5).unwrap(), PI / 6.0, max_relative = 1e-2);
    }
}
