//! L_r mixed volumes of convex bodies, through the L_r surface area measure
//! and, as a cross-check, through the first variation of volume.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::polygon::wulff_area;
use crate::fields::ScalarField;
use crate::geometry::angular::integrate_directions;
use crate::geometry::sphere::{dot, norm, SphereGrid};
use crate::par::det_sum;
use crate::geometry::{ConvexBody, Polytope, SampledBody};

/// Relative disagreement between the primary and the finite-difference
/// mixed volume beyond which the computation is reported as failed.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-2;

/// Finite-difference steps (relative to the size of `h_K^r`), combined by
/// Richardson extrapolation.
pub const FD_STEPS: [f64; 2] = [1e-3, 5e-4];

/// A discrete L_r surface area measure: unit normals with positive weights.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfaceAtoms {
    pub normals: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SurfaceAtoms {
    /// `int phi dS_r` for a function of the unit normal.
    pub fn integrate(&self, phi: impl Fn(&[f64]) -> f64) -> f64 {
        self.normals
            .iter()
            .zip(&self.weights)
            .map(|(u, w)| w * phi(u))
            .sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `sum w_i u_i`.
    pub fn resultant(&self) -> Vec<f64> {
        let dim = self.normals.first().map_or(0, |u| u.len());
        let mut out = vec![0.0; dim];
        for (u, w) in self.normals.iter().zip(&self.weights) {
            for (o, x) in out.iter_mut().zip(u) {
                *o += w * x;
            }
        }
        out
    }
}

/// The L_r surface area measure `h_K^{1-r} dS_K` of a body.
///
/// Polytopes (and the Wulff polygon of a sampled planar body) give one atom
/// per facet. Ellipsoids `A B` use the exact change of variables to the
/// sphere, `|det A| int phi(A^{-T} v)^r dv`, discretised on the default
/// sphere grid. Sampled bodies in space use `int r_K^n phi(grad ||.||_K)^r du`.
pub fn surface_atoms(k: &ConvexBody, r: f64) -> Result<SurfaceAtoms> {
    surface_atoms_on(k, r, None)
}

pub fn surface_atoms_on(k: &ConvexBody, r: f64, grid: Option<Arc<SphereGrid>>) -> Result<SurfaceAtoms> {
    if !(r >= 1.0) {
        return invalid(format!("L_r surface measure needs r >= 1, got {r}"));
    }
    let mut normals = Vec::new();
    let mut weights = Vec::new();
    match k {
        ConvexBody::Polytope(Polytope::Planar(p)) => {
            for i in 0..p.edge_count() {
                let (nrm, off, len) = p.edge(i);
                normals.push(nrm.to_vec());
                weights.push(len * off.powf(1.0 - r));
            }
        }
        ConvexBody::Polytope(Polytope::Solid(p)) => {
            for f in p.facets() {
                normals.push(f.normal.to_vec());
                weights.push(f.area * f.offset.powf(1.0 - r));
            }
        }
        ConvexBody::Sampled(s) if s.dim() == 2 => {
            let w = s.wulff();
            for i in 0..w.edge_count() {
                let (nrm, off, len) = w.edge(i);
                normals.push(nrm.to_vec());
                weights.push(len * off.powf(1.0 - r));
            }
        }
        ConvexBody::Ellipsoid(e) => {
            let grid = match grid {
                Some(g) => g,
                None => SphereGrid::default_for(e.dim())?,
            };
            let a = e.matrix();
            let n = e.dim();
            let a_inv_t = a
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::InvalidArgument("ellipsoid matrix is singular".into()))?
                .transpose();
            let det = a.determinant().abs();
            for (v, wv) in grid.nodes().zip(grid.weights()) {
                let y: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a_inv_t[(i, j)] * v[j]).sum()).collect();
                let len = norm(&y);
                normals.push(y.iter().map(|c| c / len).collect());
                weights.push(det * wv * len.powf(r));
            }
        }
        ConvexBody::Sampled(s) => {
            let grid = s.grid();
            let radial = s.node_radial();
            for (i, u) in grid.nodes().enumerate() {
                let w = s.gauge_gradient(u);
                let len = norm(&w);
                normals.push(w.iter().map(|c| c / len).collect());
                weights.push(grid.weight(i) * radial[i].powi(3) * len.powf(r));
            }
        }
    }
    Ok(SurfaceAtoms { normals, weights })
}

/// Result of [`mixed_volume_r`] with its cross-check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixedVolume {
    pub value: f64,
    pub path: &'static str,
    pub check: f64,
    pub check_path: &'static str,
    pub rel_diff: f64,
}

fn primary_path(k: &ConvexBody) -> &'static str {
    match k {
        ConvexBody::Polytope(_) => "atomic",
        ConvexBody::Ellipsoid(_) => "ellipsoid",
        ConvexBody::Sampled(s) if s.dim() == 2 => "atomic-wulff",
        ConvexBody::Sampled(_) => "radial-gauge",
    }
}

/// `V_r(K, L)` from the surface measure only.
pub fn mixed_volume_primary(k: &ConvexBody, l: &ConvexBody, r: f64) -> Result<f64> {
    if k.dim() != l.dim() {
        return invalid("bodies of different dimension");
    }
    let atoms = surface_atoms(k, r)?;
    Ok(atoms.integrate(|u| l.support(u).powf(r)) / k.dim() as f64)
}

/// `V_r(K, L)` with the mandatory finite-difference cross-check; a relative
/// disagreement above [`CROSS_CHECK_TOLERANCE`] is a numeric failure.
pub fn mixed_volume_r(k: &ConvexBody, l: &ConvexBody, r: f64) -> Result<MixedVolume> {
    let value = mixed_volume_primary(k, l, r)?;
    let check = mixed_volume_fd(k, l, r)?;
    let rel_diff = (value - check).abs() / value.abs().max(f64::MIN_POSITIVE);
    if !(rel_diff <= CROSS_CHECK_TOLERANCE) {
        return Err(Error::NumericFailure(format!(
            "mixed volume paths disagree: {} gives {value}, finite difference gives {check} (relative {rel_diff:e})",
            primary_path(k)
        )));
    }
    Ok(MixedVolume {
        value,
        path: primary_path(k),
        check,
        check_path: "finite-difference",
        rel_diff,
    })
}

/// Angles at which the planar finite-difference volumes are evaluated: the
/// grid of a sampled `K`, otherwise a uniform grid together with the facet
/// normals of polygonal operands.
fn fd_angles(k: &ConvexBody, l: &ConvexBody) -> Result<Vec<f64>> {
    if let ConvexBody::Sampled(s) = k {
        return Ok((0..s.grid().len()).map(|i| s.grid().angle(i)).collect());
    }
    let n = crate::geometry::sphere::DEFAULT_CIRCLE_N;
    let mut angles: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
    for b in [k, l] {
        if let ConvexBody::Polytope(Polytope::Planar(p)) = b {
            for i in 0..p.edge_count() {
                let (nrm, _, _) = p.edge(i);
                angles.push(nrm[1].atan2(nrm[0]).rem_euclid(2.0 * PI));
            }
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    Ok(angles)
}

/// `(r/n) d/deps vol(K +_r eps L)` at 0, by forward differences at the
/// [`FD_STEPS`] and Richardson extrapolation.
pub fn mixed_volume_fd(k: &ConvexBody, l: &ConvexBody, r: f64) -> Result<f64> {
    if k.dim() != l.dim() {
        return invalid("bodies of different dimension");
    }
    let n = k.dim() as f64;
    let (hk, hl, volume): (Vec<f64>, Vec<f64>, Box<dyn Fn(&[f64]) -> Result<f64>>) = if k.dim() == 2 {
        let angles = fd_angles(k, l)?;
        let hk: Vec<f64> = angles.iter().map(|t| k.support(&[t.cos(), t.sin()])).collect();
        let hl: Vec<f64> = angles.iter().map(|t| l.support(&[t.cos(), t.sin()])).collect();
        (hk, hl, Box::new(move |h: &[f64]| wulff_area(&angles, h)))
    } else {
        let grid = match k {
            ConvexBody::Sampled(s) => s.grid().clone(),
            _ => SphereGrid::default_for(3)?,
        };
        let hk = k.support_values(&grid);
        let hl = l.support_values(&grid);
        (
            hk,
            hl,
            Box::new(move |h: &[f64]| Ok(SampledBody::new(grid.clone(), h.to_vec())?.volume())),
        )
    };
    let hkr: Vec<f64> = hk.iter().map(|v| v.powf(r)).collect();
    let hlr: Vec<f64> = hl.iter().map(|v| v.powf(r)).collect();
    // Keep the relative perturbation of every support value below the step.
    let scale = hkr
        .iter()
        .zip(&hlr)
        .filter(|(_, b)| **b > 0.0)
        .map(|(a, b)| a / b)
        .fold(f64::INFINITY, f64::min);
    let v0 = volume(&hk)?;
    let mut diffs = [0.0; 2];
    for (d, &step) in diffs.iter_mut().zip(&FD_STEPS) {
        let eps = step * scale;
        let h: Vec<f64> = hkr
            .iter()
            .zip(&hlr)
            .map(|(a, b)| (a + eps * b).powf(1.0 / r))
            .collect();
        *d = (volume(&h)? - v0) / eps;
    }
    let ratio = FD_STEPS[0] / FD_STEPS[1];
    let extrapolated = (ratio * diffs[1] - diffs[0]) / (ratio - 1.0);
    Ok(r / n * extrapolated)
}

/// Planar `V_r(K, L) = (1/2) int h_L^r h_K^{1-r} (h_K + h_K'') dtheta` with
/// `h_K''` by spectral differentiation of the samples of `K`.
pub fn mixed_volume_curvature(k: &SampledBody, l: &ConvexBody, r: f64) -> Result<f64> {
    let grid = k.grid();
    if grid.dim() != 2 || l.dim() != 2 {
        return Err(Error::Unsupported("the curvature path is planar only".into()));
    }
    let h = k.values();
    let m = h.len();
    let mut buf: Vec<Complex<f64>> = h.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    for (j, c) in buf.iter_mut().enumerate() {
        let freq = if j <= m / 2 { j as f64 } else { j as f64 - m as f64 };
        // The Nyquist mode has no well-defined second derivative; drop it.
        let factor = if m % 2 == 0 && j == m / 2 { 0.0 } else { -freq * freq };
        *c *= factor / m as f64;
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let dtheta = 2.0 * PI / m as f64;
    let mut total = 0.0;
    for i in 0..m {
        let radius_of_curvature = h[i] + buf[i].re;
        let u = grid.node(i);
        total += l.support(u).powf(r) * h[i].powf(1.0 - r) * radius_of_curvature * dtheta;
    }
    Ok(total / 2.0)
}

/// Shoelace area of a simple polygon (counter-clockwise positive).
pub fn polygon_area(vertices: &[[f64; 2]]) -> f64 {
    let m = vertices.len();
    (0..m)
        .map(|i| {
            let p = vertices[i];
            let q = vertices[(i + 1) % m];
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
        / 2.0
}

/// `V_1(M, K) = (1/2) sum_e h_K(nu_e) |e|` for a simple counter-clockwise
/// polygon `M` (not necessarily convex).
pub fn polygon_domain_mixed_volume(vertices: &[[f64; 2]], k: &ConvexBody) -> Result<f64> {
    if vertices.len() < 3 || k.dim() != 2 {
        return invalid("need a planar polygon with at least 3 vertices");
    }
    if !(polygon_area(vertices) > 0.0) {
        return invalid("polygon must be counter-clockwise with positive area");
    }
    let m = vertices.len();
    let mut total = 0.0;
    for i in 0..m {
        let p = vertices[i];
        let q = vertices[(i + 1) % m];
        let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
        let len = (dx * dx + dy * dy).sqrt();
        if len == 0.0 {
            continue;
        }
        total += k.support(&[dy / len, -dx / len]) * len;
    }
    Ok(total / 2.0)
}

/// `V_r(f, Q) = (1/n) int h_Q(-grad f)^r dx`.
///
/// For `f = P(||x||_K)` this is `(1/n) int (I_- h_Q(u)^r + I_+ h_Q(-u)^r) dS_r(K, u)`
/// with the radial gradient weights `I_-`, `I_+`; grid fields sum over nodes.
pub fn functional_mixed_volume(f: &ScalarField, q: &ConvexBody, r: f64) -> Result<f64> {
    if f.dim() != q.dim() {
        return invalid("field and body dimensions differ");
    }
    if !(r >= 1.0) {
        return invalid(format!("mixed volume exponent must be >= 1, got {r}"));
    }
    match f {
        ScalarField::Grid(g) => g.mixed_volume(q, r),
        ScalarField::Radial(rf) => {
            let (neg, pos) = rf.gradient_weights(r)?;
            let atoms = surface_atoms(rf.gauge(), r)?;
            let total = atoms.integrate(|u| {
                let mut v = 0.0;
                if neg > 0.0 {
                    v += neg * q.support(u).powf(r);
                }
                if pos > 0.0 {
                    let m: Vec<f64> = u.iter().map(|c| -c).collect();
                    v += pos * q.support(&m).powf(r);
                }
                v
            });
            Ok(total / f.dim() as f64)
        }
    }
}

/// `V_r(f, t, Q)` with a count of contour pieces where the gradient vanished.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LevelMixedVolume {
    pub value: f64,
    pub irregular: usize,
}

/// `V_r(f, t, Q) = (1/n) int_{|f| = t} h_Q(nu)^r |grad f|^{r-1}`.
///
/// Radial fields use `rho^{n-1} |P'(rho)|^{r-1} V_r(K, Q)` with `rho` the level
/// radius; planar grid fields integrate along the extracted level curve.
pub fn level_mixed_volume(f: &ScalarField, t: f64, q: &ConvexBody, r: f64) -> Result<LevelMixedVolume> {
    if !(t > 0.0) {
        return invalid("level must be positive");
    }
    if f.dim() != q.dim() {
        return invalid("field and body dimensions differ");
    }
    if t > f.max_value() {
        return Ok(LevelMixedVolume { value: 0.0, irregular: 0 });
    }
    match f {
        ScalarField::Grid(g) => {
            let (value, irregular) = g.level_mixed_volume(t, q, r)?;
            Ok(LevelMixedVolume { value, irregular })
        }
        ScalarField::Radial(rf) => {
            let factor = rf.level_factor(t, r)?;
            let irregular = usize::from(!(factor > 0.0));
            let v = if factor > 0.0 { factor * mixed_volume_primary(rf.gauge(), q, r)? } else { 0.0 };
            Ok(LevelMixedVolume { value: v, irregular })
        }
    }
}

/// `int ||x||_L^p g(x) dx`.
pub fn dual_mixed_volume(g: &ScalarField, l: &ConvexBody, p: f64) -> Result<f64> {
    if g.dim() != l.dim() {
        return invalid("field and body dimensions differ");
    }
    match g {
        ScalarField::Grid(gf) => {
            if gf.min_value() < 0.0 {
                return invalid("dual mixed volumes need a nonnegative field");
            }
            let vals = gf.values();
            let s = det_sum(vals.len(), |k| {
                if vals[k] == 0.0 {
                    0.0
                } else {
                    vals[k] * l.gauge(&gf.node_position(k)).powf(p)
                }
            });
            Ok(gf.cell_volume() * s)
        }
        ScalarField::Radial(rf) => {
            // int_S r_E^{n+p} r_L^{-p} du * int t^{n+p-1} G dt
            let n = rf.dim() as f64;
            let m = rf.profile().moment(n + p)?;
            if !m.is_finite() {
                return invalid("the dual mixed volume diverges");
            }
            let e = rf.gauge();
            let ang = integrate_directions(rf.dim(), &[e, l], &[], |u| {
                e.radial(u).powf(n + p) * l.radial(u).powf(-p)
            })?;
            Ok(m * ang)
        }
    }
}

/// The body with `h(xi)^p = int |<grad f, xi>|^p dx`, on `grid`.
pub fn polar_projection_body_of_function(f: &ScalarField, p: f64, grid: Arc<SphereGrid>) -> Result<SampledBody> {
    if !(p >= 1.0) {
        return invalid(format!("exponent must be >= 1, got {p}"));
    }
    if grid.dim() != f.dim() {
        return invalid("grid and field dimensions differ");
    }
    let powers: Vec<f64> = match f {
        ScalarField::Grid(g) => g.gradient_moment_values(&grid, p),
        ScalarField::Radial(rf) => {
            let (neg, pos) = rf.gradient_weights(p)?;
            let atoms = surface_atoms(rf.gauge(), p)?;
            grid.nodes()
                .map(|xi| (neg + pos) * atoms.integrate(|u| dot(u, xi).abs().powf(p)))
                .collect()
        }
    };
    let values: Vec<f64> = powers.iter().map(|v| v.powf(1.0 / p)).collect();
    if values.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::DegenerateField("gradients lie in a hyperplane".into()));
    }
    SampledBody::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{dmatrix, DMatrix};

    fn square() -> ConvexBody {
        ConvexBody::cube(2, 1.0).unwrap()
    }

    #[test]
    fn square_and_disk() {
        let v = mixed_volume_r(&square(), &ConvexBody::ball(2), 1.0).unwrap();
        assert_relative_eq!(v.value, 4.0, epsilon = 1e-14);
        assert!(v.rel_diff < 1e-6, "{v:?}");
        assert!(v.value >= 2.0 * PI.sqrt());
    }

    #[test]
    fn dilates_of_the_disk() {
        let big = ConvexBody::ellipsoid(DMatrix::identity(2, 2) * 2.0).unwrap();
        let v = mixed_volume_r(&ConvexBody::ball(2), &big, 2.0).unwrap();
        assert_relative_eq!(v.value, 4.0 * PI, max_relative = 1e-12);
        assert_relative_eq!(v.check, 4.0 * PI, max_relative = 1e-4);
    }

    #[test]
    fn self_mixed_volume_is_volume() {
        let bodies = [
            square(),
            ConvexBody::polygon(&[[1.0, 0.2], [0.1, 1.3], [-0.8, 0.1], [-0.2, -0.9], [0.9, -0.7]]).unwrap(),
            ConvexBody::ellipsoid(dmatrix![2.0, 0.3; -0.1, 0.7]).unwrap(),
            ConvexBody::cube(3, 0.5).unwrap(),
            ConvexBody::ellipsoid(dmatrix![1.0, 0.2, 0.0; 0.0, 0.8, 0.1; 0.3, 0.0, 1.2]).unwrap(),
        ];
        for k in &bodies {
            for r in [1.0, 1.5, 3.0] {
                let v = mixed_volume_primary(k, k, r).unwrap();
                assert_relative_eq!(v, k.volume(), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn sampled_bodies_agree_with_curvature_path() {
        let grid = SphereGrid::circle(1024).unwrap();
        let e = ConvexBody::ellipsoid(dmatrix![1.5, 0.2; 0.1, 0.8]).unwrap();
        let s = e.to_sampled(grid).unwrap();
        let l = square();
        let exact = mixed_volume_primary(&e, &l, 2.0).unwrap();
        let wulff = mixed_volume_primary(&ConvexBody::Sampled(s.clone()), &l, 2.0).unwrap();
        let curv = mixed_volume_curvature(&s, &l, 2.0).unwrap();
        assert_relative_eq!(wulff, exact, max_relative = 1e-4);
        // h_L has kinks at the square's normals, so the trapezoid sum is second order.
        assert_relative_eq!(curv, exact, max_relative = 5e-5);
        let checked = mixed_volume_r(&ConvexBody::Sampled(s), &l, 2.0).unwrap();
        assert!(checked.rel_diff < 1e-4);
    }

    #[test]
    fn solid_mixed_volumes_cross_check() {
        let cube = ConvexBody::cube(3, 1.0).unwrap();
        let ball = ConvexBody::ball(3);
        // V_1(cube, ball) = (1/3) * surface area * 1 = 8
        let v = mixed_volume_r(&cube, &ball, 1.0).unwrap();
        assert_relative_eq!(v.value, 8.0, max_relative = 1e-12);
        // V_1(ball, cube) = (1/3) int h_cube = (1/3) * 4 pi * 3/2
        let w = mixed_volume_r(&ball, &cube, 1.0).unwrap();
        assert_relative_eq!(w.value, 2.0 * PI, max_relative = 1e-4);
    }

    #[test]
    fn closedness_of_the_surface_measure() {
        let k = ConvexBody::polygon(&[[1.0, 0.2], [0.1, 1.3], [-0.8, 0.1], [-0.2, -0.9]]).unwrap();
        for v in surface_atoms(&k, 1.0).unwrap().resultant() {
            assert!(v.abs() < 1e-12);
        }
        let e = ConvexBody::ellipsoid(dmatrix![1.0, 0.2, 0.0; 0.0, 0.8, 0.1; 0.3, 0.0, 1.2]).unwrap();
        for v in surface_atoms(&e, 1.0).unwrap().resultant() {
            assert!(v.abs() < 1e-10);
        }
    }

    #[test]
    fn star_polygon_mixed_volume() {
        // For a convex polygon this is the usual V_1.
        let sq = [[1.0, -1.0], [1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0]];
        let v = polygon_domain_mixed_volume(&sq, &ConvexBody::ball(2)).unwrap();
        assert_relative_eq!(v, 4.0, epsilon = 1e-14);
    }

    fn cone() -> ScalarField {
        crate::fields::RadialField::new(crate::fields::Profile::Cone, ConvexBody::ball(2)).unwrap().into()
    }

    #[test]
    fn functional_mixed_volumes_of_the_cone() {
        let f = cone();
        assert_relative_eq!(functional_mixed_volume(&f, &ConvexBody::ball(2), 1.0).unwrap(), PI / 2.0, max_relative = 1e-12);
        assert_relative_eq!(functional_mixed_volume(&f, &square(), 1.0).unwrap(), 2.0, max_relative = 1e-5);
        let lv = level_mixed_volume(&f, 0.5, &ConvexBody::ball(2), 2.5).unwrap();
        assert_relative_eq!(lv.value, PI / 2.0, max_relative = 1e-12);
        assert_eq!(level_mixed_volume(&f, 1.5, &ConvexBody::ball(2), 1.0).unwrap().value, 0.0);
        let big = ConvexBody::ellipsoid(DMatrix::identity(2, 2) * 3.0).unwrap();
        let lv3 = level_mixed_volume(&f, 0.5, &big, 2.0).unwrap();
        assert_relative_eq!(lv3.value, 9.0 * PI / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn co_area_for_a_radial_field() {
        let f: ScalarField = crate::fields::RadialField::new(
            crate::fields::Profile::layer_g(2.0, 3.0),
            ConvexBody::ellipsoid(dmatrix![1.2, 0.3; 0.0, 0.8]).unwrap(),
        )
        .unwrap()
        .into();
        let q = square();
        let rule = crate::quadrature::QuadRule::graded(0.0, f.max_value(), 64, 20, 16);
        let co = rule.integrate(|t| level_mixed_volume(&f, t, &q, 1.5).unwrap().value);
        let direct = functional_mixed_volume(&f, &q, 1.5).unwrap();
        assert_relative_eq!(co, direct, max_relative = 1e-2);
    }

    #[test]
    fn dual_mixed_volume_of_the_disk() {
        let g: ScalarField = crate::fields::RadialField::new(crate::fields::Profile::Indicator, ConvexBody::ball(2))
            .unwrap()
            .into();
        assert_relative_eq!(dual_mixed_volume(&g, &ConvexBody::ball(2), 2.0).unwrap(), PI / 2.0, max_relative = 1e-12);
        let two = ConvexBody::ellipsoid(DMatrix::identity(2, 2) * 2.0).unwrap();
        assert_relative_eq!(dual_mixed_volume(&g, &two, 2.0).unwrap(), PI / 8.0, max_relative = 1e-12);
    }

    #[test]
    fn polar_projection_of_the_cone() {
        let grid = SphereGrid::circle(64).unwrap();
        let b = polar_projection_body_of_function(&cone(), 2.0, grid).unwrap();
        for v in b.values() {
            assert_relative_eq!(*v, (PI / 2.0).sqrt(), max_relative = 1e-10);
        }
    }
}
