//! Deterministic random instances: bodies, domains and fields.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::fields::{Bump, GridField, Profile, RadialField, ScalarField};
use crate::geometry::sphere::DEFAULT_CIRCLE_N;
use crate::geometry::{ConvexBody, SphereGrid};
use crate::params::ParamSet;
use crate::star::CompactDomain;

/// Default nodes per axis of generated grid fields.
pub const DEFAULT_FIELD_GRID_2D: usize = 256;
pub const DEFAULT_FIELD_GRID_3D: usize = 64;
/// Generated grid boxes exceed the support by this fraction per axis.
pub const BOX_PADDING: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    RandomPolygon,
    RandomEllipse,
    RandomDomain,
    StarPolygon,
    RandomGridField,
    RadialProfileField,
    ExtremalPair,
}

impl Generator {
    pub const ALL: [Generator; 7] = [
        Generator::RandomPolygon,
        Generator::RandomEllipse,
        Generator::RandomDomain,
        Generator::StarPolygon,
        Generator::RandomGridField,
        Generator::RadialProfileField,
        Generator::ExtremalPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::RandomPolygon => "random-polygon",
            Generator::RandomEllipse => "random-ellipse",
            Generator::RandomDomain => "random-domain",
            Generator::StarPolygon => "star-polygon",
            Generator::RandomGridField => "random-grid-field",
            Generator::RadialProfileField => "radial-profile-field",
            Generator::ExtremalPair => "extremal-pair",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown generator '{s}'")))
    }

    fn stream(self) -> u64 {
        self as u64 + 1
    }
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Resolution settings of generated instances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sizes {
    /// Nodes per axis of grid fields.
    pub field_grid: usize,
    /// Nodes of the circle grid (planar) or `m_theta` of the sphere grid.
    pub sphere: usize,
    /// Optional radius at which extremal profiles are cut off.
    pub truncation: Option<f64>,
}

impl Sizes {
    pub fn default_for(n: usize) -> Self {
        Sizes {
            field_grid: if n == 2 { DEFAULT_FIELD_GRID_2D } else { DEFAULT_FIELD_GRID_3D },
            sphere: if n == 2 { DEFAULT_CIRCLE_N } else { crate::geometry::sphere::DEFAULT_SPHERE_M },
            truncation: None,
        }
    }

    pub fn sphere_grid(&self, n: usize) -> Result<Arc<SphereGrid>> {
        SphereGrid::with_resolution(n, self.sphere)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub generator: Generator,
    pub seed: u64,
    pub sizes: Sizes,
}

impl InstanceSpec {
    pub fn new(generator: Generator, seed: u64, n: usize) -> Self {
        InstanceSpec {
            generator,
            seed,
            sizes: Sizes::default_for(n),
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ self.generator.stream())
    }
}

/// What a check needs from an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Need {
    Body,
    BodyPair,
    Domain,
    StarPolygon,
    Field,
    FieldBody,
    FieldPair,
}

/// A sum of bumps `amp (1 - |M (x - c)|^2)_+^power`, kept analytic so that
/// it can be mapped linearly and resampled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpMixture {
    pub dim: usize,
    pub bumps: Vec<AnalyticBump>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticBump {
    pub amp: f64,
    pub center: Vec<f64>,
    /// Row-major `M`.
    pub matrix: Vec<f64>,
    pub power: f64,
}

impl BumpMixture {
    pub fn value(&self, x: &[f64]) -> f64 {
        let n = self.dim;
        let mut total = 0.0;
        for b in &self.bumps {
            let mut s = 0.0;
            for i in 0..n {
                let y: f64 = (0..n).map(|j| b.matrix[i * n + j] * (x[j] - b.center[j])).sum();
                s += y * y;
            }
            if s < 1.0 {
                total += b.amp * (1.0 - s).powf(b.power);
            }
        }
        total
    }

    /// Axis-aligned bounding box of the support.
    pub fn support_box(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim;
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        for b in &self.bumps {
            let m = DMatrix::from_row_slice(n, n, &b.matrix);
            let e = m.try_inverse().expect("bump matrices are invertible");
            for i in 0..n {
                let w = (0..n).map(|j| e[(i, j)] * e[(i, j)]).sum::<f64>().sqrt();
                lo[i] = lo[i].min(b.center[i] - w);
                hi[i] = hi[i].max(b.center[i] + w);
            }
        }
        (lo, hi)
    }

    /// `x -> self(A^{-1} x)`.
    pub fn mapped(&self, a: &DMatrix<f64>) -> Result<Self> {
        let n = self.dim;
        let inv = a
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("matrix is singular".into()))?;
        let bumps = self
            .bumps
            .iter()
            .map(|b| {
                let m = DMatrix::from_row_slice(n, n, &b.matrix) * &inv;
                let c: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[(i, j)] * b.center[j]).sum()).collect();
                AnalyticBump {
                    amp: b.amp,
                    center: c,
                    matrix: m.transpose().as_slice().to_vec(),
                    power: b.power,
                }
            })
            .collect();
        Ok(BumpMixture { dim: n, bumps })
    }

    /// Samples the mixture on a box padded by [`BOX_PADDING`] around its support.
    pub fn sample(&self, nodes: usize) -> Result<GridField> {
        let (lo, hi) = self.support_box();
        let pad: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| BOX_PADDING / 2.0 * (b - a)).collect();
        let lo: Vec<f64> = lo.iter().zip(&pad).map(|(a, p)| a - p).collect();
        let hi: Vec<f64> = hi.iter().zip(&pad).map(|(b, p)| b + p).collect();
        GridField::from_fn(lo, hi, vec![nodes; self.dim], |x| self.value(x))
    }
}

/// A generated field together with what is needed to map it linearly.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldInstance {
    pub field: ScalarField,
    pub mixture: Option<BumpMixture>,
    pub nodes: usize,
}

impl FieldInstance {
    fn radial(f: RadialField) -> Self {
        FieldInstance {
            field: f.into(),
            mixture: None,
            nodes: 0,
        }
    }

    fn descriptor(&self) -> Value {
        match (&self.field, &self.mixture) {
            (_, Some(m)) => json!({"kind": "grid", "nodes": self.nodes, "mixture": m}),
            (ScalarField::Radial(r), None) => json!({
                "kind": "radial",
                "profile": r.profile(),
                "gauge": body_descriptor(r.gauge()),
            }),
            (ScalarField::Grid(g), None) => json!({"kind": "grid", "shape": g.shape()}),
        }
    }

    /// The field `x -> f(A^{-1} x)`.
    pub fn mapped(&self, a: &DMatrix<f64>) -> Result<Self> {
        match (&self.field, &self.mixture) {
            (_, Some(m)) => {
                let mm = m.mapped(a)?;
                Ok(FieldInstance {
                    field: mm.sample(self.nodes)?.into(),
                    mixture: Some(mm),
                    nodes: self.nodes,
                })
            }
            (ScalarField::Radial(r), None) => Ok(FieldInstance::radial(RadialField::new(
                r.profile().clone(),
                r.gauge().linear_image(a)?,
            )?)),
            (ScalarField::Grid(g), None) => Ok(FieldInstance {
                field: g.linear_image(a)?.into(),
                mixture: None,
                nodes: self.nodes,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Body(ConvexBody),
    BodyPair(ConvexBody, ConvexBody),
    Domain(CompactDomain),
    /// A counter-clockwise star-shaped polygon and a convex body.
    StarPolygon(Vec<[f64; 2]>, ConvexBody),
    Field(FieldInstance),
    FieldBody(FieldInstance, ConvexBody),
    FieldPair(FieldInstance, FieldInstance),
}

pub fn body_descriptor(k: &ConvexBody) -> Value {
    crate::io::body_to_json(k)
}

impl Instance {
    pub fn descriptor(&self) -> Value {
        match self {
            Instance::Body(k) => json!({"body": body_descriptor(k)}),
            Instance::BodyPair(k, l) => json!({"k": body_descriptor(k), "l": body_descriptor(l)}),
            Instance::Domain(d) => json!({"domain": {"grid_n": d.grid().resolution(), "intervals": d.rays().iter().map(|r| r.len()).max()}}),
            Instance::StarPolygon(m, k) => json!({"star_polygon": m, "k": body_descriptor(k)}),
            Instance::Field(g) => json!({"g": g.descriptor()}),
            Instance::FieldBody(f, k) => json!({"f": f.descriptor(), "k": body_descriptor(k)}),
            Instance::FieldPair(f, g) => json!({"f": f.descriptor(), "g": g.descriptor()}),
        }
    }

    /// The instance mapped by `A`: bodies to `A K`, fields to `f o A^{-1}`.
    pub fn mapped(&self, a: &DMatrix<f64>) -> Result<Self> {
        Ok(match self {
            Instance::Body(k) => Instance::Body(k.linear_image(a)?),
            Instance::BodyPair(k, l) => Instance::BodyPair(k.linear_image(a)?, l.linear_image(a)?),
            Instance::Field(g) => Instance::Field(g.mapped(a)?),
            Instance::FieldBody(f, k) => Instance::FieldBody(f.mapped(a)?, k.linear_image(a)?),
            Instance::FieldPair(f, g) => Instance::FieldPair(f.mapped(a)?, g.mapped(a)?),
            _ => return Err(Error::Unsupported("linear maps of domains are not implemented".into())),
        })
    }
}

fn rotation(t: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()])
}

/// A random planar linear map with determinant one.
pub fn random_sl(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    loop {
        let m = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } + rng.random_range(-0.6..0.6));
        let d: f64 = m.determinant();
        if d > 0.2 {
            return m / d.powf(1.0 / n as f64);
        }
    }
}

/// 5 to 12 vertices on a random ellipse, radially perturbed by at most 20%,
/// recentred at the centroid.
pub fn random_polygon(rng: &mut impl Rng) -> Result<ConvexBody> {
    loop {
        let m = rng.random_range(5..=12);
        let (a, b) = (rng.random_range(0.5..1.5), rng.random_range(0.5..1.5));
        let rot = rng.random_range(0.0..PI);
        let mut angles: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        angles.sort_by(f64::total_cmp);
        let pts: Vec<[f64; 2]> = angles
            .iter()
            .map(|t| {
                let s = 1.0 + rng.random_range(-0.2..0.2);
                let (x, y) = (s * a * t.cos(), s * b * t.sin());
                [x * rot.cos() - y * rot.sin(), x * rot.sin() + y * rot.cos()]
            })
            .collect();
        let hull = crate::geometry::polygon::convex_hull(&pts);
        if hull.len() < 3 {
            continue;
        }
        let c = crate::geometry::polygon::centroid(&hull);
        let shifted: Vec<[f64; 2]> = hull.iter().map(|v| [v[0] - c[0], v[1] - c[1]]).collect();
        if let Ok(k) = ConvexBody::polygon(&shifted) {
            if clearance_ok(&k) {
                return Ok(k);
            }
        }
    }
}

/// The origin keeps a distance of at least `1e-3 * diameter` from the boundary.
fn clearance_ok(k: &ConvexBody) -> bool {
    if let ConvexBody::Polytope(crate::geometry::Polytope::Planar(p)) = k {
        let v = p.vertices();
        let mut diam: f64 = 0.0;
        for a in v {
            for b in v {
                diam = diam.max(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
            }
        }
        (0..p.edge_count()).all(|i| p.edge(i).1 >= 1e-3 * diam)
    } else {
        true
    }
}

/// An origin-symmetric polygon with 2 to 6 vertex pairs.
pub fn random_symmetric_polygon(rng: &mut impl Rng) -> Result<ConvexBody> {
    loop {
        let m = rng.random_range(2..=6);
        let mut pts = Vec::with_capacity(2 * m);
        for _ in 0..m {
            let t = rng.random_range(0.0..PI);
            let s = rng.random_range(0.5..1.5);
            pts.push([s * t.cos(), s * t.sin()]);
            pts.push([-s * t.cos(), -s * t.sin()]);
        }
        if let Ok(k) = ConvexBody::polygon(&pts) {
            if clearance_ok(&k) && k.volume() > 0.2 {
                return Ok(k);
            }
        }
    }
}

/// A centred ellipse with semi-axes in `[0.5, 1.5]` and a random orientation.
pub fn random_ellipse(rng: &mut impl Rng) -> Result<ConvexBody> {
    let d = DMatrix::from_diagonal(&nalgebra::dvector![rng.random_range(0.5..1.5), rng.random_range(0.5..1.5)]);
    ConvexBody::ellipsoid(rotation(rng.random_range(0.0..PI)) * d)
}

/// A smooth positive function of the angle: `mean (1 + sum_k c_k cos(k t + phi_k))`.
fn smooth_angle_fn(rng: &mut impl Rng, mean: f64, amp: f64) -> impl Fn(f64) -> f64 {
    let terms: Vec<(f64, f64, f64)> = (1..=3)
        .map(|k| (k as f64, rng.random_range(-amp..amp) / k as f64, rng.random_range(0.0..2.0 * PI)))
        .collect();
    move |t| mean * (1.0 + terms.iter().map(|(k, c, ph)| c * (k * t + ph).cos()).sum::<f64>())
}

/// 1 to 3 radial intervals per ray, with smooth widths and gaps.
pub fn random_domain(rng: &mut impl Rng, grid: Arc<SphereGrid>) -> Result<CompactDomain> {
    if grid.dim() != 2 {
        return Err(Error::Unsupported("random domains are planar".into()));
    }
    let count = rng.random_range(1..=3);
    let start: f64 = if rng.random_bool(0.5) { 0.0 } else { rng.random_range(0.1..0.4) };
    let start_fn = smooth_angle_fn(rng, start.max(1e-9), 0.3);
    let widths: Vec<_> = (0..count)
        .map(|_| {
            let mean = rng.random_range(0.2..0.6);
            smooth_angle_fn(rng, mean, 0.4)
        })
        .collect();
    let gaps: Vec<_> = (0..count)
        .map(|_| {
            let mean = rng.random_range(0.1..0.4);
            smooth_angle_fn(rng, mean, 0.4)
        })
        .collect();
    let rays = (0..grid.len())
        .map(|k| {
            let t = grid.angle(k);
            let mut a = if start == 0.0 { 0.0 } else { start_fn(t) };
            let mut out = Vec::with_capacity(count);
            for i in 0..count {
                let b = a + widths[i](t);
                out.push((a, b));
                a = b + gaps[i](t);
            }
            out
        })
        .collect();
    CompactDomain::new(grid, rays)
}

/// A star-shaped polygon with 6 to 16 vertices at sorted angles and radii in `[0.3, 1.2]`.
pub fn random_star_polygon(rng: &mut impl Rng) -> Vec<[f64; 2]> {
    let m = rng.random_range(6..=16);
    let mut angles: Vec<f64> = (0..m)
        .map(|i| 2.0 * PI * (i as f64 + rng.random_range(0.1..0.9)) / m as f64)
        .collect();
    angles.sort_by(f64::total_cmp);
    angles
        .iter()
        .map(|t| {
            let r = rng.random_range(0.3..1.2);
            [r * t.cos(), r * t.sin()]
        })
        .collect()
}

/// 2 to 4 bumps with random centres, ellipsoidal shapes, heights and powers.
pub fn random_mixture(rng: &mut impl Rng, n: usize) -> BumpMixture {
    let count = rng.random_range(2..=4);
    let bumps = (0..count)
        .map(|_| {
            let center: Vec<f64> = (0..n).map(|_| rng.random_range(-0.3..0.3)).collect();
            let e = if n == 2 {
                rotation(rng.random_range(0.0..PI))
                    * DMatrix::from_diagonal(&nalgebra::dvector![rng.random_range(0.4..1.0), rng.random_range(0.4..1.0)])
            } else {
                DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| rng.random_range(0.4..1.0)))
            };
            let m = e.try_inverse().expect("diagonal entries are positive");
            AnalyticBump {
                amp: rng.random_range(0.3..1.0),
                center,
                matrix: m.transpose().as_slice().to_vec(),
                power: rng.random_range(2.0..4.0),
            }
        })
        .collect();
    BumpMixture { dim: n, bumps }
}

/// A nonincreasing radial profile made of 2 to 4 concentric bumps.
pub fn random_bumps_profile(rng: &mut impl Rng) -> Profile {
    let count = rng.random_range(2..=4);
    Profile::Bumps {
        bumps: (0..count)
            .map(|_| Bump {
                amp: rng.random_range(0.3..1.0),
                radius: rng.random_range(0.4..1.0),
                power: rng.random_range(2.0..4.0),
            })
            .collect(),
    }
}

fn grid_field(rng: &mut impl Rng, spec: &InstanceSpec, n: usize) -> Result<FieldInstance> {
    let m = random_mixture(rng, n);
    Ok(FieldInstance {
        field: m.sample(spec.sizes.field_grid)?.into(),
        mixture: Some(m),
        nodes: spec.sizes.field_grid,
    })
}

fn radial_field(rng: &mut impl Rng) -> Result<FieldInstance> {
    let profile = random_bumps_profile(rng);
    Ok(FieldInstance::radial(RadialField::new(profile, random_ellipse(rng)?)?))
}

/// Builds the instance a check needs from the given generator.
pub fn random_instance(spec: &InstanceSpec, need: Need, params: &ParamSet) -> Result<Instance> {
    let mut rng = spec.rng();
    let rng = &mut rng;
    let n = params.n;
    let planar = |what: &str| -> Result<()> {
        if n != 2 {
            return Err(Error::Unsupported(format!("{what} instances are planar")));
        }
        Ok(())
    };
    let incompatible = || invalid(format!("generator {} cannot produce this instance", spec.generator));
    match (spec.generator, need) {
        (Generator::RandomPolygon, Need::Body) => {
            planar("polygon")?;
            Ok(Instance::Body(random_polygon(rng)?))
        }
        (Generator::RandomPolygon, Need::BodyPair) => {
            planar("polygon")?;
            Ok(Instance::BodyPair(random_polygon(rng)?, random_polygon(rng)?))
        }
        (Generator::RandomEllipse, Need::Body) => {
            planar("ellipse")?;
            Ok(Instance::Body(random_ellipse(rng)?))
        }
        (Generator::RandomEllipse, Need::BodyPair) => {
            planar("ellipse")?;
            Ok(Instance::BodyPair(random_ellipse(rng)?, random_ellipse(rng)?))
        }
        (Generator::RandomDomain, Need::Domain) => {
            planar("domain")?;
            Ok(Instance::Domain(random_domain(rng, spec.sizes.sphere_grid(2)?)?))
        }
        (Generator::StarPolygon, Need::StarPolygon) => {
            planar("star polygon")?;
            let m = random_star_polygon(rng);
            Ok(Instance::StarPolygon(m, random_polygon(rng)?))
        }
        (Generator::RandomGridField, Need::Field) => Ok(Instance::Field(grid_field(rng, spec, n)?)),
        (Generator::RandomGridField, Need::FieldBody) => {
            planar("field and body")?;
            let f = grid_field(rng, spec, n)?;
            Ok(Instance::FieldBody(f, random_symmetric_polygon(rng)?))
        }
        (Generator::RandomGridField, Need::FieldPair) => {
            let f = grid_field(rng, spec, n)?;
            let g = grid_field(rng, spec, n)?;
            Ok(Instance::FieldPair(f, g))
        }
        (Generator::RadialProfileField, Need::Field) => {
            planar("radial field")?;
            Ok(Instance::Field(radial_field(rng)?))
        }
        (Generator::RadialProfileField, Need::FieldBody) => {
            planar("radial field")?;
            let f = radial_field(rng)?;
            Ok(Instance::FieldBody(f, random_symmetric_polygon(rng)?))
        }
        (Generator::RadialProfileField, Need::FieldPair) => {
            planar("radial field")?;
            let f = radial_field(rng)?;
            let g = radial_field(rng)?;
            Ok(Instance::FieldPair(f, g))
        }
        (Generator::ExtremalPair, Need::Field) => {
            planar("extremal")?;
            let e = random_ellipse(rng)?;
            Ok(Instance::Field(FieldInstance::radial(RadialField::new(
                cut(Profile::layer_g(params.p, params.lambda), &spec.sizes),
                e,
            )?)))
        }
        (Generator::ExtremalPair, Need::FieldBody) => {
            planar("extremal")?;
            let k = random_symmetric_polygon(rng)?;
            Ok(Instance::FieldBody(
                FieldInstance::radial(RadialField::new(cut(sobolev_or_cone(params), &spec.sizes), k.clone())?),
                k,
            ))
        }
        (Generator::ExtremalPair, Need::FieldPair) => {
            planar("extremal")?;
            let e = random_ellipse(rng)?;
            Ok(Instance::FieldPair(
                FieldInstance::radial(RadialField::new(cut(sobolev_or_cone(params), &spec.sizes), e.clone())?),
                FieldInstance::radial(RadialField::new(cut(Profile::layer_g(params.p, params.lambda), &spec.sizes), e)?),
            ))
        }
        _ => incompatible(),
    }
}

/// `F_r` for `r > 1`; the cone `(1 - t)_+` stands in at `r = 1`, where no extremal is defined.
pub fn sobolev_or_cone(params: &ParamSet) -> Profile {
    if params.r > 1.0 {
        Profile::sobolev(params.n, params.r)
    } else {
        Profile::Cone
    }
}

fn cut(profile: Profile, sizes: &Sizes) -> Profile {
    match sizes.truncation {
        Some(r) => profile.truncated(r),
        None => profile,
    }
}

/// Rng for auxiliary random choices tied to a seed (for example the map of an invariance check).
pub fn aux_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0xD1B5_4A32_D192_ED03) ^ stream)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ParamSet {
        ParamSet::new(2, 2.0, 1.5, 2.0).unwrap()
    }

    #[test]
    fn same_seed_same_instance() {
        for g in Generator::ALL {
            let need = match g {
                Generator::RandomPolygon | Generator::RandomEllipse => Need::BodyPair,
                Generator::RandomDomain => Need::Domain,
                Generator::StarPolygon => Need::StarPolygon,
                _ => Need::FieldPair,
            };
            let mut spec = InstanceSpec::new(g, 17, 2);
            spec.sizes.field_grid = 64;
            let a = random_instance(&spec, need, &params()).unwrap();
            let b = random_instance(&spec, need, &params()).unwrap();
            assert_eq!(a, b, "{g}");
        }
    }

    #[test]
    fn polygons_have_clearance() {
        let mut rng = aux_rng(3, 0);
        for _ in 0..200 {
            let k = random_polygon(&mut rng).unwrap();
            assert!(clearance_ok(&k));
        }
    }

    #[test]
    fn generated_fields_are_nonnegative() {
        let mut rng = aux_rng(5, 0);
        for _ in 0..10 {
            let m = random_mixture(&mut rng, 2);
            let g = m.sample(64).unwrap();
            assert!(g.min_value() >= 0.0);
        }
    }

    #[test]
    fn mapped_mixture_is_the_composition() {
        let mut rng = aux_rng(9, 0);
        let m = random_mixture(&mut rng, 2);
        let a = random_sl(&mut rng, 2);
        let mm = m.mapped(&a).unwrap();
        let x = [0.1, -0.2];
        let ax: Vec<f64> = (0..2).map(|i| (0..2).map(|j| a[(i, j)] * x[j]).sum()).collect();
        approx::assert_relative_eq!(mm.value(&ax), m.value(&x), max_relative = 1e-12);
        approx::assert_relative_eq!(a.determinant(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn incompatible_requests_are_rejected() {
        let spec = InstanceSpec::new(Generator::RandomDomain, 1, 2);
        assert!(random_instance(&spec, Need::FieldPair, &params()).is_err());
    }
}
