//! One evaluation per inequality: both sides, the deficit and the diagnostics.

use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::{json, Value};

use super::instance::{random_instance, FieldInstance, Generator, Instance, InstanceSpec, Need, Sizes};
use super::report::DeficitReport;
use crate::error::{invalid, Error, Result};
use crate::fields::{Profile, RadialField, ScalarField};
use crate::geometry::angular::integrate_directions;
use crate::geometry::sphere::dot;
use crate::geometry::ConvexBody;
use crate::mixed::{
    dual_mixed_volume, functional_mixed_volume, mixed_volume_primary, mixed_volume_r, polar_projection_body_of_function,
    polygon_area, polygon_domain_mixed_volume, surface_atoms,
};
use crate::moment::{ball_moment, centroid_body, domain_centroid_body, field_moment_body, moment_body, radial_factor};
use crate::params::{c_np, layer_constant, ConstantBundle, ParamSet};

/// Set-level slack.
pub const SLACK_SET: f64 = 1e-3;
/// Slack of set-level checks that go through a sampled moment body.
pub const SLACK_SAMPLED: f64 = 1e-2;
/// Function-level slack.
pub const SLACK_FUNCTION: f64 = 1e-2;
/// Slack on instances built from the extremal profiles.
pub const SLACK_EXTREMAL: f64 = 3e-2;
/// Relative slack of the nodewise bathtub comparison and of consecutive chain links.
pub const SLACK_EXACT: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    Bp,
    BpDomain,
    Bathtub,
    Mixed,
    Pp,
    Bmvm,
    T1vmv,
    Taux,
    Lnf,
    Lvnp,
    Main,
    Chain,
    Remark,
}

impl CheckId {
    pub const ALL: [CheckId; 13] = [
        CheckId::Bp,
        CheckId::BpDomain,
        CheckId::Bathtub,
        CheckId::Mixed,
        CheckId::Pp,
        CheckId::Bmvm,
        CheckId::T1vmv,
        CheckId::Taux,
        CheckId::Lnf,
        CheckId::Lvnp,
        CheckId::Main,
        CheckId::Chain,
        CheckId::Remark,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Bp => "bp",
            CheckId::BpDomain => "bp-domain",
            CheckId::Bathtub => "bathtub",
            CheckId::Mixed => "mixed",
            CheckId::Pp => "pp",
            CheckId::Bmvm => "bmvm",
            CheckId::T1vmv => "t1vmv",
            CheckId::Taux => "taux",
            CheckId::Lnf => "lnf",
            CheckId::Lvnp => "lvnp",
            CheckId::Main => "main",
            CheckId::Chain => "chain",
            CheckId::Remark => "remark",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown inequality id '{s}'")))
    }

    pub fn need(self) -> Need {
        match self {
            CheckId::Bp => Need::Body,
            CheckId::BpDomain | CheckId::Bathtub => Need::Domain,
            CheckId::Mixed | CheckId::Pp => Need::BodyPair,
            CheckId::Bmvm => Need::StarPolygon,
            CheckId::T1vmv => Need::FieldBody,
            CheckId::Taux | CheckId::Lnf | CheckId::Lvnp => Need::Field,
            CheckId::Main | CheckId::Chain | CheckId::Remark => Need::FieldPair,
        }
    }

    pub fn default_generator(self) -> Generator {
        match self {
            CheckId::Bp => Generator::RandomEllipse,
            CheckId::Mixed | CheckId::Pp => Generator::RandomPolygon,
            CheckId::BpDomain | CheckId::Bathtub => Generator::RandomDomain,
            CheckId::Bmvm => Generator::StarPolygon,
            CheckId::T1vmv | CheckId::Chain | CheckId::Remark => Generator::RadialProfileField,
            CheckId::Taux | CheckId::Lnf | CheckId::Lvnp | CheckId::Main => Generator::RandomGridField,
        }
    }

    /// Slack of the one-sided test `deficit >= 1 - slack`.
    pub fn slack(self, generator: Option<Generator>) -> f64 {
        if generator == Some(Generator::ExtremalPair) {
            return SLACK_EXTREMAL;
        }
        match self {
            CheckId::Bp | CheckId::BpDomain | CheckId::Mixed | CheckId::Remark => SLACK_SET,
            CheckId::Pp | CheckId::Bmvm => SLACK_SAMPLED,
            CheckId::Bathtub => SLACK_EXACT,
            _ => SLACK_FUNCTION,
        }
    }

    /// The two-sided band expected at an equality case, if the instance is one.
    pub fn band(self, generator: Option<Generator>, params: &ParamSet) -> Option<(f64, f64)> {
        match (self, generator) {
            (CheckId::Remark, _) => Some((1.0 - SLACK_SET, 1.0 + SLACK_SET)),
            (CheckId::Bp, Some(Generator::RandomEllipse)) => Some((1.0 - SLACK_SET, 1.0 + SLACK_SET)),
            (CheckId::T1vmv, Some(Generator::ExtremalPair)) if params.r > 1.0 => Some((0.99, 1.02)),
            (CheckId::Taux | CheckId::Lvnp, Some(Generator::ExtremalPair)) => Some((0.97, 1.03)),
            (CheckId::Main, Some(Generator::ExtremalPair)) if params.r > 1.0 => Some((0.98, 1.05)),
            _ => None,
        }
    }
}

impl std::fmt::Display for CheckId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Both sides of a check with its diagnostics.
#[derive(Clone, Debug, Default)]
pub struct Evaluation {
    pub lhs: f64,
    pub rhs: f64,
    pub details: BTreeMap<String, Value>,
    /// Additional pass conditions (for example the ordering of chain links).
    pub extra_ok: bool,
}

impl Evaluation {
    fn new(lhs: f64, rhs: f64) -> Self {
        Evaluation {
            lhs,
            rhs,
            details: BTreeMap::new(),
            extra_ok: true,
        }
    }

    fn with(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), v.into());
        self
    }
}

/// Generates the instance of `spec` and checks `id` on it.
pub fn check_inequality(id: CheckId, spec: &InstanceSpec, params: &ParamSet) -> Result<DeficitReport> {
    let start = Instant::now();
    let inst = random_instance(spec, id.need(), params)?;
    let mut report = check_instance(id, &inst, params, &spec.sizes, Some(spec.generator))?;
    report.seed = spec.seed;
    report.time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Checks `id` on a given instance. `generator` selects the slack and band.
pub fn check_instance(
    id: CheckId,
    inst: &Instance,
    params: &ParamSet,
    sizes: &Sizes,
    generator: Option<Generator>,
) -> Result<DeficitReport> {
    let start = Instant::now();
    let ev = evaluate(id, inst, params, sizes)?;
    if !(ev.lhs.is_finite() && ev.rhs.is_finite() && ev.rhs > 0.0) {
        return Err(Error::NumericFailure(format!(
            "{id}: non-finite or nonpositive sides (lhs {}, rhs {})",
            ev.lhs, ev.rhs
        )));
    }
    let deficit = ev.lhs / ev.rhs;
    let slack = id.slack(generator);
    let band = id.band(generator, params);
    let band_ok = band.is_none_or(|(lo, hi)| deficit >= lo && deficit <= hi);
    let mut resolutions = BTreeMap::new();
    resolutions.insert("sphere".to_string(), sizes.sphere);
    resolutions.insert("field_grid".to_string(), sizes.field_grid);
    Ok(DeficitReport {
        id: id.name().to_string(),
        seed: 0,
        generator: generator.map_or("custom".to_string(), |g| g.name().to_string()),
        params: *params,
        instance: inst.descriptor(),
        lhs: ev.lhs,
        rhs: ev.rhs,
        deficit,
        slack,
        pass: deficit >= 1.0 - slack && ev.extra_ok,
        band,
        band_ok,
        details: ev.details,
        resolutions,
        time_ms: start.elapsed().as_millis() as u64,
    })
}

fn wrong_instance<T>(id: CheckId) -> Result<T> {
    invalid(format!("instance is not compatible with '{id}'"))
}

fn evaluate(id: CheckId, inst: &Instance, params: &ParamSet, sizes: &Sizes) -> Result<Evaluation> {
    let n = params.nf();
    let (p, r) = (params.p, params.r);
    match (id, inst) {
        (CheckId::Bp, Instance::Body(k)) => {
            let g = centroid_body(k, p, sizes.sphere_grid(params.n)?)?;
            Ok(Evaluation::new(g.volume(), k.volume()))
        }
        (CheckId::BpDomain, Instance::Domain(m)) => {
            let g = domain_centroid_body(m, p)?;
            Ok(Evaluation::new(g.volume(), m.volume()))
        }
        (CheckId::Bathtub, Instance::Domain(m)) => {
            let sm = m.sm_symmetrize();
            let smd = sm.to_domain()?;
            let grid = m.grid();
            let mut worst = f64::INFINITY;
            let mut worst_node = 0;
            for (i, xi) in grid.nodes().enumerate() {
                let ratio = m.moment(p, xi) / smd.moment(p, xi);
                if ratio < worst {
                    worst = ratio;
                    worst_node = i;
                }
            }
            Ok(Evaluation::new(worst, 1.0)
                .with("worst_node", worst_node)
                .with("volume", m.volume())
                .with("sm_volume", sm.volume()))
        }
        (CheckId::Mixed, Instance::BodyPair(k, l)) => {
            let v = mixed_volume_r(k, l, r)?;
            let rhs = k.volume().powf((n - r) / n) * l.volume().powf(r / n);
            Ok(Evaluation::new(v.value, rhs)
                .with("path", v.path)
                .with("check", v.check)
                .with("check_path", v.check_path)
                .with("cross_check_rel_diff", v.rel_diff))
        }
        (CheckId::Pp, Instance::BodyPair(k, l)) => {
            let mp = moment_body(k, p, sizes.sphere_grid(params.n)?)?.to_body();
            let lhs = mixed_volume_primary(l, &mp, r)?;
            let rhs = c_np(params).powf(r / p) * l.volume().powf((n - r) / n) * k.volume().powf((n + p) * r / (n * p));
            Ok(Evaluation::new(lhs, rhs))
        }
        (CheckId::Bmvm, Instance::StarPolygon(m, k)) => {
            let v = polygon_domain_mixed_volume(m, k)?;
            let area = polygon_area(m);
            Ok(Evaluation::new(v.powf(n), area.powf(n - 1.0) * k.volume()).with("v1", v).with("area", area))
        }
        (CheckId::T1vmv, Instance::FieldBody(f, k)) => {
            let c1 = ConstantBundle::compute(params)?.c1;
            let lhs = functional_mixed_volume(&f.field, k, r)?;
            let norm = f.field.lq_norm(params.q)?;
            let rhs = c1.powf(r) * norm.powf(r) * k.volume().powf(r / n);
            Ok(Evaluation::new(lhs, rhs).with("c1", c1).with("lq_norm", norm))
        }
        (CheckId::Taux, Instance::Field(g)) => {
            let (mp, path) = field_moment_pg(&g.field, p, sizes)?;
            let lhs = mp.volume().powf(p / n);
            let (bound, a) = layer_bound(&g.field, params)?;
            Ok(Evaluation::new(lhs, c_np(params) * bound)
                .with("a", a)
                .with("c_np", c_np(params))
                .with("moment_body_path", path))
        }
        (CheckId::Lnf, Instance::Field(f)) => {
            let lhs = f.field.layer_integral((n - 1.0) / n)?;
            let rhs = f.field.lq_norm(n / (n - 1.0))?;
            Ok(Evaluation::new(lhs, rhs))
        }
        (CheckId::Lvnp, Instance::Field(g)) => {
            let lhs = g.field.layer_integral((n + p) / n)?;
            let (bound, a) = layer_bound(&g.field, params)?;
            Ok(Evaluation::new(lhs, bound).with("a", a))
        }
        (CheckId::Main, Instance::FieldPair(f, g)) => {
            let (mp, path) = field_moment_pg(&g.field, p, sizes)?;
            let lhs = n * functional_mixed_volume(&f.field, &mp, r)?;
            let bundle = ConstantBundle::compute(params)?;
            let rhs = bundle.c_main * main_norms(&f.field, &g.field, params)?;
            Ok(Evaluation::new(lhs, rhs)
                .with("C_main", bundle.c_main)
                .with("moment_body_path", path))
        }
        (CheckId::Chain, Instance::FieldPair(f, g)) => chain(f, g, params, sizes),
        (CheckId::Remark, Instance::FieldPair(f, g)) => remark(&f.field, &g.field, params, sizes),
        _ => wrong_instance(id),
    }
}

/// `a ||g||_1^{e1} ||g||_lambda^{e2}` and `a`.
fn layer_bound(g: &ScalarField, params: &ParamSet) -> Result<(f64, f64)> {
    let a = layer_constant(params)?.a;
    let l1 = g.lq_norm(1.0)?;
    let ll = g.lq_norm(params.lambda)?;
    Ok((a * l1.powf(params.layer_exp_l1()) * ll.powf(params.layer_exp_llambda()), a))
}

/// `||f||_q^r ||g||_1^{e1} ||g||_lambda^{e2}` with the exponents of the main inequality.
fn main_norms(f: &ScalarField, g: &ScalarField, params: &ParamSet) -> Result<f64> {
    let fq = f.lq_norm(params.q)?;
    let l1 = g.lq_norm(1.0)?;
    let ll = g.lq_norm(params.lambda)?;
    Ok(fq.powf(params.r) * l1.powf(params.main_exp_l1()) * ll.powf(params.main_exp_llambda()))
}

/// `M_p g`: exact for a radial profile over an ellipsoid gauge, sampled otherwise.
pub fn field_moment_pg(g: &ScalarField, p: f64, sizes: &Sizes) -> Result<(ConvexBody, &'static str)> {
    if let ScalarField::Radial(rf) = g {
        if let ConvexBody::Ellipsoid(e) = rf.gauge() {
            let n = rf.dim();
            let factor = radial_factor(rf.profile(), n, p)?;
            let scale = factor * (e.matrix().determinant().abs() * ball_moment(n, p)?).powf(1.0 / p);
            return Ok((ConvexBody::ellipsoid(e.matrix() * scale)?, "ellipsoid"));
        }
    }
    let mb = field_moment_body(g, p, sizes.sphere_grid(g.dim())?)?;
    Ok((mb.to_body(), "sampled"))
}

fn ordered(links: &[f64]) -> bool {
    links.windows(2).all(|w| w[0] >= w[1] * (1.0 - SLACK_EXACT))
}

/// The chain from `V_r(f, M_p g)` to the right side of the main inequality,
/// divided by `n`. Radial pairs with `r = 1` go through the level sets of both
/// fields; every other pair uses the Sobolev and layer-cake steps.
fn chain(f: &FieldInstance, g: &FieldInstance, params: &ParamSet, sizes: &Sizes) -> Result<Evaluation> {
    let n = params.nf();
    let (p, r) = (params.p, params.r);
    let (mp, path) = field_moment_pg(&g.field, p, sizes)?;
    let l0 = functional_mixed_volume(&f.field, &mp, r)?;
    let bundle = ConstantBundle::compute(params)?;
    let final_link = bundle.c_main / n * main_norms(&f.field, &g.field, params)?;
    let (names, links): (Vec<&str>, Vec<f64>) = match (&f.field, &g.field) {
        (ScalarField::Radial(fr), ScalarField::Radial(gr)) if r == 1.0 => {
            let (k, e) = (fr.gauge(), gr.gauge());
            let a_f = fr.profile().level_power_integral(n - 1.0)?;
            let factor = radial_factor(gr.profile(), params.n, p)?;
            let b_g = factor.powf(p);
            let indicator: ScalarField = RadialField::new(Profile::Indicator, e.clone())?.into();
            let (mpe, _) = field_moment_pg(&indicator, p, sizes)?;
            let l1 = a_f * mixed_volume_primary(k, &mp, 1.0)?;
            let l2 = a_f * mixed_volume_primary(k, &mpe, 1.0)? * factor;
            let vk = k.volume().powf((n - 1.0) / n);
            let l3 = vk * a_f * mpe.volume().powf(1.0 / n) * factor;
            let l4 = c_np(params).powf(1.0 / p) * vk * a_f * (e.volume().powf((n + p) / n) * b_g).powf(1.0 / p);
            (
                vec!["V_1(f,M_pg)", "coarea", "layer_sum", "minkowski", "busemann_petty", "final"],
                vec![l0, l1, l2, l3, l4, final_link],
            )
        }
        _ => {
            let c1r = bundle.c1.powf(r);
            let fq = f.field.lq_norm(params.q)?.powf(r);
            let l1 = c1r * fq * mp.volume().powf(r / n);
            (vec!["V_r(f,M_pg)", "sobolev", "final"], vec![l0, l1, final_link])
        }
    };
    let ok = ordered(&links);
    let detail: Vec<Value> = names.iter().zip(&links).map(|(nm, v)| json!({"link": nm, "value": v})).collect();
    let mut ev = Evaluation::new(l0, final_link)
        .with("links", detail)
        .with("links_ordered", ok)
        .with("moment_body_path", path);
    ev.extra_ok = ok;
    Ok(ev)
}

/// The two orders of `int int g(y) |<grad f(x), y>|^p dy dx`, and the constants
/// relating the sides of the function-level dual mixed volume identity.
fn remark(f: &ScalarField, g: &ScalarField, params: &ParamSet, sizes: &Sizes) -> Result<Evaluation> {
    let n = params.nf();
    let p = params.p;
    let grid = sizes.sphere_grid(params.n)?;
    let (d1, d2) = match (f, g) {
        (ScalarField::Radial(fr), ScalarField::Radial(gr)) => {
            let (neg, pos) = fr.gradient_weights(p)?;
            let atoms = surface_atoms(fr.gauge(), p)?;
            let moments = atoms.normals.iter().map(|u| gr.moment_pow(u, p)).collect::<Result<Vec<f64>>>()?;
            let d1 = (neg + pos) * atoms.weights.iter().zip(&moments).map(|(w, m)| w * m).sum::<f64>();
            let pi_pow = |xi: &[f64]| (neg + pos) * atoms.integrate(|u| dot(u, xi).abs().powf(p));
            let mut kinks = Vec::new();
            if params.n == 2 {
                for u in &atoms.normals {
                    let t = u[1].atan2(u[0]);
                    kinks.push(t + std::f64::consts::FRAC_PI_2);
                    kinks.push(t - std::f64::consts::FRAC_PI_2);
                }
            }
            let e = gr.gauge();
            let m = gr.profile().moment(n + p)?;
            let ang = integrate_directions(params.n, &[e], &kinks, |u| e.radial(u).powf(n + p) * pi_pow(u))?;
            (d1, m * ang)
        }
        _ => {
            let (mp, _) = field_moment_pg(g, p, sizes)?;
            let d1 = n * functional_mixed_volume(f, &mp, p)?;
            let pi = ConvexBody::Sampled(polar_projection_body_of_function(f, p, grid.clone())?);
            let d2 = match g {
                ScalarField::Grid(gg) => {
                    if gg.min_value() < 0.0 {
                        return invalid("the remark needs a nonnegative g");
                    }
                    let vals = gg.values();
                    let s: f64 = (0..vals.len())
                        .filter(|&k| vals[k] != 0.0)
                        .map(|k| vals[k] * pi.support(&gg.node_position(k)).powf(p))
                        .sum();
                    s * gg.cell_volume()
                }
                ScalarField::Radial(gr) => {
                    let e = gr.gauge();
                    let m = gr.profile().moment(n + p)?;
                    m * integrate_directions(params.n, &[e, &pi], &[], |u| e.radial(u).powf(n + p) * pi.support(u).powf(p))?
                }
            };
            (d1, d2)
        }
    };
    let pi = ConvexBody::Sampled(polar_projection_body_of_function(f, p, grid)?);
    let literal = dual_mixed_volume(g, &pi, p)?;
    Ok(Evaluation::new(d1, d2)
        .with("V_p(f,M_pg)", d1 / n)
        .with("polar_ratio", d1 / n / d2)
        .with("literal_ratio", d1 / n / literal))
}
