//! Acceptance run: one line per criterion with its verdict and runtime.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lpcentroid::fields::{Bump, GridField, Profile, RadialField, ScalarField};
use lpcentroid::geometry::angular::{circle_rule, radial_kinks};
use lpcentroid::geometry::{ConvexBody, SphereGrid};
use lpcentroid::mixed::{
    functional_mixed_volume, level_mixed_volume, mixed_volume_fd, mixed_volume_primary, mixed_volume_r,
};
use lpcentroid::moment::{body_moment_pow, centroid_body, moment_body, radial_factor};
use lpcentroid::params::{c_np, layer_constant, layer_constant_oracle, ParamSet};
use lpcentroid::quadrature::QuadRule;
use lpcentroid::special::omega;
use lpcentroid::verify::instance::{aux_rng, random_polygon, random_sl};
use lpcentroid::verify::{
    check_inequality, check_instance, random_instance, run_batch, CheckId, DeficitReport, Generator, InstanceSpec, Sizes,
};

/// Outcomes of the individual assertions of one criterion.
#[derive(Default)]
struct Tally {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn reports(&mut self, label: &str, results: Vec<lpcentroid::Result<DeficitReport>>) -> Vec<DeficitReport> {
        let mut out = Vec::new();
        for r in results {
            match r {
                Ok(rep) => out.push(rep),
                Err(e) => self.failures.push(format!("{label}: {e}")),
            }
        }
        out
    }

    /// Records the one-sided test of every report and the minimum deficit.
    fn one_sided(&mut self, label: &str, reps: &[DeficitReport], slack: f64) {
        let mut min = f64::INFINITY;
        for r in reps {
            min = min.min(r.deficit);
            self.check(r.deficit >= 1.0 - slack && r.pass, format!("{label} seed {}: deficit {:.6}", r.seed, r.deficit));
        }
        self.note(format!("{label}: {} cases, min deficit {min:.6}", reps.len()));
    }

    fn band(&mut self, label: &str, reps: &[DeficitReport], lo: f64, hi: f64) {
        let mut worst: f64 = 0.0;
        for r in reps {
            worst = worst.max((r.deficit - 1.0).abs());
            self.check(r.deficit >= lo && r.deficit <= hi, format!("{label} seed {}: deficit {:.6} outside [{lo}, {hi}]", r.seed, r.deficit));
        }
        self.note(format!("{label}: {} cases, max |deficit-1| {worst:.2e}", reps.len()));
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ps(n: usize, p: f64, r: f64, lambda: f64) -> ParamSet {
    ParamSet::new(n, p, r, lambda).expect("valid parameters")
}

fn batch(id: CheckId, g: Generator, params: &ParamSet, first: u64, count: u64) -> Vec<lpcentroid::Result<DeficitReport>> {
    run_batch(id, g, params, Sizes::default_for(params.n), first, count)
}

fn criterion_1(t: &mut Tally) -> lpcentroid::Result<()> {
    t.check(rel(omega(2)?, PI) < 1e-12, "omega(2)");
    t.check(rel(omega(4)?, PI * PI / 2.0) < 1e-12, "omega(4)");
    t.check((c_np(&ps(2, 2.0, 1.0, 2.0)) - 0.25).abs() < 1e-12, "c_{2,2}");
    let mut worst: f64 = 0.0;
    for (n, p, lambda) in [(2, 1.0, 2.0), (2, 2.0, 3.0), (2, 2.0, 0.9), (3, 1.0, 2.0)] {
        let params = ps(n, p, 1.0, lambda);
        let d = rel(layer_constant(&params)?.a, layer_constant_oracle(&params)?);
        worst = worst.max(d);
        t.check(d < 1e-8, format!("layer constant at ({n}, {p}, {lambda}): rel diff {d:e}"));
    }
    t.note(format!("layer constant vs oracle: max rel diff {worst:.1e}"));
    Ok(())
}

/// `int g |<x, xi>|^p dx` for `g = G(||x||_K)` in polar coordinates, by
/// Gauss-Legendre quadrature in the radius and a kink-aware rule in the angle.
fn polar_moment(profile: &Profile, k: &ConvexBody, p: f64, xi: [f64; 2]) -> f64 {
    let mut angles = radial_kinks(k).expect("polygon kinks");
    let normal = xi[1].atan2(xi[0]);
    angles.extend([normal + PI / 2.0, normal - PI / 2.0]);
    let rule = circle_rule(&angles);
    let kinks = profile.kinks();
    let support = profile.support_radius().expect("compact profile");
    rule.integrate(|th| {
        let u = [th.cos(), th.sin()];
        let rk = k.radial(&u);
        let mut breaks: Vec<f64> = vec![0.0];
        breaks.extend(kinks.iter().map(|s| s * rk));
        breaks.push(support * rk);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let radial = QuadRule::composite(&breaks, 24);
        let proj = (u[0] * xi[0] + u[1] * xi[1]).abs().powf(p);
        proj * radial.integrate(|rho| profile.value(rho / rk) * rho.powf(p + 1.0))
    })
}

fn criterion_2(t: &mut Tally) -> lpcentroid::Result<()> {
    let grid = SphereGrid::default_for(2)?;
    let ball = ConvexBody::ball(2);
    let m = moment_body(&ball, 2.0, grid.clone())?;
    let worst = m.values().iter().map(|v| rel(*v, PI.sqrt() / 2.0)).fold(0.0, f64::max);
    t.check(worst < 1e-8, format!("M_2 B support: rel error {worst:e}"));
    let g = centroid_body(&ball, 2.0, grid.clone())?;
    let worst = g.values().iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    t.check(worst < 1e-8, format!("Gamma_2 B support: error {worst:e}"));
    let k = ConvexBody::polygon(&[[1.0, 0.1], [0.3, 0.9], [-0.8, 0.6], [-0.7, -0.5], [0.4, -0.8]])?;
    let profile = Profile::Bumps {
        bumps: vec![
            Bump { amp: 0.7, radius: 1.0, power: 3.0 },
            Bump { amp: 0.5, radius: 0.6, power: 2.0 },
        ],
    };
    let mut worst: f64 = 0.0;
    for p in [1.0, 2.0, 2.5] {
        let factor = radial_factor(&profile, 2, p)?;
        for xi in [[1.0, 0.0], [0.6, 0.8], [-0.8, 0.6]] {
            let closed = factor.powf(p) * body_moment_pow(&k, p, &xi)?;
            let quad = polar_moment(&profile, &k, p, xi);
            worst = worst.max(rel(closed, quad));
        }
    }
    t.check(worst < 1e-6, format!("radial factor identity: rel error {worst:e}"));
    t.note(format!("radial factor identity: max rel error {worst:.1e}"));
    Ok(())
}

fn criterion_3(t: &mut Tally) -> lpcentroid::Result<()> {
    for p in [1.0, 2.0, 3.0] {
        let params = ps(2, p, 1.0, 2.0);
        let reps = t.reports("bp polygons", batch(CheckId::Bp, Generator::RandomPolygon, &params, 0, 200));
        t.one_sided(&format!("bp polygons p={p}"), &reps, 1e-3);
    }
    let params = ps(2, 2.0, 1.0, 2.0);
    let reps = t.reports("bp ellipses", batch(CheckId::Bp, Generator::RandomEllipse, &params, 0, 50));
    t.band("bp ellipses p=2", &reps, 1.0 - 1e-3, 1.0 + 1e-3);
    let reps = t.reports("bp-domain", batch(CheckId::BpDomain, Generator::RandomDomain, &params, 0, 100));
    t.one_sided("bp-domain", &reps, 1e-3);
    let reps = t.reports("bathtub", batch(CheckId::Bathtub, Generator::RandomDomain, &params, 0, 100));
    t.one_sided("bathtub (min nodewise ratio)", &reps, 1e-9);
    Ok(())
}

fn criterion_4(t: &mut Tally) -> lpcentroid::Result<()> {
    let mut rng = aux_rng(4, 0);
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let k = random_polygon(&mut rng)?;
        for r in [1.0, 1.5, 2.0] {
            worst = worst.max(rel(mixed_volume_primary(&k, &k, r)?, k.volume()));
        }
        let e = ConvexBody::ellipsoid(nalgebra::dmatrix![1.0 + 0.1 * i as f64, 0.2; -0.1, 0.7])?;
        worst = worst.max(rel(mixed_volume_r(&e, &e, 1.5)?.value, e.volume()));
    }
    t.check(worst < 1e-6, format!("V_r(K,K) = vol(K): rel error {worst:e}"));
    let square = ConvexBody::cube(2, 1.0)?;
    let v = mixed_volume_primary(&square, &ConvexBody::ball(2), 1.0)?;
    t.check((v - 4.0).abs() < 1e-12, format!("V_1(square, disk) = {v}"));
    t.check(v >= 2.0 * PI.sqrt(), "V_1(square, disk) >= 2 sqrt(pi)");
    let mut worst_dil: f64 = 0.0;
    for _ in 0..10 {
        let k = random_polygon(&mut rng)?;
        let c = 1.7;
        let l = k.linear_image(&(nalgebra::DMatrix::identity(2, 2) * c))?;
        for r in [1.0, 1.5] {
            let lhs = mixed_volume_primary(&k, &l, r)?;
            let rhs = k.volume().powf((2.0 - r) / 2.0) * l.volume().powf(r / 2.0);
            worst_dil = worst_dil.max((lhs / rhs - 1.0).abs());
        }
    }
    t.check(worst_dil < 1e-4, format!("dilates: |deficit - 1| = {worst_dil:e}"));
    let mut worst_fd: f64 = 0.0;
    for i in 0..50 {
        let k = random_polygon(&mut rng)?;
        let l = random_polygon(&mut rng)?;
        let r = [1.0, 1.5, 2.0][i % 3];
        let d = rel(mixed_volume_fd(&k, &l, r)?, mixed_volume_primary(&k, &l, r)?);
        worst_fd = worst_fd.max(d);
        t.check(d < 1e-3, format!("atomic vs finite differences, pair {i}: rel diff {d:e}"));
    }
    t.note(format!("atomic vs finite differences: max rel diff {worst_fd:.1e}; dilates {worst_dil:.1e}"));
    Ok(())
}

fn criterion_5(t: &mut Tally) -> lpcentroid::Result<()> {
    let cone_radial: ScalarField = RadialField::new(Profile::Cone, ConvexBody::ball(2))?.into();
    let cone_grid: ScalarField =
        GridField::on_cube(2, 1.05, 513, |x| (1.0 - (x[0] * x[0] + x[1] * x[1]).sqrt()).max(0.0))?.into();
    let golden = [PI / 3.0, (PI / 6.0).sqrt(), PI.sqrt() / 2.0, PI.powf(1.5) / 4.0];
    for (label, f) in [("radial", &cone_radial), ("grid", &cone_grid)] {
        let got = [f.lq_norm(1.0)?, f.lq_norm(2.0)?, f.layer_integral(0.5)?, f.layer_integral(1.5)?];
        for (g, want) in got.iter().zip(golden) {
            t.check(rel(*g, want) < 1e-3, format!("{label} cone golden value {g} vs {want}"));
        }
    }
    // Co-area on a smooth radial field, with the level integral taken over contours of its samples.
    let e = ConvexBody::ellipsoid(nalgebra::dmatrix![0.9, 0.2; -0.1, 0.6])?;
    let profile = Profile::Bumps { bumps: vec![Bump { amp: 1.0, radius: 1.0, power: 3.0 }] };
    let radial: ScalarField = RadialField::new(profile, e.clone())?.into();
    let sampled: ScalarField = GridField::on_cube(2, 1.0, 401, |x| radial.value(x))?.into();
    let q = ConvexBody::polygon(&[[1.0, 0.0], [0.3, 0.8], [-1.0, 0.0], [-0.3, -0.8]])?;
    let fine = QuadRule::uniform(0.0, radial.max_value(), 64, 8);
    let coarse = QuadRule::uniform(0.0, radial.max_value(), 8, 8);
    let mut worst: f64 = 0.0;
    for r in [1.0, 1.5] {
        let total = functional_mixed_volume(&radial, &q, r)?;
        for (f, levels) in [(&radial, &fine), (&sampled, &coarse)] {
            let mut integral = 0.0;
            for (&tt, &w) in levels.nodes.iter().zip(&levels.weights) {
                integral += w * level_mixed_volume(f, tt, &q, r)?.value;
            }
            worst = worst.max(rel(integral, total));
        }
    }
    t.check(worst < 1e-2, format!("co-area: rel error {worst:e}"));
    let mut worst_s: f64 = 0.0;
    let grid = SphereGrid::default_for(2)?;
    for r in [1.0, 1.5, 2.0] {
        for f in [&radial, &sampled] {
            let direct = 2.0 * functional_mixed_volume(f, &q, r)?;
            let measure = f.surface_measure(r, grid.clone())?.integrate(|u| q.support(u).powf(r));
            worst_s = worst_s.max(rel(measure, direct));
        }
    }
    t.check(worst_s < 1e-3, format!("surface measure identity: rel error {worst_s:e}"));
    t.note(format!("co-area max rel error {worst:.1e}; surface measure identity {worst_s:.1e}"));
    Ok(())
}

fn criterion_6(t: &mut Tally) -> lpcentroid::Result<()> {
    for r in [1.2, 1.5] {
        let params = ps(2, 2.0, r, 2.0);
        let reps = t.reports("t1vmv", batch(CheckId::T1vmv, Generator::RadialProfileField, &params, 0, 40));
        t.one_sided(&format!("t1vmv radial r={r}"), &reps, 1e-2);
        let reps = t.reports("t1vmv", batch(CheckId::T1vmv, Generator::RandomGridField, &params, 0, 10));
        t.one_sided(&format!("t1vmv grid r={r}"), &reps, 1e-2);
        let reps = t.reports("t1vmv extremal", batch(CheckId::T1vmv, Generator::ExtremalPair, &params, 0, 5));
        t.band(&format!("t1vmv extremal r={r}"), &reps, 0.99, 1.02);
    }
    Ok(())
}

fn criterion_7(t: &mut Tally) -> lpcentroid::Result<()> {
    for (p, lambda) in [(1.0, 2.0), (2.0, 0.8)] {
        let params = ps(2, p, 1.0, lambda);
        for id in [CheckId::Taux, CheckId::Lvnp] {
            let reps = t.reports(id.name(), batch(id, Generator::RandomGridField, &params, 0, 50));
            t.one_sided(&format!("{id} lambda={lambda}"), &reps, 1e-2);
            let reps = t.reports(id.name(), batch(id, Generator::ExtremalPair, &params, 0, 5));
            t.band(&format!("{id} extremal lambda={lambda}"), &reps, 1.0 - 3e-2, 1.0 + 3e-2);
        }
    }
    Ok(())
}

fn deficit_after_map(id: CheckId, g: Generator, params: &ParamSet, seed: u64) -> lpcentroid::Result<(f64, f64)> {
    let spec = InstanceSpec::new(g, seed, params.n);
    let inst = random_instance(&spec, id.need(), params)?;
    let a = random_sl(&mut aux_rng(seed, 99), params.n);
    let before = check_instance(id, &inst, params, &spec.sizes, Some(g))?.deficit;
    let after = check_instance(id, &inst.mapped(&a)?, params, &spec.sizes, Some(g))?.deficit;
    Ok((before, after))
}

fn criterion_8(t: &mut Tally) -> lpcentroid::Result<()> {
    let mut all = Vec::new();
    let mut seed = 0;
    for r in [1.0, 1.5] {
        for lambda in [0.8, 2.0] {
            for p in [1.0, 2.0] {
                let params = ps(2, p, r, lambda);
                let count = if all.len() >= 84 { 16 } else { 12 };
                all.extend(t.reports("main", batch(CheckId::Main, Generator::RandomGridField, &params, seed, count)));
                seed += count;
            }
        }
    }
    t.one_sided("main random pairs", &all, 1e-2);
    for lambda in [0.8, 2.0] {
        for p in [1.0, 2.0] {
            let params = ps(2, p, 1.5, lambda);
            let reps = t.reports("main extremal", batch(CheckId::Main, Generator::ExtremalPair, &params, 0, 3));
            t.band(&format!("main extremal p={p} lambda={lambda}"), &reps, 0.98, 1.05);
        }
    }
    let mut worst: f64 = 0.0;
    let params = ps(2, 2.0, 1.5, 2.0);
    for (id, g) in [
        (CheckId::Bp, Generator::RandomPolygon),
        (CheckId::Main, Generator::RandomGridField),
        (CheckId::Taux, Generator::RandomGridField),
    ] {
        for seed in 0..5 {
            let (before, after) = deficit_after_map(id, g, &params, seed)?;
            let d = rel(after, before);
            worst = worst.max(d);
            t.check(d < 5e-3, format!("{id} SL_2 invariance seed {seed}: {before} vs {after}"));
        }
    }
    t.note(format!("SL_2 invariance: max rel change {worst:.1e}"));
    Ok(())
}

fn criterion_9(t: &mut Tally) -> lpcentroid::Result<()> {
    let mut ratios = Vec::new();
    let mut literal = Vec::new();
    for (g, count) in [(Generator::RadialProfileField, 15u64), (Generator::RandomGridField, 5)] {
        for (i, p) in [1.0, 2.0, 3.0].into_iter().enumerate() {
            let params = ps(2, p, 1.0, 2.0);
            let n = count / 3 + u64::from((i as u64) < count % 3);
            let reps = t.reports("remark", batch(CheckId::Remark, g, &params, 0, n));
            t.band(&format!("remark {g} p={p}"), &reps, 1.0 - 1e-3, 1.0 + 1e-3);
            for r in &reps {
                ratios.push(r.detail_f64("polar_ratio").unwrap_or(f64::NAN));
                literal.push(r.detail_f64("literal_ratio").unwrap_or(f64::NAN));
            }
        }
    }
    let cv = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / v.len() as f64;
        (m, var.sqrt() / m)
    };
    let (m, c) = cv(&ratios);
    let (lm, lc) = cv(&literal);
    t.check(ratios.len() >= 20, "at least 20 instances");
    t.check(c < 1e-2, format!("constant between the printed sides: CV {c:e}"));
    t.note(format!(
        "{} instances; V_p(f,M_pg) / int g h^p = {m:.6} (CV {c:.1e}); with the support reading {lm:.4} (CV {lc:.1e})",
        ratios.len()
    ));
    Ok(())
}

type Criterion = fn(&mut Tally) -> lpcentroid::Result<()>;

fn main() -> ExitCode {
    let criteria: [(&str, u64, Criterion); 9] = [
        ("constants", 1, criterion_1),
        ("moment and centroid bodies", 5, criterion_2),
        ("Busemann-Petty for bodies and domains", 120, criterion_3),
        ("mixed volumes", 60, criterion_4),
        ("functional layer", 60, criterion_5),
        ("Sobolev-type mixed volume inequality", 120, criterion_6),
        ("layer-cake inequalities", 120, criterion_7),
        ("main inequality", 300, criterion_8),
        ("dual mixed volume identity", 600, criterion_9),
    ];
    let suite = Instant::now();
    let mut all_ok = true;
    // Warm the thread pool and lazily built grids outside the timed sections.
    let _ = check_inequality(CheckId::Bp, &InstanceSpec::new(Generator::RandomEllipse, 0, 2), &ps(2, 2.0, 1.0, 2.0));
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let mut tally = Tally::default();
        let start = Instant::now();
        if let Err(e) = f(&mut tally) {
            tally.failures.push(format!("error: {e}"));
        }
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        if !in_time {
            tally.failures.push(format!("took longer than {budget} s"));
        }
        let ok = tally.failures.is_empty();
        all_ok &= ok;
        let mut line = format!(
            "criterion {}: {} [{name}] {:.2} s (budget {budget} s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if !tally.notes.is_empty() {
            line.push_str(" | ");
            line.push_str(&tally.notes.join("; "));
        }
        if !ok {
            line.push_str(" | failures: ");
            line.push_str(&tally.failures.iter().take(5).cloned().collect::<Vec<_>>().join("; "));
        }
        println!("{line}");
    }
    let total = suite.elapsed();
    let ok = total <= Duration::from_secs(15 * 60);
    all_ok &= ok;
    println!(
        "criterion 10: {} [full suite] {:.2} s (budget 900 s)",
        if ok { "PASS" } else { "FAIL" },
        total.as_secs_f64()
    );
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
