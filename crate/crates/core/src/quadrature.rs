//! One-dimensional quadrature rules and scalar minimisation.

use std::sync::OnceLock;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn cached_gl(order: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static GL8: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static GL16: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    match order {
        8 => GL8.get_or_init(|| gauss_legendre(8)),
        16 => GL16.get_or_init(|| gauss_legendre(16)),
        _ => panic!("no cached Gauss-Legendre rule of order {order}"),
    }
}

/// A fixed set of nodes and weights.
#[derive(Clone, Debug, Default)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadRule {
    /// Composite Gauss-Legendre over consecutive `breaks` (sorted, length >= 2).
    /// Zero-width panels are skipped.
    pub fn composite(breaks: &[f64], order: usize) -> Self {
        let owned;
        let (gx, gw) = if order == 8 || order == 16 {
            cached_gl(order)
        } else {
            owned = gauss_legendre(order);
            &owned
        };
        let mut rule = QuadRule {
            nodes: Vec::with_capacity(breaks.len() * order),
            weights: Vec::with_capacity(breaks.len() * order),
        };
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, wt) in gx.iter().zip(gw) {
                rule.nodes.push(mid + half * x);
                rule.weights.push(half * wt);
            }
        }
        rule
    }

    /// `panels` equal panels on `[a, b]`.
    pub fn uniform(a: f64, b: f64, panels: usize, order: usize) -> Self {
        Self::composite(&uniform_breaks(a, b, panels), order)
    }

    /// Rule on a finite interval whose panels are graded geometrically towards
    /// both endpoints, for integrands with algebraic endpoint behaviour.
    pub fn graded(a: f64, b: f64, panels: usize, levels: usize, order: usize) -> Self {
        Self::composite(&graded_breaks(a, b, panels, levels), order)
    }

    /// Rule on `[0, inf)`: a graded rule on `[0, split]` and the tail mapped
    /// through `t = split / u`, graded towards `u = 0`.
    pub fn half_line(split: f64, panels: usize, levels: usize, order: usize) -> Self {
        let mut rule = Self::graded(0.0, split, panels, levels, order);
        let mut ub = vec![0.0];
        let tail_levels = 2 * levels;
        for k in (1..=tail_levels).rev() {
            ub.push(0.5f64.powi(k as i32));
        }
        ub.extend(uniform_breaks(0.5, 1.0, panels / 2 + 1).into_iter().skip(1));
        let tail = Self::composite(&ub, order);
        for (u, w) in tail.nodes.iter().zip(&tail.weights) {
            rule.nodes.push(split / u);
            rule.weights.push(w * split / (u * u));
        }
        rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

pub fn uniform_breaks(a: f64, b: f64, panels: usize) -> Vec<f64> {
    let panels = panels.max(1);
    (0..=panels)
        .map(|k| a + (b - a) * k as f64 / panels as f64)
        .collect()
}

/// Uniform panels on `[a, b]` whose first and last panels are further split
/// geometrically (ratio 1/2) `levels` times towards the endpoint.
pub fn graded_breaks(a: f64, b: f64, panels: usize, levels: usize) -> Vec<f64> {
    let panels = panels.max(2);
    let h = (b - a) / panels as f64;
    let mut out = vec![a];
    for k in (1..=levels).rev() {
        out.push(a + h * 0.5f64.powi(k as i32));
    }
    for k in 1..panels {
        out.push(a + h * k as f64);
    }
    for k in 1..=levels {
        out.push(b - h * 0.5f64.powi(k as i32));
    }
    out.push(b);
    out
}

/// Tanh-sinh (double exponential) quadrature on `[a, b]`; robust to
/// integrable endpoint singularities. Refines until two successive levels
/// agree to `tol` (relative).
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    let pi2 = std::f64::consts::FRAC_PI_2;
    // Evaluate at a + half*(1+x) but with the distance to the nearer endpoint
    // computed from the complement so that it is accurate near the ends.
    let eval = |t: f64| -> f64 {
        let s = pi2 * t.sinh();
        let c = s.cosh();
        let w = pi2 * t.cosh() / (c * c);
        // 1 - tanh(s) and 1 + tanh(s), each evaluated without cancellation.
        let e = (-2.0 * s.abs()).exp();
        let small = 2.0 * e / (1.0 + e);
        let (left, right) = if s >= 0.0 {
            (2.0 - small, small)
        } else {
            (small, 2.0 - small)
        };
        if left <= 0.0 || right <= 0.0 {
            return 0.0;
        }
        let x = if left < right {
            a + half * left
        } else {
            b - half * right
        };
        if x <= a || x >= b {
            return 0.0;
        }
        let v = f(x);
        if v.is_finite() {
            half * w * v
        } else {
            0.0
        }
    };
    let tmax = 6.5;
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > tmax {
            break;
        }
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut estimate = sum * h;
    for _level in 0..12 {
        h *= 0.5;
        let mut extra = 0.0;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > tmax {
                break;
            }
            extra += eval(t) + eval(-t);
            k += 2;
        }
        sum += extra;
        let next = sum * h;
        let converged = (next - estimate).abs() <= tol * next.abs().max(1e-300);
        estimate = next;
        if converged {
            break;
        }
    }
    estimate
}

/// Golden-section search for the minimum of a unimodal function on `[a, b]`.
/// Returns `(argmin, min)`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..500 {
        if (b - a).abs() <= tol * (c.abs() + d.abs()).max(1e-300) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
