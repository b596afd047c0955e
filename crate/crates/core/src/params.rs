//! Scalar parameters and every closed-form constant of the inequalities.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::tanh_sinh;
use crate::special::{ln_beta, ln_gamma, omega, omega_real};

/// Minimum distance of `lambda` from 1.
pub const LAMBDA_GAP_ONE: f64 = 0.05;
/// Minimum distance of `lambda` above `n/(n+p)`.
pub const LAMBDA_GAP_LOW: f64 = 0.01;

/// The parameter tuple `(n, p, r, q, lambda)`; `q = nr/(n-r)` is always derived.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParamSet {
    pub n: usize,
    pub p: f64,
    pub r: f64,
    pub q: f64,
    pub lambda: f64,
}

impl ParamSet {
    pub fn new(n: usize, p: f64, r: f64, lambda: f64) -> Result<Self> {
        if n < 2 {
            return invalid(format!("dimension n must be at least 2, got {n}"));
        }
        let nf = n as f64;
        if !(p.is_finite() && p >= 1.0) {
            return invalid(format!("p must be a real number >= 1, got {p}"));
        }
        if !(r.is_finite() && r >= 1.0 && r < nf) {
            return invalid(format!("r must satisfy 1 <= r < n = {n}, got {r}"));
        }
        if !lambda.is_finite() {
            return invalid("lambda must be finite");
        }
        let low = nf / (nf + p);
        if lambda < low + LAMBDA_GAP_LOW {
            return invalid(format!(
                "lambda must be at least n/(n+p) + {LAMBDA_GAP_LOW} = {:.6}, got {lambda}",
                low + LAMBDA_GAP_LOW
            ));
        }
        if (lambda - 1.0).abs() < LAMBDA_GAP_ONE {
            return invalid(format!(
                "lambda must stay at least {LAMBDA_GAP_ONE} away from 1, got {lambda}"
            ));
        }
        Ok(ParamSet {
            n,
            p,
            r,
            q: nf * r / (nf - r),
            lambda,
        })
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn branch(&self) -> Branch {
        if self.lambda > 1.0 {
            Branch::Above
        } else {
            Branch::Below
        }
    }

    /// `(n+p)(lambda-1) + p`, the numerator shared by the layer-cake exponents.
    pub fn d(&self) -> f64 {
        (self.nf() + self.p) * (self.lambda - 1.0) + self.p
    }

    /// Exponent of `||g||_1` in the layer-cake lower bound.
    pub fn layer_exp_l1(&self) -> f64 {
        self.d() / ((self.lambda - 1.0) * self.nf())
    }

    /// Exponent of `||g||_lambda` in the layer-cake lower bound.
    pub fn layer_exp_llambda(&self) -> f64 {
        -self.lambda * self.p / ((self.lambda - 1.0) * self.nf())
    }

    /// Exponent of `||g||_1` on the right side of the main inequality.
    pub fn main_exp_l1(&self) -> f64 {
        self.d() * self.r / (self.nf() * self.p * (self.lambda - 1.0))
    }

    /// Exponent of `||g||_lambda` on the right side of the main inequality.
    pub fn main_exp_llambda(&self) -> f64 {
        -self.lambda * self.r / ((self.lambda - 1.0) * self.nf())
    }
}

/// Which side of 1 the layer-cake exponent lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "lambda>1")]
    Above,
    #[serde(rename = "lambda<1")]
    Below,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Above => f.write_str("lambda>1"),
            Branch::Below => f.write_str("lambda<1"),
        }
    }
}

/// `omega_{n+p} / (omega_2 omega_n omega_{p-1})`.
pub fn c_np(params: &ParamSet) -> f64 {
    c_np_raw(params.nf(), params.p)
}

pub(crate) fn c_np_raw(n: f64, p: f64) -> f64 {
    omega_real(n + p) / (omega_real(2.0) * omega_real(n) * omega_real(p - 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LayerConstant {
    pub branch: Branch,
    /// `A` when `lambda > 1`, `B` when `lambda < 1`.
    pub a_or_b: f64,
    pub a: f64,
}

/// Closed-form layer-cake constants, evaluated in log space.
pub fn layer_constant(params: &ParamSet) -> Result<LayerConstant> {
    let n = params.nf();
    let p = params.p;
    let l = params.lambda;
    let low = n / (n + p);
    if !(l > low && l != 1.0) {
        return invalid(format!("lambda = {l} outside (n/(n+p), 1) U (1, inf)"));
    }
    let lc = match params.branch() {
        Branch::Above => {
            let m = l - 1.0;
            let inner = ln_gamma(l / m) + (l * p).ln() / (1.0 - l) - (n + p) / p * (m * (n + p)).ln()
                + ln_gamma(n / p + 2.0)
                - ln_gamma(n / p + 1.0 / m + 2.0);
            let ln_a_cap = (m * n + l * p).ln() + m * p / (m * n + l * p) * inner;
            LayerConstant {
                branch: Branch::Above,
                a_or_b: ln_a_cap.exp(),
                a: (-params.layer_exp_l1() * ln_a_cap).exp(),
            }
        }
        Branch::Below => {
            let m = 1.0 - l;
            let inner = (-n / p - 2.0) * m.ln() + ln_gamma(n / p + 2.0) + ln_gamma(l / m - n / p)
                - ln_gamma((l - 2.0) / (l - 1.0));
            let ln_b = l.ln() + (p / (n + p)).ln() + (m * (n + p) / p - 1.0) * (l - low).ln()
                + m * inner;
            LayerConstant {
                branch: Branch::Below,
                a_or_b: ln_b.exp(),
                a: (p / ((l - 1.0) * n) * ln_b).exp(),
            }
        }
    };
    if !(lc.a_or_b.is_finite() && lc.a_or_b > 0.0 && lc.a.is_finite() && lc.a > 0.0) {
        return Err(Error::NumericFailure(format!(
            "layer constant not finite at (n={n}, p={p}, lambda={l})"
        )));
    }
    Ok(lc)
}

/// Reconstructs `A` or `B` by integrating the comparison profile numerically
/// and minimising over the scale `s`, independently of the closed form, and
/// returns the coefficient `a` it implies.
pub fn layer_constant_oracle(params: &ParamSet) -> Result<f64> {
    let n = params.nf();
    let p = params.p;
    let l = params.lambda;
    let k = (n + p) / p;
    let beta0 = p / (n + p);
    match params.branch() {
        Branch::Above => {
            let big_p = tanh_sinh(|t| (1.0 - t.powf(l - 1.0)).max(0.0).powf(k), 0.0, 1.0, 1e-14);
            let b = big_p.powf(beta0);
            let (_, v) = smin_numeric(1.0 / l, b, l - 1.0, beta0);
            Ok(v.powf(-params.layer_exp_l1()))
        }
        Branch::Below => {
            let big_q = tanh_sinh(|t| (t.powf(l - 1.0) - 1.0).max(0.0).powf(k), 0.0, 1.0, 1e-14);
            let b = big_q.powf(beta0);
            let (_, v) = smin_numeric(1.0, b, 1.0 - l, beta0 + l - 1.0);
            Ok((l * v).powf(p / ((l - 1.0) * n)))
        }
    }
}

fn smin_numeric(a: f64, b: f64, alpha: f64, beta: f64) -> (f64, f64) {
    // Minimise in log s; the objective is strictly convex there.
    let f = |x: f64| a * (-alpha * x).exp() + b * (beta * x).exp();
    let (x, v) = crate::quadrature::golden_section(f, -60.0, 60.0, 1e-15);
    (x.exp(), v)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SMin {
    pub s_star: f64,
    pub value: f64,
}

/// Minimum over `s > 0` of `a s^-alpha + b s^beta`.
pub fn smin(a: f64, b: f64, alpha: f64, beta: f64) -> Result<SMin> {
    if !(a > 0.0 && b > 0.0 && alpha > 0.0 && beta > 0.0) {
        return invalid("smin requires strictly positive arguments");
    }
    let s_star = (alpha * a / (beta * b)).powf(1.0 / (alpha + beta));
    Ok(SMin {
        s_star,
        value: a * s_star.powf(-alpha) + b * s_star.powf(beta),
    })
}

/// Level-set Sobolev constant, defined for `1 < r < n`.
pub fn c2(params: &ParamSet) -> Result<f64> {
    let n = params.nf();
    let r = params.r;
    if !(r > 1.0 && r < n) {
        return invalid(format!("c2 requires 1 < r < n, got r = {r}"));
    }
    let ln = (1.0 / params.q) * n.ln()
        + (r - 1.0) / r * ((n - r) / (r - 1.0)).ln()
        + (ln_gamma(n / r) + ln_gamma(n + 1.0 - n / r) - ln_gamma(n)) / n;
    Ok(ln.exp())
}

/// Which exponent `F_r` uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SobolevExponent {
    /// `1 - n/r`: decays at infinity, the Sobolev extremal.
    #[default]
    Decaying,
    /// `1 - r/n`: increasing, not integrable; kept for comparison.
    Printed,
}

impl SobolevExponent {
    pub fn value(self, n: f64, r: f64) -> f64 {
        match self {
            SobolevExponent::Decaying => 1.0 - n / r,
            SobolevExponent::Printed => 1.0 - r / n,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExtremalKind {
    F(SobolevExponent),
    G,
}

/// Radial extremal profiles `F_r` and `G_{p,lambda}`.
pub fn extremal_profile(kind: ExtremalKind, params: &ParamSet, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return invalid(format!("extremal profile needs t >= 0, got {t}"));
    }
    match kind {
        ExtremalKind::F(exp) => {
            let (e, rp) = f_exponents(params, exp)?;
            Ok((1.0 + t.powf(rp)).powf(e))
        }
        ExtremalKind::G => Ok(g_profile(params.p, params.lambda, t)),
    }
}

/// Derivative of the extremal profiles.
pub fn extremal_derivative(kind: ExtremalKind, params: &ParamSet, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return invalid(format!("extremal profile needs t >= 0, got {t}"));
    }
    match kind {
        ExtremalKind::F(exp) => {
            let (e, rp) = f_exponents(params, exp)?;
            if t == 0.0 {
                return Ok(0.0);
            }
            let tr = t.powf(rp);
            Ok(e * (1.0 + tr).powf(e - 1.0) * rp * tr / t)
        }
        ExtremalKind::G => Ok(g_derivative(params.p, params.lambda, t)),
    }
}

fn f_exponents(params: &ParamSet, exp: SobolevExponent) -> Result<(f64, f64)> {
    let r = params.r;
    if r <= 1.0 {
        return Err(Error::Unsupported(
            "the Sobolev extremal F_r is undefined at r = 1".into(),
        ));
    }
    Ok((exp.value(params.nf(), r), r / (r - 1.0)))
}

pub(crate) fn g_profile(p: f64, lambda: f64, t: f64) -> f64 {
    let e = 1.0 / (lambda - 1.0);
    if lambda < 1.0 {
        (1.0 + t.powf(p)).powf(e)
    } else if t >= 1.0 {
        0.0
    } else {
        (1.0 - t.powf(p)).powf(e)
    }
}

pub(crate) fn g_derivative(p: f64, lambda: f64, t: f64) -> f64 {
    let e = 1.0 / (lambda - 1.0);
    if t == 0.0 {
        return if p == 1.0 { if lambda < 1.0 { e } else { -e } } else { 0.0 };
    }
    let tp = t.powf(p);
    if lambda < 1.0 {
        e * (1.0 + tp).powf(e - 1.0) * p * tp / t
    } else if t >= 1.0 {
        0.0
    } else {
        -e * (1.0 - tp).powf(e - 1.0) * p * tp / t
    }
}

/// Self-convergence threshold for the numerically derived Sobolev constant.
pub const C1_TOLERANCE: f64 = 1e-8;

static C1_CACHE: RwLock<Option<HashMap<(usize, u64), f64>>> = RwLock::new(None);

/// Sharp generalised-Sobolev constant `c1`, derived from the equality case
/// `f = F_r(|x|)`, `K = B` by radial quadrature on the whole half-line.
/// Returned as `c1` (not `c1^r`). Cached per `(n, r)`.
pub fn c1(params: &ParamSet) -> Result<f64> {
    let n = params.nf();
    let r = params.r;
    if !(r > 1.0 && r < n) {
        return invalid(format!("c1 requires 1 < r < n, got r = {r}"));
    }
    let key = (params.n, r.to_bits());
    if let Some(map) = C1_CACHE.read().expect("c1 cache poisoned").as_ref() {
        if let Some(&v) = map.get(&key) {
            return Ok(v);
        }
    }
    let coarse = c1_pow_r_log(params, C1_COARSE_TOL)?;
    let fine = c1_pow_r_log(params, C1_FINE_TOL)?;
    let rel = (fine - coarse).abs() / fine;
    if !(rel <= C1_TOLERANCE) {
        return Err(Error::NumericFailure(format!(
            "c1 quadrature did not converge (relative change {rel:e})"
        )));
    }
    let value = fine.powf(1.0 / r);
    let mut guard = C1_CACHE.write().expect("c1 cache poisoned");
    guard.get_or_insert_with(HashMap::new).insert(key, value);
    Ok(value)
}

/// Tolerances of the two tanh-sinh evaluations compared by [`c1`].
const C1_COARSE_TOL: f64 = 1e-10;
const C1_FINE_TOL: f64 = 1e-13;

/// `c1^r` from the radial integrals of `|F_r'|^r` and `F_r^q`: tanh-sinh on
/// `s in [0, 1]`, and on `y = ln s in [0, Y]` beyond, with the integrands
/// evaluated in log space so that slowly decaying power tails are followed
/// until they are below `1e-19` of their start.
fn c1_pow_r_log(params: &ParamSet, tol: f64) -> Result<f64> {
    let n = params.nf();
    let r = params.r;
    let q = params.q;
    let (e, rp) = f_exponents(params, SobolevExponent::Decaying)?;
    let ln_abs_e = e.abs().ln();
    // ln(1 + s^rp) for s = e^y, y >= 0.
    let l1 = |y: f64| rp * y + (-rp * y).exp().ln_1p();
    let ln_grad = |y: f64| r * (ln_abs_e + rp.ln() + (e - 1.0) * l1(y) + (rp - 1.0) * y) + n * y;
    let ln_mass = |y: f64| q * e * l1(y) + n * y;
    // Decay rates in y of the two integrands.
    let rate = ((n - r) / (r - 1.0)).min(n / (r - 1.0));
    let y_max = 45.0 / rate;
    let kind = ExtremalKind::F(SobolevExponent::Decaying);
    let inner = |pow: f64, deriv: bool| {
        move |s: f64| {
            let v = if deriv {
                extremal_derivative(kind, params, s).unwrap_or(f64::NAN).abs()
            } else {
                extremal_profile(kind, params, s).unwrap_or(f64::NAN)
            };
            v.powf(pow) * s.powf(n - 1.0)
        }
    };
    let grad = tanh_sinh(inner(r, true), 0.0, 1.0, tol) + tanh_sinh(|y| ln_grad(y).exp(), 0.0, y_max, tol);
    let mass = tanh_sinh(inner(q, false), 0.0, 1.0, tol) + tanh_sinh(|y| ln_mass(y).exp(), 0.0, y_max, tol);
    let area = n * omega(params.n as i64)?;
    let vol = omega(params.n as i64)?;
    let ratio = (grad * area / n) / ((mass * area).powf(r / q) * vol.powf(r / n));
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(Error::NumericFailure(format!("c1 ratio not finite at (n={n}, r={r})")));
    }
    Ok(ratio)
}

/// The constant of the main inequality. For `r = 1` the Sobolev factor is 1.
pub fn c_main(params: &ParamSet) -> Result<f64> {
    let lc = layer_constant(params)?;
    let base = c_np(params) * lc.a;
    let n = params.nf();
    if params.r == 1.0 {
        Ok(n * base.powf(1.0 / params.p))
    } else {
        let c = c1(params)?;
        Ok(n * c.powf(params.r) * base.powf(params.r / params.p))
    }
}

/// All constants for one parameter set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantBundle {
    pub omega_n: f64,
    pub c_np: f64,
    #[serde(rename = "A_or_B")]
    pub a_or_b: f64,
    pub a: f64,
    /// For `r = 1` this is the continuous extension `n^{(n-1)/n}`.
    pub c2: f64,
    /// For `r = 1` this is 1, the constant of the level-set chain.
    pub c1: f64,
    #[serde(rename = "C_main")]
    pub c_main: f64,
    pub branch: Branch,
}

impl ConstantBundle {
    pub fn compute(params: &ParamSet) -> Result<Self> {
        let lc = layer_constant(params)?;
        let n = params.nf();
        let (c1v, c2v) = if params.r == 1.0 {
            (1.0, n.powf((n - 1.0) / n))
        } else {
            (c1(params)?, c2(params)?)
        };
        Ok(ConstantBundle {
            omega_n: omega(params.n as i64)?,
            c_np: c_np(params),
            a_or_b: lc.a_or_b,
            a: lc.a,
            c2: c2v,
            c1: c1v,
            c_main: c_main(params)?,
            branch: lc.branch,
        })
    }
}

/// Closed-form value of `c1^r`, via the Beta-function integrals of the
/// extremal profile. Used as an independent cross-check of [`c1`].
pub fn c1_pow_r_closed_form(params: &ParamSet) -> Result<f64> {
    let n = params.nf();
    let r = params.r;
    if !(r > 1.0 && r < n) {
        return invalid(format!("c1 requires 1 < r < n, got r = {r}"));
    }
    let rp = r / (r - 1.0);
    let j = ln_beta(n / rp, n - n / rp).exp() / rp;
    let i = ((n - r) / (r - 1.0)).powf(r) * ln_beta(n / rp + 1.0, n - n / rp - 1.0).exp() / rp;
    Ok(i / (n * j).powf(r / params.q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;
    use crate::quadrature::QuadRule;

    fn ps(n: usize, p: f64, r: f64, l: f64) -> ParamSet {
        ParamSet::new(n, p, r, l).unwrap()
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(ParamSet::new(1, 1.0, 1.0, 2.0).is_err());
        assert!(ParamSet::new(2, 0.5, 1.0, 2.0).is_err());
        assert!(ParamSet::new(2, 1.0, 2.0, 2.0).is_err());
        assert!(ParamSet::new(2, 1.0, 1.0, 1.02).is_err());
        assert!(ParamSet::new(2, 1.0, 1.0, 0.67).is_err());
        assert!(ParamSet::new(2, 1.0, 1.0, 0.7).is_ok());
        assert_relative_eq!(ps(3, 1.0, 2.0, 2.0).q, 6.0);
    }

    #[test]
    fn centroid_normalisation() {
        assert_relative_eq!(c_np(&ps(2, 2.0, 1.0, 2.0)), 0.25, epsilon = 1e-14);
        assert_relative_eq!(c_np(&ps(2, 1.0, 1.0, 2.0)), 4.0 / (3.0 * PI), epsilon = 1e-14);
        let expected = omega(4).unwrap() / (PI * omega(3).unwrap());
        assert_relative_eq!(c_np(&ps(3, 1.0, 1.0, 2.0)), expected, epsilon = 1e-14);
    }

    #[test]
    fn layer_constant_reference_values() {
        let cases = [
            ((2, 1.0, 2.0), 1.04338972004886),
            ((2, 2.0, 3.0), 1.02966808427902),
            ((3, 1.0, 2.0), 1.04069150925234),
            ((2, 2.0, 0.9), 1.03737140041694),
            ((2, 1.0, 0.8), 1.188401638644),
        ];
        for ((n, p, l), v) in cases {
            let lc = layer_constant(&ps(n, p, 1.0, l)).unwrap();
            assert_relative_eq!(lc.a_or_b, v, max_relative = 1e-11);
        }
    }

    #[test]
    fn layer_constant_matches_minimisation_oracle() {
        for (n, p, l) in [(2, 1.0, 2.0), (2, 2.0, 3.0), (2, 2.0, 0.9), (3, 1.0, 2.0), (2, 1.0, 0.8)] {
            let prm = ps(n, p, 1.0, l);
            let closed = layer_constant(&prm).unwrap().a;
            let oracle = layer_constant_oracle(&prm).unwrap();
            assert!((closed - oracle).abs() < 1e-8 * closed, "{n} {p} {l}: {closed} {oracle}");
        }
    }

    #[test]
    fn a_from_branch_constant() {
        let prm = ps(2, 1.0, 1.0, 2.0);
        let lc = layer_constant(&prm).unwrap();
        let d = prm.d();
        assert_relative_eq!(lc.a, lc.a_or_b.powf(-d / prm.nf()), max_relative = 1e-13);
    }

    #[test]
    fn smin_closed_form() {
        let s = smin(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(s.s_star, 1.0);
        assert_relative_eq!(s.value, 2.0);
        let s3 = smin(3.0, 3.0, 0.7, 1.9).unwrap();
        let s1 = smin(1.0, 1.0, 0.7, 1.9).unwrap();
        assert_relative_eq!(s3.value, 3.0 * s1.value, max_relative = 1e-14);
        assert!(smin(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn c2_and_c1_agree_with_closed_forms() {
        for (n, r) in [(2usize, 1.5), (3, 2.0), (2, 1.2), (3, 1.3)] {
            let prm = ps(n, 1.0, r, 2.0);
            let nf = n as f64;
            let c1v = c1(&prm).unwrap();
            let closed = c1_pow_r_closed_form(&prm).unwrap();
            assert_relative_eq!(c1v.powf(r), closed, max_relative = 1e-9);
            let via_c2 = nf.powf((r - nf) / nf) * c2(&prm).unwrap().powf(r);
            assert_relative_eq!(closed, via_c2, max_relative = 1e-12);
        }
        assert_relative_eq!(
            c1(&ps(2, 1.0, 1.5, 2.0)).unwrap().powf(1.5),
            0.850756048492759,
            max_relative = 1e-9
        );
        assert_relative_eq!(
            c1(&ps(3, 1.0, 2.0, 2.0)).unwrap().powf(2.0),
            0.702695916600477,
            max_relative = 1e-9
        );
    }

    /// `V_r(f,B) / (||f||_q^r vol(B)^{r/n})` for the radial field
    /// `f = scale_v * F_r(scale_x |x|)`, with the radial integrals taken by `integrate`.
    fn c1_ratio(
        params: &ParamSet,
        integrate: &dyn Fn(&dyn Fn(f64) -> f64) -> f64,
        scale_v: f64,
        scale_x: f64,
    ) -> Result<f64> {
        let n = params.nf();
        let r = params.r;
        let q = params.q;
        let kind = ExtremalKind::F(SobolevExponent::Decaying);
        // Validates the exponents once; the integrands below cannot fail after this.
        extremal_profile(kind, params, 0.0)?;
        let grad = integrate(&|s: f64| {
            let d = scale_v * scale_x * extremal_derivative(kind, params, scale_x * s).unwrap_or(f64::NAN);
            d.abs().powf(r) * s.powf(n - 1.0)
        });
        let mass = integrate(&|s: f64| {
            let v = scale_v * extremal_profile(kind, params, scale_x * s).unwrap_or(f64::NAN);
            v.powf(q) * s.powf(n - 1.0)
        });
        let area = n * omega(params.n as i64)?;
        let vol = omega(params.n as i64)?;
        let v_r = grad * area / n;
        let norm_q = (mass * area).powf(1.0 / q);
        let ratio = v_r / (norm_q.powf(r) * vol.powf(r / n));
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::NumericFailure(format!("c1 ratio not finite at (n={n}, r={r})")));
        }
        Ok(ratio)
    }

    #[test]
    fn c1_ratio_is_scale_invariant() {
        let prm = ps(2, 1.0, 1.5, 2.0);
        let rule = QuadRule::half_line(1.0, 96, 40, 16);
        let gl = |f: &dyn Fn(f64) -> f64| rule.integrate(f);
        let base = c1_ratio(&prm, &gl, 1.0, 1.0).unwrap();
        assert_relative_eq!(c1_ratio(&prm, &gl, 2.0, 1.0).unwrap(), base, max_relative = 1e-10);
        assert_relative_eq!(c1_ratio(&prm, &gl, 1.0, 2.0).unwrap(), base, max_relative = 1e-8);
        assert_relative_eq!(c1_pow_r_log(&prm, C1_FINE_TOL).unwrap(), base, max_relative = 1e-9);
    }

    #[test]
    fn c1_near_the_critical_exponent() {
        for (n, r) in [(2, 1.85), (2, 1.95), (3, 2.9), (4, 3.7)] {
            let prm = ps(n, 1.0, r, 2.0);
            let closed = c1_pow_r_closed_form(&prm).unwrap();
            assert_relative_eq!(c1(&prm).unwrap().powf(r), closed, max_relative = 1e-8);
        }
    }

    #[test]
    fn extremal_profiles() {
        let prm = ps(2, 1.0, 1.5, 2.0);
        assert_relative_eq!(extremal_profile(ExtremalKind::G, &prm, 0.5).unwrap(), 0.5);
        for p in [1.0, 2.0, 3.5] {
            let prm = ps(2, p, 1.0, 3.0);
            assert_eq!(extremal_profile(ExtremalKind::G, &prm, 1.0).unwrap(), 0.0);
        }
        let f = ExtremalKind::F(SobolevExponent::Decaying);
        assert_eq!(extremal_profile(f, &prm, 0.0).unwrap(), 1.0);
        let r1 = ps(2, 1.0, 1.0, 2.0);
        assert!(matches!(extremal_profile(f, &r1, 1.0), Err(Error::Unsupported(_))));
        // the printed exponent grows, the default decays
        let printed = ExtremalKind::F(SobolevExponent::Printed);
        assert!(extremal_profile(printed, &prm, 10.0).unwrap() > 1.0);
        assert!(extremal_profile(f, &prm, 10.0).unwrap() < 1.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        for (kind, prm) in [
            (ExtremalKind::F(SobolevExponent::Decaying), ps(2, 1.0, 1.5, 2.0)),
            (ExtremalKind::G, ps(2, 2.0, 1.0, 0.8)),
            (ExtremalKind::G, ps(2, 2.0, 1.0, 3.0)),
        ] {
            for t in [0.2, 0.5, 0.9, 1.7] {
                let fd = (extremal_profile(kind, &prm, t + h).unwrap()
                    - extremal_profile(kind, &prm, t - h).unwrap())
                    / (2.0 * h);
                let an = extremal_derivative(kind, &prm, t).unwrap();
                assert!((fd - an).abs() < 1e-6 * (1.0 + an.abs()), "{kind:?} t={t}: {fd} {an}");
            }
        }
    }

    #[test]
    fn bundle_is_positive_and_finite() {
        for (n, p, r, l) in [(2, 2.0, 1.0, 2.0), (2, 1.0, 1.5, 0.8), (3, 2.0, 2.0, 0.9)] {
            let b = ConstantBundle::compute(&ps(n, p, r, l)).unwrap();
            for v in [b.omega_n, b.c_np, b.a_or_b, b.a, b.c2, b.c1, b.c_main] {
                assert!(v.is_finite() && v > 0.0);
            }
        }
    }
}
