//! One-dimensional radial profiles `P: [0, inf) -> R`.
//!
//! Profiles of the form `(1 + sigma t^m)^c` (the Sobolev and layer-cake
//! extremals, the cone, single bumps) have all their radial integrals in
//! closed form through the Beta function; mixtures and truncations fall back
//! to tanh-sinh quadrature on their compact support.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::params::SobolevExponent;
use crate::quadrature::tanh_sinh;
use crate::special::ln_beta;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub amp: f64,
    pub radius: f64,
    pub power: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Profile {
    /// `(1 + t^{r/(r-1)})^e` with `e = 1 - n/r` (or the printed `1 - r/n`).
    SobolevF {
        n: f64,
        r: f64,
        #[serde(default)]
        exponent: SobolevExponent,
    },
    /// `(1 + t^p)^{1/(lambda-1)}` for `lambda < 1`, `(1 - t^p)_+^{1/(lambda-1)}` for `lambda > 1`.
    LayerG { p: f64, lambda: f64 },
    /// `(1 - t)_+`.
    Cone,
    /// 1 on `[0, 1]`, 0 beyond.
    Indicator,
    /// `sum amp_i (1 - (t/radius_i)^2)_+^{power_i}`.
    Bumps { bumps: Vec<Bump> },
    /// `amp * inner(rate * t)`.
    Scaled { amp: f64, rate: f64, inner: Box<Profile> },
    /// `inner(t) - inner(radius)` on `[0, radius)`, 0 beyond.
    Truncated { radius: f64, inner: Box<Profile> },
}

/// `(1 + sigma t^m)^c`, with `sigma = -1` meaning support `[0, 1]`.
#[derive(Clone, Copy, Debug)]
struct Alg {
    sigma: f64,
    m: f64,
    c: f64,
}

impl Alg {
    fn value(&self, t: f64) -> f64 {
        let base = 1.0 + self.sigma * t.powf(self.m);
        if base <= 0.0 {
            0.0
        } else {
            base.powf(self.c)
        }
    }

    fn deriv(&self, t: f64) -> f64 {
        if self.sigma < 0.0 && t >= 1.0 {
            return 0.0;
        }
        if t == 0.0 {
            return if self.m == 1.0 { self.c * self.sigma } else { 0.0 };
        }
        let tm = t.powf(self.m);
        let base = 1.0 + self.sigma * tm;
        self.c * self.sigma * self.m * tm / t * base.powf(self.c - 1.0)
    }

    /// `int_0^inf t^{s-1} (1 + sigma t^m)_+^c dt`.
    fn integral(s: f64, sigma: f64, m: f64, c: f64) -> f64 {
        let a = s / m;
        if sigma < 0.0 {
            if c <= -1.0 {
                return f64::INFINITY;
            }
            ln_beta(a, c + 1.0).exp() / m
        } else {
            let b = -c - a;
            if b <= 0.0 {
                return f64::INFINITY;
            }
            ln_beta(a, b).exp() / m
        }
    }

    fn level_radius(&self, t: f64) -> f64 {
        // Nonincreasing with value 1 at 0.
        if t >= 1.0 {
            return 0.0;
        }
        if t <= 0.0 {
            return if self.sigma < 0.0 { 1.0 } else { f64::INFINITY };
        }
        (self.sigma * (t.powf(1.0 / self.c) - 1.0)).max(0.0).powf(1.0 / self.m)
    }
}

impl Profile {
    pub fn sobolev(n: usize, r: f64) -> Self {
        Profile::SobolevF {
            n: n as f64,
            r,
            exponent: SobolevExponent::Decaying,
        }
    }

    pub fn layer_g(p: f64, lambda: f64) -> Self {
        Profile::LayerG { p, lambda }
    }

    pub fn scaled(self, amp: f64, rate: f64) -> Self {
        Profile::Scaled {
            amp,
            rate,
            inner: Box::new(self),
        }
    }

    pub fn truncated(self, radius: f64) -> Self {
        Profile::Truncated {
            radius,
            inner: Box::new(self),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Profile::SobolevF { n, r, .. } => {
                if !(*r > 1.0 && r < n) {
                    return Err(Error::Unsupported(format!(
                        "Sobolev profile needs 1 < r < n, got r = {r}, n = {n}"
                    )));
                }
            }
            Profile::LayerG { p, lambda } => {
                if !(*p >= 1.0 && *lambda > 0.0 && *lambda != 1.0) {
                    return invalid("layer profile needs p >= 1, lambda > 0, lambda != 1");
                }
            }
            Profile::Bumps { bumps } => {
                if bumps.is_empty() || bumps.iter().any(|b| !(b.amp > 0.0 && b.radius > 0.0 && b.power >= 1.0)) {
                    return invalid("bumps need positive amplitude and radius and power >= 1");
                }
            }
            Profile::Scaled { amp, rate, inner } => {
                if !(*amp > 0.0 && *rate > 0.0) {
                    return invalid("scaled profile needs positive amplitude and rate");
                }
                inner.validate()?;
            }
            Profile::Truncated { radius, inner } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return invalid("truncation radius must be positive and finite");
                }
                inner.validate()?;
            }
            Profile::Cone | Profile::Indicator => {}
        }
        Ok(())
    }

    fn alg(&self) -> Option<Alg> {
        match self {
            Profile::SobolevF { n, r, exponent } => Some(Alg {
                sigma: 1.0,
                m: r / (r - 1.0),
                c: exponent.value(*n, *r),
            }),
            Profile::LayerG { p, lambda } => Some(Alg {
                sigma: if *lambda < 1.0 { 1.0 } else { -1.0 },
                m: *p,
                c: 1.0 / (lambda - 1.0),
            }),
            Profile::Cone => Some(Alg {
                sigma: -1.0,
                m: 1.0,
                c: 1.0,
            }),
            Profile::Bumps { bumps } if bumps.len() == 1 && bumps[0].amp == 1.0 && bumps[0].radius == 1.0 => {
                Some(Alg {
                    sigma: -1.0,
                    m: 2.0,
                    c: bumps[0].power,
                })
            }
            _ => None,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        if let Some(a) = self.alg() {
            return a.value(t);
        }
        match self {
            Profile::Indicator => {
                if t <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::Bumps { bumps } => bumps
                .iter()
                .map(|b| {
                    let x = 1.0 - (t / b.radius).powi(2);
                    if x > 0.0 {
                        b.amp * x.powf(b.power)
                    } else {
                        0.0
                    }
                })
                .sum(),
            Profile::Scaled { amp, rate, inner } => amp * inner.value(rate * t),
            Profile::Truncated { radius, inner } => {
                if t < *radius {
                    inner.value(t) - inner.value(*radius)
                } else {
                    0.0
                }
            }
            _ => unreachable!("closed-form profiles handled above"),
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        if let Some(a) = self.alg() {
            return a.deriv(t);
        }
        match self {
            Profile::Indicator => 0.0,
            Profile::Bumps { bumps } => bumps
                .iter()
                .map(|b| {
                    let x = 1.0 - (t / b.radius).powi(2);
                    if x > 0.0 {
                        -b.amp * b.power * x.powf(b.power - 1.0) * 2.0 * t / (b.radius * b.radius)
                    } else {
                        0.0
                    }
                })
                .sum(),
            Profile::Scaled { amp, rate, inner } => amp * rate * inner.deriv(rate * t),
            Profile::Truncated { radius, inner } => {
                if t < *radius {
                    inner.deriv(t)
                } else {
                    0.0
                }
            }
            _ => unreachable!("closed-form profiles handled above"),
        }
    }

    /// Radius beyond which the profile vanishes, if any.
    pub fn support_radius(&self) -> Option<f64> {
        match self {
            Profile::SobolevF { .. } => None,
            Profile::LayerG { lambda, .. } => (*lambda > 1.0).then_some(1.0),
            Profile::Cone | Profile::Indicator => Some(1.0),
            Profile::Bumps { bumps } => Some(bumps.iter().map(|b| b.radius).fold(0.0, f64::max)),
            Profile::Scaled { rate, inner, .. } => inner.support_radius().map(|r| r / rate),
            Profile::Truncated { radius, inner } => {
                Some(inner.support_radius().map_or(*radius, |r| r.min(*radius)))
            }
        }
    }

    /// Points in `(0, inf)` where the profile or its derivative is not smooth.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            Profile::SobolevF { .. } => vec![],
            Profile::LayerG { lambda, .. } => if *lambda > 1.0 { vec![1.0] } else { vec![] },
            Profile::Cone | Profile::Indicator => vec![1.0],
            Profile::Bumps { bumps } => bumps.iter().map(|b| b.radius).collect(),
            Profile::Scaled { rate, inner, .. } => inner.kinks().into_iter().map(|k| k / rate).collect(),
            Profile::Truncated { radius, inner } => {
                let mut k: Vec<f64> = inner.kinks().into_iter().filter(|k| k < radius).collect();
                k.push(*radius);
                k
            }
        }
    }

    /// Downward jumps `(position, size)`.
    pub fn jumps(&self) -> Vec<(f64, f64)> {
        match self {
            Profile::Indicator => vec![(1.0, 1.0)],
            Profile::Scaled { amp, rate, inner } => inner
                .jumps()
                .into_iter()
                .map(|(x, s)| (x / rate, amp * s))
                .collect(),
            Profile::Truncated { radius, inner } => {
                inner.jumps().into_iter().filter(|(x, _)| x < radius).collect()
            }
            _ => vec![],
        }
    }

    /// Whether the profile is nonincreasing on `[0, inf)`.
    pub fn is_nonincreasing(&self) -> bool {
        match self {
            Profile::SobolevF { n, r, exponent } => exponent.value(*n, *r) <= 0.0,
            Profile::Scaled { inner, .. } | Profile::Truncated { inner, .. } => inner.is_nonincreasing(),
            _ => true,
        }
    }

    /// Supremum of the profile (its value at 0 when nonincreasing).
    pub fn max_value(&self) -> f64 {
        if self.is_nonincreasing() {
            self.value(0.0)
        } else {
            f64::INFINITY
        }
    }

    /// Integration breaks on the (finite) support, with the kinks included.
    fn breaks(&self, end: f64) -> Vec<f64> {
        let mut b = vec![0.0];
        let mut k: Vec<f64> = self.kinks().into_iter().filter(|&x| x > 0.0 && x < end).collect();
        k.sort_by(f64::total_cmp);
        b.extend(k);
        b.push(end);
        b.dedup();
        b
    }

    fn numeric(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        let end = self.support_radius().ok_or_else(|| {
            Error::Unsupported("numeric radial integral needs a compactly supported profile".into())
        })?;
        let br = self.breaks(end);
        let mut total = 0.0;
        for w in br.windows(2) {
            total += tanh_sinh(&f, w[0], w[1], 1e-13);
        }
        Ok(total)
    }

    /// `int_0^inf t^{s-1} P(t) dt`; infinite when divergent.
    pub fn moment(&self, s: f64) -> Result<f64> {
        self.power_moment(s, 1.0)
    }

    /// `int_0^inf t^{s-1} |P(t)|^q dt`; infinite when divergent.
    pub fn power_moment(&self, s: f64, q: f64) -> Result<f64> {
        if let Some(a) = self.alg() {
            return Ok(Alg::integral(s, a.sigma, a.m, a.c * q));
        }
        match self {
            Profile::Indicator => Ok(1.0 / s),
            Profile::Scaled { amp, rate, inner } => Ok(amp.powf(q) * rate.powf(-s) * inner.power_moment(s, q)?),
            _ => self.numeric(|t| t.powf(s - 1.0) * self.value(t).abs().powf(q)),
        }
    }

    /// `(int_{P'<0} t^{s-1}|P'|^r dt, int_{P'>0} t^{s-1}|P'|^r dt)`.
    /// Jumps count only for `r = 1`; for `r > 1` they make the integral infinite.
    pub fn grad_moment(&self, s: f64, r: f64) -> Result<(f64, f64)> {
        if let Some(a) = self.alg() {
            let v = (a.c * a.m).abs().powf(r) * Alg::integral(s + (a.m - 1.0) * r, a.sigma, a.m, (a.c - 1.0) * r);
            return Ok(if a.c * a.sigma < 0.0 { (v, 0.0) } else { (0.0, v) });
        }
        match self {
            Profile::Indicator => {
                if r == 1.0 {
                    Ok((1.0, 0.0))
                } else {
                    Err(Error::DegenerateField("gradient of a jump is not L_r for r > 1".into()))
                }
            }
            Profile::Scaled { amp, rate, inner } => {
                let (a, b) = inner.grad_moment(s, r)?;
                let k = (amp * rate).powf(r) * rate.powf(-s);
                Ok((k * a, k * b))
            }
            _ => {
                if !self.jumps().is_empty() && r > 1.0 {
                    return Err(Error::DegenerateField("gradient of a jump is not L_r for r > 1".into()));
                }
                let neg = self.numeric(|t| {
                    let d = self.deriv(t);
                    if d < 0.0 { t.powf(s - 1.0) * (-d).powf(r) } else { 0.0 }
                })?;
                let pos = self.numeric(|t| {
                    let d = self.deriv(t);
                    if d > 0.0 { t.powf(s - 1.0) * d.powf(r) } else { 0.0 }
                })?;
                let jumps: f64 = self.jumps().iter().map(|(x, sz)| sz * x.powf(s - 1.0)).sum();
                Ok((neg + jumps, pos))
            }
        }
    }

    /// `sup {s : P(s) >= t}` for a nonincreasing profile.
    pub fn level_radius(&self, t: f64) -> Result<f64> {
        if !self.is_nonincreasing() {
            return Err(Error::Unsupported("level radius needs a nonincreasing profile".into()));
        }
        if let Some(a) = self.alg() {
            return Ok(a.level_radius(t));
        }
        match self {
            Profile::Indicator => Ok(if t <= 1.0 && t > 0.0 { 1.0 } else { 0.0 }),
            Profile::Scaled { amp, rate, inner } => Ok(inner.level_radius(t / amp)? / rate),
            _ => {
                if t > self.value(0.0) {
                    return Ok(0.0);
                }
                let mut lo = 0.0;
                let mut hi = self.support_radius().unwrap_or(1.0);
                while self.value(hi) >= t {
                    hi *= 2.0;
                    if hi > 1e12 {
                        return Ok(f64::INFINITY);
                    }
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.value(mid) >= t {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= 1e-15 * hi {
                        break;
                    }
                }
                Ok(lo)
            }
        }
    }

    /// `int_0^inf rho(t)^{e} dt` with `rho` the level radius, i.e. the layer
    /// integral of the radial field up to the factor `vol(K)^eta`, `e = n eta`.
    pub fn level_power_integral(&self, e: f64) -> Result<f64> {
        if !self.is_nonincreasing() {
            return Err(Error::Unsupported("layer integrals need a nonincreasing profile".into()));
        }
        // Jumps enter grad_moment with weight x^{s-1} = x^e.
        Ok(self.grad_moment(e + 1.0, 1.0)?.0)
    }
}
