//! Gamma-function based constants.
//!
//! Everything is evaluated in log space so that large or non-integer
//! arguments (the layer constants raise Gamma ratios to large powers)
//! neither overflow nor lose relative precision.

use std::f64::consts::PI;

use crate::error::{invalid, Result};

/// Natural logarithm of the Gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Gamma function for `x > 0`.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Volume of the unit ball of `R^m`; `omega(0) == 1`.
pub fn omega(m: i64) -> Result<f64> {
    if m < 0 {
        return invalid(format!("omega: dimension must be non-negative, got {m}"));
    }
    Ok(omega_real(m as f64))
}

/// `pi^{s/2} / Gamma(s/2 + 1)` for any real `s > -2`.
pub fn omega_real(s: f64) -> f64 {
    (0.5 * s * PI.ln() - ln_gamma(0.5 * s + 1.0)).exp()
}

/// Log of the Beta function.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}
