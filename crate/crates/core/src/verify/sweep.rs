//! Deficits along a grid of `lambda` values on both sides of 1.

use crate::error::Result;
use crate::params::{ParamSet, LAMBDA_GAP_LOW, LAMBDA_GAP_ONE};

use super::{run_batch, CheckId, DeficitReport, Generator, Sizes};

/// Points per branch of the default grid.
pub const SWEEP_POINTS: usize = 10;
/// Largest `lambda` of the default grid.
pub const SWEEP_LAMBDA_MAX: f64 = 4.0;

fn linspace(a: f64, b: f64, m: usize) -> Vec<f64> {
    (0..m).map(|i| a + (b - a) * i as f64 / (m - 1) as f64).collect()
}

/// Ten admissible values of `lambda` below 1 followed by ten above 1.
pub fn default_lambda_grid(n: usize, p: f64) -> Vec<f64> {
    let low = n as f64 / (n as f64 + p) + 2.0 * LAMBDA_GAP_LOW;
    let mut grid = linspace(low, 1.0 - LAMBDA_GAP_ONE, SWEEP_POINTS);
    grid.extend(linspace(1.0 + LAMBDA_GAP_ONE, SWEEP_LAMBDA_MAX, SWEEP_POINTS));
    grid
}

/// Runs `id` on `seeds` instances at every `lambda` of the grid.
pub fn sweep(
    id: CheckId,
    generator: Generator,
    base: &ParamSet,
    lambdas: &[f64],
    sizes: Sizes,
    seeds: u64,
) -> Result<Vec<DeficitReport>> {
    let mut out = Vec::with_capacity(lambdas.len() * seeds as usize);
    for &lambda in lambdas {
        let params = ParamSet::new(base.n, base.p, base.r, lambda)?;
        for r in run_batch(id, generator, &params, sizes, 0, seeds) {
            out.push(r?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_is_admissible() {
        for (n, p) in [(2, 1.0), (2, 2.0), (3, 1.0)] {
            let g = default_lambda_grid(n, p);
            assert_eq!(g.len(), 2 * SWEEP_POINTS);
            for l in g {
                ParamSet::new(n, p, 1.0, l).unwrap();
            }
        }
    }

    #[test]
    fn sweep_visits_every_lambda() {
        let base = ParamSet::new(2, 1.0, 1.0, 2.0).unwrap();
        let reports = sweep(CheckId::Lvnp, Generator::RadialProfileField, &base, &[0.8, 2.0], Sizes::default_for(2), 2).unwrap();
        assert_eq!(reports.len(), 4);
        assert_eq!(reports[0].params.lambda, 0.8);
        assert_eq!(reports[3].params.lambda, 2.0);
        assert!(reports.iter().all(|r| r.ok()));
    }
}
