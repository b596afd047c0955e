//! Inequality harness: random instances, deficit reports, batches and sweeps.

pub mod checks;
pub mod instance;
pub mod report;
pub mod sweep;

pub use checks::{check_inequality, check_instance, field_moment_pg, CheckId, Evaluation};
pub use instance::{random_instance, Generator, Instance, InstanceSpec, Need, Sizes};
pub use report::{write_csv, write_jsonl, DeficitReport, CSV_HEADER};
pub use sweep::{default_lambda_grid, sweep};

use rayon::prelude::*;

use crate::error::Result;
use crate::params::ParamSet;

/// One check over consecutive seeds `first_seed..first_seed + count`, in parallel.
/// Reports come back ordered by seed.
pub fn run_batch(
    id: CheckId,
    generator: Generator,
    params: &ParamSet,
    sizes: Sizes,
    first_seed: u64,
    count: u64,
) -> Vec<Result<DeficitReport>> {
    (first_seed..first_seed + count)
        .into_par_iter()
        .map(|seed| {
            let spec = InstanceSpec {
                generator,
                seed,
                sizes,
            };
            check_inequality(id, &spec, params)
        })
        .collect()
}
