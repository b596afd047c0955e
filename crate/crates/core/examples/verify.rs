//! Seeded batches of checks written as CSV, and a lambda sweep of the main
//! inequality.

use lpcentroid::params::ParamSet;
use lpcentroid::verify::{default_lambda_grid, run_batch, sweep, write_csv, CheckId, Generator, Sizes};

fn main() -> lpcentroid::Result<()> {
    let ps = ParamSet::new(2, 2.0, 1.5, 2.0)?;
    let mut stdout = std::io::stdout().lock();
    for id in [CheckId::Bp, CheckId::Mixed, CheckId::Pp, CheckId::Bmvm] {
        let reports: Vec<_> = run_batch(id, id.default_generator(), &ps, Sizes::default_for(2), 0, 5)
            .into_iter()
            .collect::<lpcentroid::Result<_>>()?;
        write_csv(&mut stdout, &reports)?;
    }

    let mut sizes = Sizes::default_for(2);
    sizes.field_grid = 96;
    let lambdas: Vec<f64> = default_lambda_grid(2, 2.0).into_iter().step_by(4).collect();
    let reports = sweep(CheckId::Main, Generator::RandomGridField, &ps, &lambdas, sizes, 2)?;
    write_csv(&mut stdout, &reports)?;
    Ok(())
}
