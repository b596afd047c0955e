//! The functional L_p Busemann-Petty centroid inequality on a random pair of
//! grid fields and on the extremal pair, with the intermediate links of its
//! proof.

use lpcentroid::params::ParamSet;
use lpcentroid::verify::{check_inequality, CheckId, Generator, InstanceSpec};

fn main() -> lpcentroid::Result<()> {
    for (r, lambda) in [(1.5, 2.0), (1.5, 0.8), (1.0, 2.0)] {
        let ps = ParamSet::new(2, 1.0, r, lambda)?;
        for g in [Generator::RandomGridField, Generator::ExtremalPair] {
            let rep = check_inequality(CheckId::Main, &InstanceSpec::new(g, 1, 2), &ps)?;
            println!("r={r} lambda={lambda} {g:18} ratio = {:.6}", rep.deficit);
        }
    }
    let ps = ParamSet::new(2, 2.0, 1.0, 2.0)?;
    let rep = check_inequality(CheckId::Chain, &InstanceSpec::new(Generator::RadialProfileField, 4, 2), &ps)?;
    println!("\nlinks for a radial pair, r = 1:");
    for link in rep.details["links"].as_array().into_iter().flatten() {
        println!("  {:16} {:.9e}", link["link"].as_str().unwrap_or("?"), link["value"].as_f64().unwrap_or(f64::NAN));
    }
    Ok(())
}
