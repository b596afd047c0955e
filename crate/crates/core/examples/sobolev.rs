//! The Sobolev-type mixed volume inequality and the layer-cake lemmas on
//! extremal profiles and on random grid fields.

use lpcentroid::params::{c1, ParamSet};
use lpcentroid::verify::{check_inequality, CheckId, Generator, InstanceSpec};

fn main() -> lpcentroid::Result<()> {
    let ps = ParamSet::new(2, 2.0, 1.5, 2.0)?;
    println!("c1 = {:.10} at n=2, r=1.5", c1(&ps)?);
    for (id, lambda) in [(CheckId::T1vmv, 2.0), (CheckId::Lnf, 2.0), (CheckId::Lvnp, 2.0), (CheckId::Lvnp, 0.8), (CheckId::Taux, 0.8)] {
        let ps = ParamSet::new(2, 2.0, 1.5, lambda)?;
        for g in [Generator::ExtremalPair, Generator::RandomGridField] {
            if id == CheckId::Lnf && g == Generator::ExtremalPair {
                continue;
            }
            let rep = check_inequality(id, &InstanceSpec::new(g, 3, 2), &ps)?;
            println!(
                "{id:6} lambda={lambda:<4} {g:18} lhs = {:.6e}  rhs = {:.6e}  ratio = {:.6}",
                rep.lhs, rep.rhs, rep.deficit
            );
        }
    }
    Ok(())
}
