//! Both Fubini orders of int int g(y) |<grad f(x), y>|^p dy dx, and how they
//! relate to V_p(f, M_p g) and to the dual mixed volume of g.

use lpcentroid::params::ParamSet;
use lpcentroid::verify::{check_inequality, CheckId, Generator, InstanceSpec};

fn main() -> lpcentroid::Result<()> {
    for p in [1.0, 2.0, 3.0] {
        let ps = ParamSet::new(2, p, 1.0, 2.0)?;
        let rep = check_inequality(CheckId::Remark, &InstanceSpec::new(Generator::RadialProfileField, 2, 2), &ps)?;
        println!(
            "p={p}: x-first {:.9e}, y-first {:.9e}, ratio {:.2e} from 1",
            rep.lhs,
            rep.rhs,
            (rep.deficit - 1.0).abs()
        );
        for key in ["V_p(f,M_pg)", "polar_ratio", "literal_ratio"] {
            if let Some(v) = rep.detail_f64(key) {
                println!("    {key:12} {v:.9}");
            }
        }
    }
    Ok(())
}
