//! Every constant of the inequalities for a few parameter sets, and the
//! layer-cake coefficient next to its numerical reconstruction.

use lpcentroid::params::{layer_constant, layer_constant_oracle, ConstantBundle, ParamSet};

fn main() -> lpcentroid::Result<()> {
    for (n, p, r, lambda) in [(2, 2.0, 1.0, 2.0), (2, 1.0, 1.5, 0.8), (3, 2.0, 2.0, 3.0)] {
        let ps = ParamSet::new(n, p, r, lambda)?;
        let bundle = ConstantBundle::compute(&ps)?;
        println!("n={n} p={p} r={r} lambda={lambda}");
        println!("{}", serde_json::to_string_pretty(&bundle).expect("constants serialize"));
        let closed = layer_constant(&ps)?.a;
        let oracle = layer_constant_oracle(&ps)?;
        println!("  a = {closed:.12}, reconstructed {oracle:.12}\n");
    }
    Ok(())
}
