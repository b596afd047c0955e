//! Scalar fields: a closed-form radial cone next to its grid samples, their
//! norms, layer integrals and level volumes, and the binary grid format.

use lpcentroid::fields::{GridField, Profile, RadialField, ScalarField};
use lpcentroid::geometry::ConvexBody;
use lpcentroid::io::{read_grid_field, write_grid_field};

fn main() -> lpcentroid::Result<()> {
    let radial: ScalarField = RadialField::new(Profile::Cone, ConvexBody::ball(2))?.into();
    let grid = GridField::on_cube(2, 1.05, 257, |x| radial.value(x))?;
    let sampled: ScalarField = grid.clone().into();
    println!("{:>22} {:>12} {:>12}", "", "radial", "grid");
    for (label, a, b) in [
        ("||f||_1", radial.lq_norm(1.0)?, sampled.lq_norm(1.0)?),
        ("||f||_2", radial.lq_norm(2.0)?, sampled.lq_norm(2.0)?),
        ("int vol(N_t)^(1/2) dt", radial.layer_integral(0.5)?, sampled.layer_integral(0.5)?),
        ("vol(N_0.5)", radial.level_volume(0.5)?, sampled.level_volume(0.5)?),
    ] {
        println!("{label:>22} {a:12.6} {b:12.6}");
    }
    let x = [0.3, -0.2];
    println!("gradient at {x:?}: radial {:?}, grid {:?}", radial.gradient(&x), sampled.gradient(&x));

    let dir = std::env::temp_dir().join("lpcentroid-fields-example");
    std::fs::create_dir_all(&dir)?;
    let header = dir.join("cone.json");
    write_grid_field(&header, &grid)?;
    let back = read_grid_field(&header)?;
    println!("wrote {} and read back {} nodes", header.display(), back.values().len());
    Ok(())
}
