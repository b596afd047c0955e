//! L_p moment and centroid bodies and the Busemann-Petty ratio
//! vol(Gamma_p K) / vol(K) for a few planar bodies.

use lpcentroid::geometry::{ConvexBody, SphereGrid};
use lpcentroid::moment::{centroid_body, moment_body};

fn main() -> lpcentroid::Result<()> {
    let grid = SphereGrid::default_for(2)?;
    let bodies = [
        ("disk", ConvexBody::ball(2)),
        ("ellipse", ConvexBody::ellipsoid(nalgebra::dmatrix![2.0, 0.5; 0.0, 0.6])?),
        ("square", ConvexBody::cube(2, 1.0)?),
        ("triangle", ConvexBody::polygon(&[[1.0, -0.5], [0.0, 1.0], [-1.0, -0.5]])?),
    ];
    for p in [1.0, 2.0, 4.0] {
        println!("p = {p}");
        for (name, k) in &bodies {
            let gamma = centroid_body(k, p, grid.clone())?;
            let m = moment_body(k, p, grid.clone())?;
            println!(
                "  {name:9} vol(M_p K) = {:9.5}  vol(Gamma_p K)/vol(K) = {:.6}",
                m.volume(),
                gamma.volume() / k.volume()
            );
        }
    }
    Ok(())
}
