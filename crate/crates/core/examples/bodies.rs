//! Convex bodies in their three representations: support, radial and gauge
//! functions, volumes, linear images and the JSON form.

use lpcentroid::geometry::{ConvexBody, SphereGrid};
use lpcentroid::io::body_to_json;

fn main() -> lpcentroid::Result<()> {
    let hexagon = ConvexBody::polygon(&[[1.0, 0.0], [0.6, 0.8], [-0.5, 0.9], [-1.0, 0.1], [-0.4, -0.8], [0.7, -0.7]])?;
    let ellipse = ConvexBody::ellipsoid(nalgebra::dmatrix![1.5, 0.3; 0.0, 0.7])?;
    let grid = SphereGrid::circle(512)?;
    let sampled = ConvexBody::sampled(grid.clone(), hexagon.support_values(&grid))?;

    let u = [0.6, 0.8];
    for (name, k) in [("hexagon", &hexagon), ("ellipse", &ellipse), ("sampled hexagon", &sampled)] {
        println!(
            "{name:16} h(u) = {:.6}  rho(u) = {:.6}  ||u|| = {:.6}  vol = {:.6}",
            k.support(&u),
            k.radial(&u),
            k.gauge(&u),
            k.volume()
        );
    }

    let shear = nalgebra::dmatrix![1.0, 0.8; 0.0, 1.0];
    let image = hexagon.linear_image(&shear)?;
    println!("\nsheared hexagon: vol = {:.6} (determinant 1 keeps it)", image.volume());
    println!("{}", body_to_json(&image));
    Ok(())
}
