//! L_r mixed volumes of bodies by surface atoms and by finite differences,
//! the dilate equality case, and the functional mixed volume of a field.

use lpcentroid::fields::{Profile, RadialField, ScalarField};
use lpcentroid::geometry::{ConvexBody, SphereGrid};
use lpcentroid::mixed::{functional_mixed_volume, mixed_volume_fd, mixed_volume_r};

fn main() -> lpcentroid::Result<()> {
    let square = ConvexBody::cube(2, 1.0)?;
    let disk = ConvexBody::ball(2);
    let triangle = ConvexBody::polygon(&[[1.0, -0.5], [0.0, 1.0], [-1.0, -0.5]])?;
    for r in [1.0, 1.5] {
        for (name, k, l) in [("square, disk", &square, &disk), ("triangle, square", &triangle, &square)] {
            let v = mixed_volume_r(k, l, r)?;
            let bound = k.volume().powf((2.0 - r) / 2.0) * l.volume().powf(r / 2.0);
            println!(
                "r={r} V_r({name}) = {:.6} [{}], finite differences {:.6}, lower bound {bound:.6}",
                v.value,
                v.path,
                mixed_volume_fd(k, l, r)?
            );
        }
    }
    let dilate = triangle.linear_image(&(nalgebra::DMatrix::identity(2, 2) * 1.7))?;
    let v = mixed_volume_r(&triangle, &dilate, 1.5)?.value;
    let bound = triangle.volume().powf(0.25) * dilate.volume().powf(0.75);
    println!("dilates: V_1.5 = {v:.9}, bound {bound:.9}");

    // A cone over the triangle with unit gradient integral has V_r(f, Q) = V_r(triangle, Q).
    let r = 1.5;
    let f: ScalarField = RadialField::new(Profile::Cone.scaled(2f64.powf(1.0 / r), 1.0), triangle.clone())?.into();
    println!(
        "V_r(f, square) = {:.6}, V_r(triangle, square) = {:.6}",
        functional_mixed_volume(&f, &square, r)?,
        mixed_volume_r(&triangle, &square, r)?.value
    );
    let measure = f.surface_measure(r, SphereGrid::default_for(2)?)?;
    println!("total mass of the L_r surface measure of f: {:.6}", measure.total_mass());
    Ok(())
}
