//! Compact domains as unions of intervals along rays, their symmetral SM,
//! and the moment comparison between them.

use lpcentroid::geometry::SphereGrid;
use lpcentroid::moment::domain_centroid_body;
use lpcentroid::verify::instance::{aux_rng, random_domain};

fn main() -> lpcentroid::Result<()> {
    let grid = SphereGrid::circle(256)?;
    let mut rng = aux_rng(7, 0);
    let m = random_domain(&mut rng, grid.clone())?;
    let sm = m.sm_symmetrize();
    let smd = sm.to_domain()?;
    let pieces: usize = m.rays().iter().map(Vec::len).sum();
    println!("domain: {pieces} intervals on {} rays, vol = {:.6}", grid.len(), m.volume());
    println!("SM:     vol = {:.6}", sm.volume());

    let p = 2.0;
    let worst = grid
        .nodes()
        .map(|xi| m.moment(p, xi) / smd.moment(p, xi))
        .fold(f64::INFINITY, f64::min);
    println!("min over directions of moment(M)/moment(SM) = {worst:.6}");

    let gamma = domain_centroid_body(&m, p)?;
    println!("vol(Gamma_2 M)/vol(M) = {:.6}", gamma.volume() / m.volume());
    Ok(())
}
