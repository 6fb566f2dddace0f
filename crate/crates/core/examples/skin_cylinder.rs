//! Skins the bundled cylinder through its flex clip and checks the matrix pipeline.

use cga_surgery::cga::BlendMode;
use cga_surgery::rig::*;

fn main() -> Result<(), cga_surgery::error::Error> {
    let asset = cga_surgery::assets::cylinder();
    let clip = asset.clip("flex").expect("flex clip");
    let tip = asset.mesh.vertices().len() - 1;
    println!("{:>5} {:>28} {:>12}", "t", "tip vertex", "vs matrices");
    for i in 0..=8 {
        let t = i as f64 * 0.25;
        let pose = global_pose(&asset.rig, clip, t, BlendMode::Log)?;
        let ga = deform_multivector(&asset.mesh, &asset.rig, &pose)?;
        let mats = oracle_pose_matrices(&asset.rig, clip, t)?;
        let m = deform_matrix_oracle(&asset.mesh, &asset.rig, &mats)?;
        let diff = ga
            .iter()
            .zip(&m)
            .map(|(a, b)| (a - b).amax())
            .fold(0.0, f64::max);
        let v = ga[tip];
        println!(
            "{t:>5.2} ({:>7.4}, {:>7.4}, {:>7.4}) {diff:>12.2e}",
            v.x, v.y, v.z
        );
    }
    Ok(())
}
