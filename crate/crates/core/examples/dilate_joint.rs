//! Swells the elbow of the arm with a dilator attached to its local motor.

use cga_surgery::cga::BlendMode;
use cga_surgery::rig::*;

fn main() -> Result<(), cga_surgery::error::Error> {
    let arm = cga_surgery::assets::arm();
    let elbow = arm.rig.find("elbow").expect("elbow bone").id;
    let clip = arm.clip("flex").expect("flex clip");
    let local = local_pose(&arm.rig, clip, 0.5, BlendMode::Log)?;
    let rest = deform_multivector(&arm.mesh, &arm.rig, &compose_globals(&arm.rig, &local)?)?;
    for d in [0.8, 1.0, 1.25, 1.5] {
        let pose = compose_globals(&arm.rig, &attach_dilation(&local, elbow, d)?)?;
        let out = deform_multivector(&arm.mesh, &arm.rig, &pose)?;
        let moved = out
            .iter()
            .zip(&rest)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        println!("d = {d:<4}  max displacement {moved:.4}");
    }
    match attach_dilation(&local, elbow, 0.0) {
        Err(e) => println!("d = 0     {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
