//! Drills holes through the plate and the arm.

use cga_surgery::cga::Vec3;
use cga_surgery::surgery::{drill, DrillSpec};

fn main() -> Result<(), cga_surgery::error::Error> {
    let plate = cga_surgery::assets::plate();
    for r in [0.05, 0.2, 0.4] {
        let spec = DrillSpec::new(Vec3::new(0.1, 0.0, 1.0), Vec3::new(0.1, 0.0, -1.0), r)?;
        let out = drill(&plate.mesh, &spec, 8)?;
        println!(
            "plate r={r:<4}: {} rim points, residual {:.1e}, refined {:?}, area {:.4} -> {:.4}",
            out.intersection_points,
            out.rim_residual,
            out.split_affected,
            plate.mesh.area(),
            out.mesh.area()
        );
    }

    let arm = cga_surgery::assets::arm();
    let spec = DrillSpec::new(Vec3::new(-1.0, 0.0, 1.75), Vec3::new(1.0, 0.0, 1.75), 0.12)?;
    let out = drill(&arm.mesh, &spec, 8)?;
    println!(
        "arm: {} rim points across {} affected faces",
        out.intersection_points, out.affected_faces
    );

    let edge = DrillSpec::new(Vec3::new(0.95, 0.0, 1.0), Vec3::new(0.95, 0.0, -1.0), 0.2)?;
    if let Err(e) = drill(&plate.mesh, &edge, 8) {
        println!("near the border: {e}");
    }
    Ok(())
}
