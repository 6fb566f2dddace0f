//! Drags the scalpel across the plate and opens the incision.

use cga_surgery::surgery::tear;

fn main() -> Result<(), cga_surgery::error::Error> {
    let plate = cga_surgery::assets::plate();
    let trajectory = cga_surgery::assets::scalpel();
    for i in 0..trajectory.states().len() - 1 {
        let (a, b) = trajectory.step(i).expect("step");
        let r = tear(&plate.mesh, a, b, 0.05)?;
        println!(
            "step {i}: t {:.2}->{:.2}, {} path points, {} faces in the strip, {} -> {} faces",
            a.time,
            b.time,
            r.path.len(),
            r.strip.len(),
            plate.mesh.faces().len(),
            r.mesh.faces().len()
        );
        println!(
            "        entries at {:?} and {:?}",
            r.entries[0].position, r.entries[1].position
        );
    }
    Ok(())
}
