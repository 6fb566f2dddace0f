//! Cuts the cube and the arm with planes and writes the halves as OBJ.

use cga_surgery::cga::Vec3;
use cga_surgery::io::export_obj;
use cga_surgery::surgery::*;

fn main() -> Result<(), cga_surgery::error::Error> {
    let out = std::env::temp_dir().join("cga-surgery-planar-cut");
    std::fs::create_dir_all(&out).expect("output directory");

    let cube = cga_surgery::assets::cube();
    let plane = CutPlane::new(Vec3::z(), 0.5)?;
    let r = cut(&cube.mesh, &plane, Backend::Ga)?;
    println!(
        "cube: {} new vertices, {} crossed faces, areas {:.3} + {:.3}",
        r.new_vertices.len(),
        r.crossed_faces,
        r.above.area(),
        r.below.area()
    );

    let arm = cga_surgery::assets::arm();
    let plane = cga_surgery::assets::arm_cut_plane();
    let r = cut(&arm.mesh, &plane, Backend::Ga)?;
    println!(
        "arm:  {} new vertices in {} loop(s)",
        r.new_vertices.len(),
        r.loops.len()
    );
    let w = &r.new_vertices[0];
    println!(
        "first new vertex at {:?} with weights {:?}",
        w.position, w.weights
    );
    export_obj(r.above.vertices(), r.above.faces(), out.join("above.obj"))?;
    export_obj(r.below.vertices(), r.below.faces(), out.join("below.obj"))?;
    println!("wrote {}", out.display());

    match cut(&cube.mesh, &CutPlane::new(Vec3::x(), 4.0)?, Backend::Ga) {
        Err(e) => println!("far plane: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
