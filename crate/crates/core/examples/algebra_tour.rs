//! Points, spheres and planes in the conformal model.

use cga_surgery::cga::*;
use cga_surgery::error::CgaError;

fn main() -> Result<(), CgaError> {
    let x = Vec3::new(1.0, 2.0, 0.5);
    let y = Vec3::new(-0.5, 0.0, 2.0);
    let (px, py) = (up_project(&x), up_project(&y));
    println!("up(x)        = {px:?}");
    println!("up(x)·up(x)  = {:.3e}", (px * px).scalar_part());
    println!(
        "-2 up(x)·up(y) = {:.6}  |x-y|² = {:.6}",
        -2.0 * (px | py).scalar_part(),
        (x - y).norm_squared()
    );

    let s = make_sphere(&Vec3::new(0.0, 0.0, 1.0), 2.0)?;
    let (c, r) = sphere_center_radius(&s)?;
    println!("sphere: center {c:?} radius {r}");
    for p in [
        Vec3::new(0.0, 0.0, 3.0),
        Vec3::new(0.0, 0.0, 1.0),
        Vec3::new(5.0, 0.0, 0.0),
    ] {
        let ip = (s | up_project(&p)).scalar_part();
        let side = if ip.abs() < 1e-12 {
            "on"
        } else if ip > 0.0 {
            "inside"
        } else {
            "outside"
        };
        println!("  {p:?}: {side} ({ip:+.3})");
    }

    let plane = make_plane(&Vec3::new(0.0, 0.0, 2.0), 1.0)?;
    let (n, d) = plane_normal_distance(&plane)?;
    println!("plane: n {n:?} d {d}");
    println!(
        "signed distance of x: {:+.3}",
        (up_project(&x) | plane).scalar_part()
    );

    println!(
        "e∞ has no Euclidean image: {:?}",
        down_project(&E_INF).unwrap_err()
    );
    Ok(())
}
