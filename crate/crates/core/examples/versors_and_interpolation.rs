//! Rotors, translators and dilators, and blending motors two ways.

use std::f64::consts::FRAC_PI_2;

use cga_surgery::cga::*;
use cga_surgery::error::CgaError;

fn main() -> Result<(), CgaError> {
    let p = Vec3::new(1.0, 0.0, 0.0);
    let r = Versor::rotor(&Vec3::z(), FRAC_PI_2)?;
    let t = Versor::translator(&Vec3::new(0.0, 0.0, 3.0));
    let d = Versor::dilator(2.0)?;
    println!("R p       = {:?}", r.apply_point(&p)?);
    println!("T p       = {:?}", t.apply_point(&p)?);
    println!("D p       = {:?}", d.apply_point(&p)?);
    // compose applies the right-hand versor first
    println!(
        "(T∘R∘D) p = {:?}",
        t.compose(&r).compose(&d).apply_point(&p)?
    );

    let a = Versor::identity();
    let b = Versor::translator(&Vec3::new(2.0, 0.0, 0.0)).compose(&Versor::rotor(&Vec3::z(), 2.5)?);
    println!("log(b)    = {:?}", mv_log(&b)?);
    println!("{:>5} {:>30} {:>30}", "alpha", "linear", "log");
    for i in 0..=4 {
        let alpha = i as f64 / 4.0;
        let lin = interp(&a, &b, alpha, BlendMode::Linear)?.apply_point(&p)?;
        let log = interp(&a, &b, alpha, BlendMode::Log)?.apply_point(&p)?;
        println!("{alpha:>5.2} {:>30} {:>30}", fmt(&lin), fmt(&log));
    }
    Ok(())
}

fn fmt(v: &Vec3) -> String {
    format!("({:.3}, {:.3}, {:.3})", v.x, v.y, v.z)
}
