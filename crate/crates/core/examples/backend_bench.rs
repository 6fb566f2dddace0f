//! Times the cut subroutines on both backends.
//!
//! Build with `--release` for meaningful numbers.

use cga_surgery::bench::{bench_cut, bench_drill};
use cga_surgery::cga::Vec3;
use cga_surgery::surgery::DrillSpec;

fn main() -> Result<(), cga_surgery::error::Error> {
    let arm = cga_surgery::assets::arm();
    let report = bench_cut(&arm.mesh, &cga_surgery::assets::arm_cut_plane(), 7)?;
    println!(
        "{} vertices, {} faces, {} intersection points",
        report.config.vertices, report.config.faces, report.intersection_points
    );
    println!("{:<30} {:>10} {:>10}", "subroutine", "euclid ms", "ga ms");
    for row in &report.subroutines {
        println!(
            "{:<30} {:>10.4} {:>10.4}",
            row.subroutine, row.euclid_ms, row.ga_ms
        );
    }
    println!(
        "{:<30} {:>10.4} {:>10.4}",
        "total", report.totals.euclid_ms, report.totals.ga_ms
    );

    let spec = DrillSpec::new(Vec3::new(-1.0, 0.0, 1.75), Vec3::new(1.0, 0.0, 1.75), 0.12)?;
    let d = bench_drill(&arm.mesh, &spec, 8, 5)?;
    println!(
        "drill: {} points in {:.3} ms ({:.4} ms/point)",
        d.intersection_points, d.median_ms, d.ms_per_point
    );
    Ok(())
}
