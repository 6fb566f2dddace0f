//! Regenerates the bundled assets.
//!
//! `cargo run --example generate_assets [DIR]` (default: the workspace `assets/`).

use std::path::PathBuf;

fn main() -> Result<(), cga_surgery::error::Error> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../assets")));
    std::fs::create_dir_all(&dir).expect("create asset directory");
    cga_surgery::assets::write_all(&dir)?;
    let manifest = cga_surgery::assets::read_manifest(&dir)?;
    for a in &manifest.assets {
        println!(
            "{:<14} {:>5} vertices {:>5} faces {} bones",
            a.file, a.vertices, a.faces, a.bones
        );
    }
    println!(
        "arm cut: {} intersection points",
        manifest.pinned_cut.intersection_points
    );
    Ok(())
}
