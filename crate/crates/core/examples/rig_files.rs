//! Loads a rig document, reports what is in it and writes it back.

use cga_surgery::io::{load_rig, rig_to_string, save_rig};

fn main() -> Result<(), cga_surgery::error::Error> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../assets/arm.json").into());
    let asset = load_rig(&path)?;
    println!("{path}");
    for bone in asset.rig.bones() {
        let parent = bone
            .parent
            .map_or("-".to_string(), |p| asset.rig.bones()[p].name.clone());
        println!(
            "  bone {} {:<10} parent {:<10} bind {:?}",
            bone.id, bone.name, parent, bone.bind.translation
        );
    }
    println!(
        "  {} vertices, {} faces",
        asset.mesh.vertices().len(),
        asset.mesh.faces().len()
    );
    for clip in &asset.clips {
        let (start, end) = clip.duration();
        println!(
            "  clip {:<8} {} keyframes, {start:.2}..{end:.2}",
            clip.name,
            clip.keyframes().len()
        );
    }

    let copy = std::env::temp_dir().join("cga-surgery-rig-copy.json");
    save_rig(&asset, &copy)?;
    let same =
        std::fs::read_to_string(&copy).expect("read copy") == rig_to_string(&load_rig(&copy)?);
    println!("resaved to {} (stable: {same})", copy.display());

    if let Err(e) = cga_surgery::io::parse_rig(r#"{"version":1,"bones":[],"mesh":{}}"#) {
        println!("broken document: [{}] {e}", e.name());
    }
    Ok(())
}
