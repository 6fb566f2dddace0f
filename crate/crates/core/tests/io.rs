mod common;

use cga_surgery::cga::BlendMode;
use cga_surgery::error::ModelIoError;
use cga_surgery::io::*;
use cga_surgery::rig::{deform_multivector, global_pose, AnimationClip};
use common::*;

#[test]
fn bundled_assets_match_their_generators() {
    for (name, text) in cga_surgery::assets::render_all().unwrap() {
        let on_disk = std::fs::read_to_string(assets_dir().join(&name)).unwrap();
        assert!(
            on_disk == text,
            "{name} is stale; run `cargo run --example generate_assets`"
        );
    }
}

#[test]
fn manifest_counts_match() {
    let manifest = cga_surgery::assets::read_manifest(assets_dir()).unwrap();
    for e in &manifest.assets {
        let a = asset(&e.file);
        assert_eq!(a.mesh.vertices().len(), e.vertices, "{}", e.file);
        assert_eq!(a.mesh.faces().len(), e.faces, "{}", e.file);
        assert_eq!(a.rig.len(), e.bones, "{}", e.file);
        let clips: Vec<&str> = a.clips.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(
            clips,
            e.clips.iter().map(String::as_str).collect::<Vec<_>>()
        );
    }
}

#[test]
fn save_load_save_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["cube.json", "cylinder.json", "arm.json", "plate.json"] {
        let a = asset(name);
        let p1 = dir.path().join(format!("1-{name}"));
        let p2 = dir.path().join(format!("2-{name}"));
        save_rig(&a, &p1).unwrap();
        let b = load_rig(&p1).unwrap();
        assert_eq!(a, b);
        save_rig(&b, &p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }
}

const TRIANGLE: &str = r#"{"version":1,
  "bones":[{"id":0,"name":"root","parent":null,
    "bind":{"translation":[0,0,0],"rotation":[1,0,0,0],"scale":1},
    "offset":{"translation":[0,0,0],"rotation":[1,0,0,0],"scale":1}}],
  "mesh":{"vertices":[[0,0,0],[1,0,0],[0,1,0]],"faces":[[0,1,2]],
    "influences":[[[0,1]],[[0,1]],[[0,1]]]},
  "clips":[{"name":"still","keyframes":[{"time":0,"bones":[
    {"bone":0,"translation":[0,0,0],"rotation":[1,0,0,0],"scale":1}]}]}]}"#;

#[test]
fn minimal_document_deforms_to_itself() {
    let a = parse_rig(TRIANGLE).unwrap();
    let pose = global_pose(&a.rig, &a.clips[0], 0.0, BlendMode::Log).unwrap();
    assert_eq!(
        deform_multivector(&a.mesh, &a.rig, &pose).unwrap(),
        a.mesh.vertices()
    );
}

#[test]
fn anisotropic_keyframe_scale_is_rejected() {
    let doc = TRIANGLE.replace(
        r#""rotation":[1,0,0,0],"scale":1}]}]}]}"#,
        r#""rotation":[1,0,0,0],"scale":[1,2,1]}]}]}]}"#,
    );
    match parse_rig(&doc) {
        Err(e @ ModelIoError::AnisotropicScale { .. }) => {
            assert_eq!(e.name(), "AnisotropicScaleError");
            assert!(
                e.to_string()
                    .contains("clips[0].keyframes[0].bones[0].scale"),
                "{e}"
            );
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn broken_documents_report_paths() {
    let cases = [
        (
            TRIANGLE.replace(r#""parent":null"#, r#""parent":3"#),
            "bones",
        ),
        (
            TRIANGLE.replace("[[0,1]],[[0,1]],[[0,1]]", "[[0,1]],[[0,1]]"),
            "mesh.influences",
        ),
        (
            TRIANGLE.replace("[[0,1]],[[0,1]],[[0,1]]", "[[0,1]],[[4,1]],[[0,1]]"),
            "mesh",
        ),
        (
            TRIANGLE.replace(r#"[1,0,0,0],"scale":1}}]"#, r#"[2,0,0,0],"scale":1}}]"#),
            "bones[0].offset",
        ),
        (
            TRIANGLE.replace(r#""time":0"#, r#""time":"zero""#),
            "clips[0].keyframes[0].time",
        ),
    ];
    for (doc, want) in cases {
        match parse_rig(&doc) {
            Err(ModelIoError::Schema { path, .. }) => {
                assert!(path.starts_with(want), "{path} vs {want}")
            }
            other => panic!("{want}: {other:?}"),
        }
    }
}

#[test]
fn off_by_a_little_weights_are_renormalized() {
    let doc = TRIANGLE.replacen("[[0,1]]", "[[0,0.9]]", 1);
    let a = parse_rig(&doc).unwrap();
    assert!(a.mesh.influences().iter().all(|w| w.sum() == 1.0));
}

#[test]
fn cube_obj_has_eight_vertices_and_twelve_faces() {
    let cube = asset("cube.json");
    let text = obj_to_string(cube.mesh.vertices(), cube.mesh.faces());
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 8);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 12);
    let first_face = text.lines().position(|l| l.starts_with("f ")).unwrap();
    assert_eq!(first_face, 8);
}

#[test]
fn obj_round_trip_within_print_precision() {
    let a = asset("arm.json");
    let clip = a.clip("flex").unwrap();
    let pose = global_pose(&a.rig, clip, 0.77, BlendMode::Log).unwrap();
    let v = deform_multivector(&a.mesh, &a.rig, &pose).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("arm.obj");
    export_obj(&v, a.mesh.faces(), &path).unwrap();
    let (v2, f2) = read_obj(&path).unwrap();
    assert_eq!(f2, a.mesh.faces());
    for (p, q) in v.iter().zip(&v2) {
        assert!((p - q).amax() <= 5e-9 * p.amax().max(1.0));
    }
}

#[test]
fn missing_file_is_an_io_error() {
    let e = load_rig("/nonexistent/rig.json").unwrap_err();
    assert_eq!(e.name(), "IoError");
}

#[test]
fn trajectory_needs_increasing_times() {
    let bad = r#"{"states":[{"time":1,"p_top":[0,0,1],"p_tip":[0,0,0]},{"time":1,"p_top":[1,0,1],"p_tip":[1,0,0]}]}"#;
    assert_eq!(parse_trajectory(bad).unwrap_err().name(), "SchemaError");
    let t = load_trajectory(assets_dir().join("scalpel.json")).unwrap();
    assert_eq!(t.states().len(), 3);
    assert!(t.step(2).is_none());
}

#[test]
fn bind_clip_of_cube_is_bind_pose() {
    let cube = asset("cube.json");
    assert_eq!(cube.clips[0], AnimationClip::bind_pose(&cube.rig).unwrap());
}
