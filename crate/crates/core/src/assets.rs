//! Generators for the bundled test assets.
//!
//! Every file under `assets/` is produced by [`write_all`]; a test checks the
//! files on disk still match.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cga::Vec3;
use crate::error::Error;
use crate::io::{rig_to_string, trajectory_to_string, RigAsset, ScalpelTrajectory};
use crate::mesh::{Face, SkinnedMesh, Weights};
use crate::rig::{AnimationClip, Rig, Trs};
use crate::surgery::{cut, Backend, CutPlane, ScalpelState};

/// Counts recorded for one asset file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub vertices: usize,
    pub faces: usize,
    pub bones: usize,
    pub clips: Vec<String>,
}

/// Regression cut on the arm asset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinnedCut {
    pub file: String,
    /// `[nx, ny, nz, d]` with a unit normal.
    pub plane: [f64; 4],
    pub intersection_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub assets: Vec<ManifestEntry>,
    pub trajectories: Vec<String>,
    pub pinned_cut: PinnedCut,
}

fn x_axis() -> Vec3 {
    Vec3::x()
}

fn keyed(entries: &[(usize, Trs)]) -> BTreeMap<usize, Trs> {
    entries.iter().copied().collect()
}

fn single_bone_rig() -> Rig {
    Rig::from_bind_pose(&[(None, "root", Trs::identity())]).expect("valid rig")
}

/// Unit cube `[0,1]³`: 8 vertices, 12 outward triangles, one bone.
pub fn cube() -> RigAsset {
    let vertices = [
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 1.0],
        [1.0, 1.0, 1.0],
        [0.0, 1.0, 1.0],
    ]
    .iter()
    .map(|v| Vec3::from(*v))
    .collect();
    let faces = vec![
        [0, 2, 1],
        [0, 3, 2],
        [4, 5, 6],
        [4, 6, 7],
        [0, 1, 5],
        [0, 5, 4],
        [3, 7, 6],
        [3, 6, 2],
        [0, 4, 7],
        [0, 7, 3],
        [1, 2, 6],
        [1, 6, 5],
    ];
    let rig = single_bone_rig();
    let mesh = SkinnedMesh::rigid(vertices, faces, 0).expect("valid cube");
    let clips = vec![AnimationClip::bind_pose(&rig).expect("bind clip")];
    RigAsset { rig, mesh, clips }
}

fn tube(
    rings: usize,
    segments: usize,
    step: f64,
    radius: impl Fn(usize) -> f64,
) -> (Vec<Vec3>, Vec<Face>) {
    let mut v = Vec::with_capacity(rings * segments);
    for i in 0..rings {
        let r = radius(i);
        for j in 0..segments {
            let (s, c) = (TAU * j as f64 / segments as f64).sin_cos();
            v.push(Vec3::new(r * c, r * s, step * i as f64));
        }
    }
    let mut f = Vec::with_capacity(2 * (rings - 1) * segments);
    for i in 0..rings - 1 {
        for j in 0..segments {
            let a = i * segments + j;
            let b = i * segments + (j + 1) % segments;
            let c = a + segments;
            let d = b + segments;
            f.push([a, b, d]);
            f.push([a, d, c]);
        }
    }
    (v, f)
}

/// Upper arm, forearm and hand bones along +z with the elbow at `elbow` and
/// the wrist at `wrist`. Bone 0 is the unweighted root.
fn limb_rig(elbow: f64, wrist: f64) -> Rig {
    Rig::from_bind_pose(&[
        (None, "root", Trs::identity()),
        (Some(0), "shoulder", Trs::identity()),
        (
            Some(1),
            "elbow",
            Trs::translation(Vec3::new(0.0, 0.0, elbow)),
        ),
        (
            Some(2),
            "wrist",
            Trs::translation(Vec3::new(0.0, 0.0, wrist - elbow)),
        ),
    ])
    .expect("valid limb rig")
}

/// Ring weights: linear blends over `[e0, e1]` (shoulder to elbow) and
/// `[w0, w1]` (elbow to wrist), in ring indices.
fn limb_weights(ring: usize, (e0, e1): (usize, usize), (w0, w1): (usize, usize)) -> Weights {
    let blend = |a: usize, b: usize, lo: usize, hi: usize| {
        let t = (ring - lo) as f64 / (hi - lo) as f64;
        Weights::from_pairs(&[(a, 1.0 - t), (b, t)]).expect("two bones")
    };
    match ring {
        r if r <= e0 => Weights::single(1),
        r if r < e1 => blend(1, 2, e0, e1),
        r if r <= w0 => Weights::single(2),
        r if r < w1 => blend(2, 3, w0, w1),
        _ => Weights::single(3),
    }
}

fn limb_clips(rig: &Rig, elbow: f64) -> Vec<AnimationClip> {
    let elbow_bind = Trs::translation(Vec3::new(0.0, 0.0, elbow));
    let bent = Trs {
        rotation: Trs::rotation(&x_axis(), 0.6).rotation,
        ..elbow_bind
    };
    let flex = AnimationClip::new(
        rig,
        "flex",
        vec![
            (0.0, BTreeMap::new()),
            (1.0, keyed(&[(2, bent)])),
            (2.0, BTreeMap::new()),
        ],
    )
    .expect("flex clip");
    let swell = AnimationClip::new(
        rig,
        "swell",
        vec![
            (0.0, BTreeMap::new()),
            (
                1.0,
                keyed(&[(
                    2,
                    Trs {
                        scale: 1.2,
                        ..elbow_bind
                    },
                )]),
            ),
        ],
    )
    .expect("swell clip");
    vec![flex, swell]
}

/// Straight open tube, radius 0.25 and length 2.4: 25 rings of 24 vertices.
pub fn cylinder() -> RigAsset {
    let rings = 25;
    let segments = 24;
    let (vertices, faces) = tube(rings, segments, 0.1, |_| 0.25);
    let weights = (0..rings * segments)
        .map(|k| limb_weights(k / segments, (10, 14), (21, 23)))
        .collect();
    let rig = limb_rig(1.2, 2.2);
    let mesh = SkinnedMesh::new(vertices, faces, weights).expect("valid cylinder");
    let clips = limb_clips(&rig, 1.2);
    RigAsset { rig, mesh, clips }
}

/// Tapered open tube standing in for an arm: 30 rings of 32 vertices, radius
/// 0.3 at the shoulder down to 0.2 at the wrist.
pub fn arm() -> RigAsset {
    let rings = 30;
    let segments = 32;
    let (vertices, faces) = tube(rings, segments, 0.1, |i| {
        0.3 - 0.1 * i as f64 / (rings - 1) as f64
    });
    let weights = (0..rings * segments)
        .map(|k| limb_weights(k / segments, (11, 15), (25, 28)))
        .collect();
    let rig = limb_rig(1.3, 2.65);
    let mesh = SkinnedMesh::new(vertices, faces, weights).expect("valid arm");
    let clips = limb_clips(&rig, 1.3);
    RigAsset { rig, mesh, clips }
}

/// Flat square `[-1,1]²` in z = 0 split into 16×16 cells, skinned to a left
/// and a right bone with weights blending linearly in x.
pub fn plate() -> RigAsset {
    let n = 16;
    let h = 2.0 / n as f64;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    let mut weights = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        for j in 0..=n {
            vertices.push(Vec3::new(-1.0 + h * j as f64, -1.0 + h * i as f64, 0.0));
            let right = j as f64 / n as f64;
            weights.push(Weights::from_pairs(&[(1, 1.0 - right), (2, right)]).expect("two bones"));
        }
    }
    let mut faces = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            let a = i * (n + 1) + j;
            let b = a + 1;
            let c = a + n + 1;
            let d = c + 1;
            faces.push([a, b, d]);
            faces.push([a, d, c]);
        }
    }
    let rig = Rig::from_bind_pose(&[
        (None, "root", Trs::identity()),
        (Some(0), "left", Trs::translation(Vec3::new(-0.5, 0.0, 0.0))),
        (Some(0), "right", Trs::translation(Vec3::new(0.5, 0.0, 0.0))),
    ])
    .expect("valid plate rig");
    let lift = AnimationClip::new(
        &rig,
        "lift",
        vec![
            (0.0, BTreeMap::new()),
            (
                1.0,
                keyed(&[(
                    2,
                    Trs {
                        rotation: Trs::rotation(&Vec3::y(), -0.4).rotation,
                        ..Trs::translation(Vec3::new(0.5, 0.0, 0.0))
                    },
                )]),
            ),
        ],
    )
    .expect("lift clip");
    let mesh = SkinnedMesh::new(vertices, faces, weights).expect("valid plate");
    RigAsset {
        rig,
        mesh,
        clips: vec![lift],
    }
}

/// Scalpel sweeping across the plate, blade vertical, tip below the surface.
pub fn scalpel() -> ScalpelTrajectory {
    let state = |time: f64, x: f64, y: f64| ScalpelState {
        time,
        p_top: Vec3::new(x, y, 0.3),
        p_tip: Vec3::new(x, y, -0.1),
    };
    ScalpelTrajectory::new(vec![
        state(0.0, -0.61, -0.33),
        state(0.5, 0.07, 0.02),
        state(1.0, 0.52, 0.41),
    ])
    .expect("valid trajectory")
}

/// Regression plane for the arm: tilted, crossing the forearm.
pub fn arm_cut_plane() -> CutPlane {
    CutPlane::through(&Vec3::new(0.0, 0.0, 1.95), Vec3::new(0.3, 0.1, 1.0)).expect("unit normal")
}

fn entry(file: &str, a: &RigAsset) -> ManifestEntry {
    ManifestEntry {
        file: file.into(),
        vertices: a.mesh.vertices().len(),
        faces: a.mesh.faces().len(),
        bones: a.rig.len(),
        clips: a.clips.iter().map(|c| c.name.clone()).collect(),
    }
}

/// Every asset file as `(file name, contents)`, manifest last.
pub fn render_all() -> Result<Vec<(String, String)>, Error> {
    let rigs = [
        ("cube.json", cube()),
        ("cylinder.json", cylinder()),
        ("arm.json", arm()),
        ("plate.json", plate()),
    ];
    let mut out: Vec<(String, String)> = rigs
        .iter()
        .map(|(f, a)| (f.to_string(), rig_to_string(a)))
        .collect();
    out.push(("scalpel.json".into(), trajectory_to_string(&scalpel())));

    let plane = arm_cut_plane();
    let arm_cut = cut(&rigs[2].1.mesh, &plane, Backend::Ga)?;
    let n = plane.normal();
    let manifest = Manifest {
        assets: rigs.iter().map(|(f, a)| entry(f, a)).collect(),
        trajectories: vec!["scalpel.json".into()],
        pinned_cut: PinnedCut {
            file: "arm.json".into(),
            plane: [n.x, n.y, n.z, plane.d()],
            intersection_points: arm_cut.new_vertices.len(),
        },
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    out.push(("manifest.json".into(), text));
    Ok(out)
}

/// Writes every asset file into `dir`.
pub fn write_all(dir: impl AsRef<Path>) -> Result<(), Error> {
    let dir = dir.as_ref();
    for (name, text) in render_all()? {
        crate::io::write_text(&dir.join(name), &text)?;
    }
    Ok(())
}

/// Reads `manifest.json` from `dir`.
pub fn read_manifest(dir: impl AsRef<Path>) -> Result<Manifest, Error> {
    let path = dir.as_ref().join("manifest.json");
    let text = crate::io::read_text(&path)?;
    serde_json::from_str(&text)
        .map_err(|e| crate::error::ModelIoError::schema("manifest.json", e.to_string()).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let c = cylinder();
        assert_eq!(c.mesh.vertices().len(), 600);
        assert_eq!(c.mesh.faces().len(), 1152);
        assert!(c
            .mesh
            .influences()
            .iter()
            .all(|w| w.is_partition_of_unity()));
        assert_eq!(cube().mesh.faces().len(), 12);
        assert_eq!(plate().mesh.vertices().len(), 289);
        assert_eq!(arm().mesh.vertices().len(), 960);
    }

    #[test]
    fn cube_faces_point_outward() {
        let c = cube();
        let v = c.mesh.vertices();
        let centre = Vec3::repeat(0.5);
        for f in c.mesh.faces() {
            let n = (v[f[1]] - v[f[0]]).cross(&(v[f[2]] - v[f[0]]));
            assert!(n.dot(&(v[f[0]] - centre)) > 0.0, "{f:?}");
        }
    }
}
