//! JSON rig documents: bones, skinned mesh and clips in one file.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cga::Vec3;
use crate::error::ModelIoError;
use crate::mesh::{SkinnedMesh, Weights};
use crate::rig::{AnimationClip, Bone, Rig, Trs};

use super::{read_text, write_text};

pub const FORMAT_VERSION: u32 = 1;
/// Weight sums further than this from 1 are rescaled on load.
pub const RENORMALIZE_ABOVE: f64 = 1e-12;
/// Weight sums further than this from 1 are rescaled with a warning.
pub const WARN_ABOVE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RigDocument {
    version: u32,
    bones: Vec<BoneDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root_inverse: Option<TrsDoc>,
    mesh: MeshDoc,
    #[serde(default)]
    clips: Vec<ClipDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoneDoc {
    id: usize,
    name: String,
    parent: Option<usize>,
    bind: TrsDoc,
    offset: TrsDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ScaleDoc {
    Uniform(f64),
    Axes([f64; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrsDoc {
    translation: [f64; 3],
    rotation: [f64; 4],
    scale: ScaleDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeshDoc {
    vertices: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
    influences: Vec<Vec<(usize, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClipDoc {
    name: String,
    keyframes: Vec<KeyframeDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KeyframeDoc {
    time: f64,
    bones: Vec<BoneKeyDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoneKeyDoc {
    bone: usize,
    translation: [f64; 3],
    rotation: [f64; 4],
    scale: ScaleDoc,
}

/// Rig, mesh and clips loaded together.
#[derive(Debug, Clone, PartialEq)]
pub struct RigAsset {
    pub rig: Rig,
    pub mesh: SkinnedMesh,
    pub clips: Vec<AnimationClip>,
}

impl RigAsset {
    pub fn clip(&self, name: &str) -> Option<&AnimationClip> {
        self.clips.iter().find(|c| c.name == name)
    }
}

fn trs_from_doc(
    path: &str,
    translation: [f64; 3],
    rotation: [f64; 4],
    scale: ScaleDoc,
) -> Result<Trs, ModelIoError> {
    let s = match scale {
        ScaleDoc::Uniform(s) => s,
        ScaleDoc::Axes(v) => {
            if v[0] != v[1] || v[1] != v[2] {
                return Err(ModelIoError::AnisotropicScale {
                    path: format!("{path}.scale"),
                    scale: v,
                });
            }
            v[0]
        }
    };
    Trs::new(Vec3::from(translation), rotation, s)
        .map_err(|e| ModelIoError::schema(path, e.to_string()))
}

fn trs_to_doc(t: &Trs) -> TrsDoc {
    TrsDoc {
        translation: t.translation.into(),
        rotation: t.rotation,
        scale: ScaleDoc::Uniform(t.scale),
    }
}

fn weights_from_doc(i: usize, pairs: &[(usize, f64)]) -> Result<Weights, ModelIoError> {
    let path = format!("mesh.influences[{i}]");
    let w = Weights::from_pairs(pairs).map_err(|e| ModelIoError::schema(&path, e.to_string()))?;
    if w.is_empty() {
        return Err(ModelIoError::schema(
            path,
            "vertex has no nonzero influence",
        ));
    }
    let err = (w.sum() - 1.0).abs();
    if err > RENORMALIZE_ABOVE {
        if err > WARN_ABOVE {
            log::warn!("{path}: weights sum to {}; renormalized", w.sum());
        }
        return Ok(w.normalized());
    }
    Ok(w)
}

fn from_document(doc: RigDocument) -> Result<RigAsset, ModelIoError> {
    if doc.version != FORMAT_VERSION {
        return Err(ModelIoError::schema(
            "version",
            format!(
                "unsupported version {} (expected {FORMAT_VERSION})",
                doc.version
            ),
        ));
    }
    let mut bones = Vec::with_capacity(doc.bones.len());
    for (i, b) in doc.bones.iter().enumerate() {
        let p = format!("bones[{i}]");
        let bind = trs_from_doc(
            &format!("{p}.bind"),
            b.bind.translation,
            b.bind.rotation,
            b.bind.scale,
        )?;
        let offset = trs_from_doc(
            &format!("{p}.offset"),
            b.offset.translation,
            b.offset.rotation,
            b.offset.scale,
        )?;
        bones.push(
            Bone::new(b.id, b.parent, b.name.clone(), bind, offset)
                .map_err(|e| ModelIoError::schema(&p, e.to_string()))?,
        );
    }
    let root_inverse = match &doc.root_inverse {
        Some(t) => trs_from_doc("root_inverse", t.translation, t.rotation, t.scale)?,
        None => Trs::identity(),
    };
    let rig =
        Rig::new(bones, root_inverse).map_err(|e| ModelIoError::schema("bones", e.to_string()))?;

    let m = &doc.mesh;
    if m.influences.len() != m.vertices.len() {
        return Err(ModelIoError::schema(
            "mesh.influences",
            format!(
                "{} entries for {} vertices",
                m.influences.len(),
                m.vertices.len()
            ),
        ));
    }
    let weights = m
        .influences
        .iter()
        .enumerate()
        .map(|(i, p)| weights_from_doc(i, p))
        .collect::<Result<Vec<_>, _>>()?;
    let vertices = m.vertices.iter().map(|v| Vec3::from(*v)).collect();
    let mesh = SkinnedMesh::new(vertices, m.faces.clone(), weights)
        .map_err(|e| ModelIoError::schema("mesh", e.to_string()))?;
    mesh.validate_bones(rig.len())
        .map_err(|e| ModelIoError::schema("mesh.influences", e.to_string()))?;

    let mut clips = Vec::with_capacity(doc.clips.len());
    for (ci, c) in doc.clips.iter().enumerate() {
        let mut frames = Vec::with_capacity(c.keyframes.len());
        for (ki, k) in c.keyframes.iter().enumerate() {
            let mut keys = BTreeMap::new();
            for (bi, b) in k.bones.iter().enumerate() {
                let p = format!("clips[{ci}].keyframes[{ki}].bones[{bi}]");
                if b.bone >= rig.len() {
                    return Err(ModelIoError::schema(
                        format!("{p}.bone"),
                        format!("bone {} does not exist", b.bone),
                    ));
                }
                let trs = trs_from_doc(&p, b.translation, b.rotation, b.scale)?;
                if keys.insert(b.bone, trs).is_some() {
                    return Err(ModelIoError::schema(
                        p,
                        format!("bone {} keyed twice", b.bone),
                    ));
                }
            }
            frames.push((k.time, keys));
        }
        clips.push(
            AnimationClip::new(&rig, c.name.clone(), frames)
                .map_err(|e| ModelIoError::schema(format!("clips[{ci}]"), e.to_string()))?,
        );
    }
    Ok(RigAsset { rig, mesh, clips })
}

fn to_document(asset: &RigAsset) -> RigDocument {
    let rig = &asset.rig;
    let root_inverse =
        (*rig.root_inverse() != Trs::identity()).then(|| trs_to_doc(rig.root_inverse()));
    RigDocument {
        version: FORMAT_VERSION,
        bones: rig
            .bones()
            .iter()
            .map(|b| BoneDoc {
                id: b.id,
                name: b.name.clone(),
                parent: b.parent,
                bind: trs_to_doc(&b.bind),
                offset: trs_to_doc(&b.offset),
            })
            .collect(),
        root_inverse,
        mesh: MeshDoc {
            vertices: asset.mesh.vertices().iter().map(|v| (*v).into()).collect(),
            faces: asset.mesh.faces().to_vec(),
            influences: asset
                .mesh
                .influences()
                .iter()
                .map(|w| w.iter().map(|i| (i.bone, i.weight)).collect())
                .collect(),
        },
        clips: asset
            .clips
            .iter()
            .map(|c| ClipDoc {
                name: c.name.clone(),
                keyframes: c
                    .keyframes()
                    .iter()
                    .map(|k| KeyframeDoc {
                        time: k.time,
                        bones: k
                            .keys
                            .iter()
                            .map(|(&bone, t)| {
                                let d = trs_to_doc(t);
                                BoneKeyDoc {
                                    bone,
                                    translation: d.translation,
                                    rotation: d.rotation,
                                    scale: d.scale,
                                }
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

/// Parses a rig document.
pub fn parse_rig(text: &str) -> Result<RigAsset, ModelIoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: RigDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ModelIoError::schema(path, e.into_inner().to_string())
    })?;
    from_document(doc)
}

/// Serializes a rig document as compact JSON with a trailing newline.
pub fn rig_to_string(asset: &RigAsset) -> String {
    let mut s = serde_json::to_string(&to_document(asset)).expect("rig documents serialize");
    s.push('\n');
    s
}

pub fn load_rig(path: impl AsRef<Path>) -> Result<RigAsset, ModelIoError> {
    parse_rig(&read_text(path.as_ref())?)
}

pub fn save_rig(asset: &RigAsset, path: impl AsRef<Path>) -> Result<(), ModelIoError> {
    write_text(path.as_ref(), &rig_to_string(asset))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"version":1,
        "bones":[{"id":0,"name":"root","parent":null,
            "bind":{"translation":[0,0,0],"rotation":[1,0,0,0],"scale":1},
            "offset":{"translation":[0,0,0],"rotation":[1,0,0,0],"scale":1}}],
        "mesh":{"vertices":[[0,0,0],[1,0,0],[0,1,0]],"faces":[[0,1,2]],
            "influences":[[[0,1]],[[0,1]],[[0,1]]]}}"#;

    #[test]
    fn minimal_document_round_trips() {
        let a = parse_rig(MINIMAL).unwrap();
        assert_eq!(a.mesh.vertices().len(), 3);
        let s1 = rig_to_string(&a);
        let s2 = rig_to_string(&parse_rig(&s1).unwrap());
        assert_eq!(s1, s2);
    }

    #[test]
    fn anisotropic_scale_is_rejected() {
        let doc = MINIMAL.replacen(r#""scale":1}"#, r#""scale":[1,2,1]}"#, 1);
        match parse_rig(&doc) {
            Err(ModelIoError::AnisotropicScale { path, scale }) => {
                assert_eq!(path, "bones[0].bind.scale");
                assert_eq!(scale, [1.0, 2.0, 1.0]);
            }
            other => panic!("{other:?}"),
        }
        let equal = MINIMAL.replacen(r#""scale":1}"#, r#""scale":[2,2,2]}"#, 1);
        assert!(parse_rig(&equal).is_ok());
    }

    #[test]
    fn schema_errors_carry_paths() {
        let doc = MINIMAL.replace(r#""faces":[[0,1,2]]"#, r#""faces":[[0,1,"x"]]"#);
        match parse_rig(&doc) {
            Err(ModelIoError::Schema { path, .. }) => assert_eq!(path, "mesh.faces[0][2]"),
            other => panic!("{other:?}"),
        }
        let doc = MINIMAL.replace(r#""faces":[[0,1,2]]"#, r#""faces":[[0,1,7]]"#);
        assert!(matches!(parse_rig(&doc), Err(ModelIoError::Schema { .. })));
        let doc = MINIMAL.replace(r#""version":1"#, r#""version":1,"extra":0"#);
        assert!(matches!(parse_rig(&doc), Err(ModelIoError::Schema { .. })));
    }

    #[test]
    fn weights_are_renormalized() {
        let doc = MINIMAL.replacen("[[0,1]]", "[[0,0.5]]", 1);
        let a = parse_rig(&doc).unwrap();
        assert_eq!(a.mesh.influences()[0].sum(), 1.0);
    }
}
