//! Keyframe interpolation and the bone hierarchy recursion.

use crate::cga::{interp, BlendMode, Versor};
use crate::error::RigError;

use super::skeleton::{AnimationClip, KeyMotors, Rig};

/// Flips `b` to the hemisphere of `a` so the blend takes the short way round.
fn align_rotor(a: &Versor, b: &Versor) -> Result<Versor, RigError> {
    if a.mv().scalar_product(&b.mv().reverse()) < 0.0 {
        Ok(Versor::from_multivector(-*b.mv(), b.kind())?)
    } else {
        Ok(*b)
    }
}

fn blend_keys(
    a: &KeyMotors,
    b: &KeyMotors,
    alpha: f64,
    mode: BlendMode,
) -> Result<Versor, RigError> {
    let t = interp(&a.translator, &b.translator, alpha, mode)?;
    let r = interp(&a.rotor, &align_rotor(&a.rotor, &b.rotor)?, alpha, mode)?;
    let d = interp(&a.dilator, &b.dilator, alpha, mode)?;
    Ok(t.compose(&r).compose(&d))
}

/// Local motor of every bone at time `k`. Translation, rotation and dilation
/// are blended separately and recombined as `T · R · D`. The root is the
/// identity.
pub fn local_pose(
    rig: &Rig,
    clip: &AnimationClip,
    k: f64,
    mode: BlendMode,
) -> Result<Vec<Versor>, RigError> {
    let kfs = clip.keyframes();
    if kfs.is_empty() {
        return Err(RigError::EmptyClip);
    }
    let (i, j, alpha) = clip.bracket(k);
    let (a, b) = (kfs[i].motors(), kfs[j].motors());
    if a.len() != rig.len() {
        return Err(RigError::PoseLength {
            expected: rig.len(),
            got: a.len(),
        });
    }
    rig.bones()
        .iter()
        .map(|bone| {
            if bone.parent.is_none() {
                return Ok(Versor::identity());
            }
            let n = bone.id;
            if i == j {
                Ok(a[n].motor)
            } else {
                blend_keys(&a[n], &b[n], alpha, mode)
            }
        })
        .collect()
}

/// Right-multiplies one bone's local motor by `dilator(d)`.
pub fn attach_dilation(local: &[Versor], bone: usize, d: f64) -> Result<Vec<Versor>, RigError> {
    let dil = Versor::dilator(d)?;
    let mut out = local.to_vec();
    let m = out.get_mut(bone).ok_or(RigError::UnknownBone(bone))?;
    *m = m.compose(&dil);
    Ok(out)
}

/// Global motors `M_i = M_parent · local_i`, parents first.
pub fn compose_globals(rig: &Rig, local: &[Versor]) -> Result<Vec<Versor>, RigError> {
    if local.len() != rig.len() {
        return Err(RigError::PoseLength {
            expected: rig.len(),
            got: local.len(),
        });
    }
    let mut out: Vec<Versor> = Vec::with_capacity(local.len());
    for (bone, m) in rig.bones().iter().zip(local) {
        let g = match bone.parent {
            None => *m,
            Some(p) => out[p].compose(m),
        };
        out.push(g);
    }
    Ok(out)
}

/// Global motor of every bone at time `k`.
pub fn global_pose(
    rig: &Rig,
    clip: &AnimationClip,
    k: f64,
    mode: BlendMode,
) -> Result<Vec<Versor>, RigError> {
    compose_globals(rig, &local_pose(rig, clip, k, mode)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cga::{Multivector, Vec3};
    use crate::rig::Trs;
    use std::collections::BTreeMap;

    fn chain() -> Rig {
        Rig::from_bind_pose(&[
            (None, "root", Trs::identity()),
            (Some(0), "a", Trs::translation(Vec3::new(1.0, 0.0, 0.0))),
            (Some(1), "b", Trs::translation(Vec3::new(0.0, 2.0, 0.0))),
        ])
        .unwrap()
    }

    #[test]
    fn root_is_identity_and_chain_adds_translations() {
        let rig = chain();
        let clip = AnimationClip::bind_pose(&rig).unwrap();
        let g = global_pose(&rig, &clip, 0.0, BlendMode::Linear).unwrap();
        assert_eq!(*g[0].mv(), Multivector::scalar(1.0));
        let leaf = Versor::translator(&Vec3::new(1.0, 2.0, 0.0));
        assert!(g[2].mv().max_abs_diff(leaf.mv()) < 1e-15);
    }

    #[test]
    fn exact_keyframe_has_no_residue() {
        let rig = chain();
        let key = Trs {
            translation: Vec3::new(0.5, 0.0, 0.0),
            scale: 1.2,
            ..Trs::rotation(&Vec3::z(), 0.3)
        };
        let clip = AnimationClip::new(
            &rig,
            "c",
            vec![(0.0, BTreeMap::new()), (1.0, BTreeMap::from([(1, key)]))],
        )
        .unwrap();
        for mode in [BlendMode::Linear, BlendMode::Log] {
            let l = local_pose(&rig, &clip, 1.0, mode).unwrap();
            assert_eq!(l[1], key.to_motor().unwrap());
        }
    }

    #[test]
    fn blends_pass_through_midpoint() {
        let rig = chain();
        let key = Trs::rotation(&Vec3::z(), 1.0);
        let clip = AnimationClip::new(
            &rig,
            "c",
            vec![
                (0.0, BTreeMap::from([(1, Trs::identity())])),
                (2.0, BTreeMap::from([(1, key)])),
            ],
        )
        .unwrap();
        let half = Versor::rotor(&Vec3::z(), 0.5).unwrap();
        for mode in [BlendMode::Linear, BlendMode::Log] {
            let l = local_pose(&rig, &clip, 1.0, mode).unwrap();
            assert!(l[1].mv().max_abs_diff(half.mv()) < 1e-12, "{mode:?}");
        }
    }

    #[test]
    fn opposite_hemisphere_rotor_is_flipped() {
        let rig = chain();
        let q = Trs::rotation(&Vec3::z(), 0.4).rotation;
        let neg = Trs {
            rotation: [-q[0], -q[1], -q[2], -q[3]],
            ..Trs::identity()
        };
        let clip = AnimationClip::new(
            &rig,
            "c",
            vec![
                (0.0, BTreeMap::from([(1, Trs::identity())])),
                (1.0, BTreeMap::from([(1, neg)])),
            ],
        )
        .unwrap();
        let l = local_pose(&rig, &clip, 0.5, BlendMode::Linear).unwrap();
        let expected = Versor::rotor(&Vec3::z(), 0.2).unwrap();
        assert!(l[1].mv().max_abs_diff(expected.mv()) < 1e-12);
    }

    #[test]
    fn attach_dilation_identity_and_error() {
        let rig = chain();
        let clip = AnimationClip::bind_pose(&rig).unwrap();
        let l = local_pose(&rig, &clip, 0.0, BlendMode::Linear).unwrap();
        let same = attach_dilation(&l, 2, 1.0).unwrap();
        assert!(same[2].mv().max_abs_diff(l[2].mv()) < 1e-15);
        assert!(attach_dilation(&l, 2, 0.0).is_err());
        assert_eq!(attach_dilation(&l, 9, 2.0), Err(RigError::UnknownBone(9)));
    }
}
