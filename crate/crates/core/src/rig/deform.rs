//! Skinning: the multivector pipeline and the matrix/quaternion oracle.

use nalgebra::{Matrix4, Quaternion, UnitQuaternion};
use rayon::prelude::*;

use crate::cga::{down_project, up_project, Vec3, Versor};
use crate::error::RigError;
use crate::mesh::{SkinnedMesh, Weights};

use super::skeleton::{AnimationClip, Rig};
use super::trs::Trs;

fn check_pose(mesh: &SkinnedMesh, rig: &Rig, pose_len: usize) -> Result<(), RigError> {
    if pose_len != rig.len() {
        return Err(RigError::PoseLength {
            expected: rig.len(),
            got: pose_len,
        });
    }
    mesh.validate_bones(rig.len())
}

/// `G · M_n · B_n` per bone.
pub fn skinning_versors(rig: &Rig, pose: &[Versor]) -> Result<Vec<Versor>, RigError> {
    if pose.len() != rig.len() {
        return Err(RigError::PoseLength {
            expected: rig.len(),
            got: pose.len(),
        });
    }
    let g = rig.root_inverse_motor();
    Ok(rig
        .bones()
        .iter()
        .zip(pose)
        .map(|(b, m)| g.compose(m).compose(b.offset_motor()))
        .collect())
}

fn deform_vertex(v: &Vec3, w: &Weights, skin: &[Versor]) -> Result<Vec3, RigError> {
    let x = up_project(v);
    let mut out = Vec3::zeros();
    for inf in w.iter() {
        out += down_project(&skin[inf.bone].sandwich(&x))? * inf.weight;
    }
    Ok(out)
}

/// `Σ w_n down(M_n B_n up(v) (M_n B_n)⁻¹)` per vertex: each sandwich is
/// projected down before the weighted sum.
pub fn deform_multivector(
    mesh: &SkinnedMesh,
    rig: &Rig,
    pose: &[Versor],
) -> Result<Vec<Vec3>, RigError> {
    check_pose(mesh, rig, pose.len())?;
    let skin = skinning_versors(rig, pose)?;
    mesh.vertices()
        .iter()
        .zip(mesh.influences())
        .map(|(v, w)| deform_vertex(v, w, &skin))
        .collect()
}

/// Same as [`deform_multivector`], evaluating vertices on the rayon pool.
/// The result is bit-identical to the sequential version.
pub fn deform_multivector_par(
    mesh: &SkinnedMesh,
    rig: &Rig,
    pose: &[Versor],
) -> Result<Vec<Vec3>, RigError> {
    check_pose(mesh, rig, pose.len())?;
    let skin = skinning_versors(rig, pose)?;
    mesh.vertices()
        .par_iter()
        .zip(mesh.influences().par_iter())
        .map(|(v, w)| deform_vertex(v, w, &skin))
        .collect()
}

/// Variant that sums the weighted conformal points and projects once.
pub fn deform_multivector_blend_points(
    mesh: &SkinnedMesh,
    rig: &Rig,
    pose: &[Versor],
) -> Result<Vec<Vec3>, RigError> {
    check_pose(mesh, rig, pose.len())?;
    let skin = skinning_versors(rig, pose)?;
    mesh.vertices()
        .iter()
        .zip(mesh.influences())
        .map(|(v, w)| {
            let x = up_project(v);
            let mut sum = crate::cga::Multivector::zero();
            for inf in w.iter() {
                sum += skin[inf.bone].sandwich(&x) * inf.weight;
            }
            Ok(down_project(&sum)?)
        })
        .collect()
}

/// Local bone matrices at time `k` using classical interpolation: linear
/// translation and scale, normalized linear quaternion blend. The root is the
/// identity.
pub fn oracle_local_matrices(
    rig: &Rig,
    clip: &AnimationClip,
    k: f64,
) -> Result<Vec<Matrix4<f64>>, RigError> {
    let kfs = clip.keyframes();
    if kfs.is_empty() {
        return Err(RigError::EmptyClip);
    }
    let (i, j, alpha) = clip.bracket(k);
    let (a, b) = (kfs[i].resolved(), kfs[j].resolved());
    Ok(rig
        .bones()
        .iter()
        .map(|bone| {
            if bone.parent.is_none() {
                return Matrix4::identity();
            }
            let n = bone.id;
            if i == j {
                return a[n].to_matrix();
            }
            lerp_trs(&a[n], &b[n], alpha).to_matrix()
        })
        .collect())
}

fn lerp_trs(a: &Trs, b: &Trs, alpha: f64) -> Trs {
    let qa = a.quaternion().into_inner();
    let mut qb = b.quaternion().into_inner();
    if qa.dot(&qb) < 0.0 {
        qb = -qb;
    }
    let q: Quaternion<f64> = qa * (1.0 - alpha) + qb * alpha;
    let q = UnitQuaternion::from_quaternion(q);
    Trs {
        translation: a.translation * (1.0 - alpha) + b.translation * alpha,
        rotation: [q.w, q.i, q.j, q.k],
        scale: a.scale * (1.0 - alpha) + b.scale * alpha,
    }
}

/// Matrix counterpart of [`super::attach_dilation`].
pub fn oracle_attach_scale(
    local: &[Matrix4<f64>],
    bone: usize,
    d: f64,
) -> Result<Vec<Matrix4<f64>>, RigError> {
    if !(d > 0.0) {
        return Err(crate::error::CgaError::NonInvertibleDilation(d).into());
    }
    let mut out = local.to_vec();
    let m = out.get_mut(bone).ok_or(RigError::UnknownBone(bone))?;
    *m *= Matrix4::new_scaling(d);
    Ok(out)
}

/// `T_i = T_parent · t_i`, parents first.
pub fn oracle_compose_globals(
    rig: &Rig,
    local: &[Matrix4<f64>],
) -> Result<Vec<Matrix4<f64>>, RigError> {
    if local.len() != rig.len() {
        return Err(RigError::PoseLength {
            expected: rig.len(),
            got: local.len(),
        });
    }
    let mut out: Vec<Matrix4<f64>> = Vec::with_capacity(local.len());
    for (bone, m) in rig.bones().iter().zip(local) {
        let g = match bone.parent {
            None => *m,
            Some(p) => out[p] * m,
        };
        out.push(g);
    }
    Ok(out)
}

/// Global bone matrices at time `k` for the oracle.
pub fn oracle_pose_matrices(
    rig: &Rig,
    clip: &AnimationClip,
    k: f64,
) -> Result<Vec<Matrix4<f64>>, RigError> {
    oracle_compose_globals(rig, &oracle_local_matrices(rig, clip, k)?)
}

/// Classical linear blend skinning `Σ w_n G T_n O_n v` in homogeneous coordinates.
pub fn deform_matrix_oracle(
    mesh: &SkinnedMesh,
    rig: &Rig,
    pose_matrices: &[Matrix4<f64>],
) -> Result<Vec<Vec3>, RigError> {
    check_pose(mesh, rig, pose_matrices.len())?;
    let g = rig.root_inverse().to_matrix();
    let skin: Vec<Matrix4<f64>> = rig
        .bones()
        .iter()
        .zip(pose_matrices)
        .map(|(b, t)| g * t * b.offset.to_matrix())
        .collect();
    Ok(mesh
        .vertices()
        .iter()
        .zip(mesh.influences())
        .map(|(v, w)| {
            let h = v.push(1.0);
            let mut out = Vec3::zeros();
            for inf in w.iter() {
                let p = skin[inf.bone] * h;
                out += p.xyz() / p.w * inf.weight;
            }
            out
        })
        .collect())
}
