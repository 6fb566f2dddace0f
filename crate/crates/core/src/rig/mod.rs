//! Bone hierarchies, keyframe poses and skinning.

mod deform;
mod pose;
mod skeleton;
mod trs;

pub use deform::{
    deform_matrix_oracle, deform_multivector, deform_multivector_blend_points,
    deform_multivector_par, oracle_attach_scale, oracle_compose_globals, oracle_local_matrices,
    oracle_pose_matrices, skinning_versors,
};
pub use pose::{attach_dilation, compose_globals, global_pose, local_pose};
pub use skeleton::{AnimationClip, Bone, KeyMotors, Keyframe, Rig};
pub use trs::{trs_to_motor, Trs};
