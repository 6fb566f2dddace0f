//! Conformal geometric algebra Cl(4,1) for skinned-mesh animation and mesh
//! surgery.
//!
//! Bones are driven by motors with optional dilators. Meshes can be cut,
//! torn or drilled while keeping their skinning weights.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assets;
pub mod bench;
pub mod cga;
pub mod cli;
pub mod error;
pub mod io;
pub mod mesh;
pub mod rig;
pub mod surgery;
