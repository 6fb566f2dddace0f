//! File formats: JSON rigs, OBJ meshes and scalpel trajectories.

mod obj;
mod rig_doc;
mod trajectory;

use std::path::Path;

use crate::error::ModelIoError;

pub use obj::{export_obj, format_g9, obj_to_string, parse_obj, read_obj};
pub use rig_doc::{
    load_rig, parse_rig, rig_to_string, save_rig, RigAsset, FORMAT_VERSION, RENORMALIZE_ABOVE,
    WARN_ABOVE,
};
pub use trajectory::{
    load_trajectory, parse_trajectory, save_trajectory, trajectory_to_string, ScalpelTrajectory,
};

pub(crate) fn read_text(path: &Path) -> Result<String, ModelIoError> {
    std::fs::read_to_string(path).map_err(|source| ModelIoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<(), ModelIoError> {
    std::fs::write(path, text).map_err(|source| ModelIoError::Io {
        path: path.to_path_buf(),
        source,
    })
}
