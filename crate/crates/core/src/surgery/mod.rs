//! Planar cut, scalpel tear and cylindrical drill on skinned meshes.

pub mod cut;
pub mod drill;
mod predicates;
pub mod tear;
pub mod topology;
mod weights;

pub use cut::{cut, CutResult};
pub use drill::{
    drill, edge_cylinder_alpha, point_in_cylinder, CylinderSide, DrillResult, DrillSpec,
};
pub use predicates::{
    classify_vertex, segment_plane_intersection, Backend, CutPlane, Side, EPS_ON,
};
pub use tear::{tear, ScalpelState, TearResult};
pub use weights::{
    barycentric, barycentric_weight, blend_weights, edge_weight, limit_influences, Host,
    NewVertexRecord,
};
