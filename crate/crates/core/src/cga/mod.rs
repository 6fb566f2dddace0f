//! Conformal geometric algebra Cl(4,1).

mod conformal;
mod interp;
mod multivector;
mod series;
mod versor;

pub use conformal::*;
pub use interp::{
    interp, interp_linear, interp_linear_with, interp_log, BlendMode, RENORMALIZE_BLENDS,
};
pub use multivector::{blade_grade, blade_name, Multivector, BLADES};
pub use series::{mv_exp, mv_log, TAYLOR_MAX_TERMS, TAYLOR_TOL};
pub use versor::{Versor, VersorKind, UNIT_AXIS_TOL};
