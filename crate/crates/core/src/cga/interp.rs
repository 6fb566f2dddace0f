//! Linear and logarithmic blending of versors.

use super::series::{mv_exp, mv_log};
use super::versor::{Versor, VersorKind};
use crate::error::CgaError;

/// How keyframes are blended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlendMode {
    /// `(1-α) m1 + α m2`; used for poses generated on the fly.
    #[default]
    Linear,
    /// `m1 exp(α log(m1⁻¹ m2))`; used for stored animation.
    Log,
}

/// Whether a linear blend is rescaled to unit versor norm before use.
pub const RENORMALIZE_BLENDS: bool = true;

fn check_alpha(alpha: f64) -> Result<(), CgaError> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(CgaError::DegenerateInput(format!(
            "blend parameter {alpha} outside [0, 1]"
        )))
    }
}

fn blend_kind(m1: &Versor, m2: &Versor) -> VersorKind {
    if m1.kind() == m2.kind() {
        m1.kind()
    } else {
        VersorKind::Motor
    }
}

/// Linear blend with renormalization on.
pub fn interp_linear(m1: &Versor, m2: &Versor, alpha: f64) -> Result<Versor, CgaError> {
    interp_linear_with(m1, m2, alpha, RENORMALIZE_BLENDS)
}

/// Linear blend `(1-α) m1 + α m2`. With `renormalize`, the result is divided by
/// `sqrt(<V reverse(V)>_0)`. The endpoints return the inputs unchanged.
pub fn interp_linear_with(
    m1: &Versor,
    m2: &Versor,
    alpha: f64,
    renormalize: bool,
) -> Result<Versor, CgaError> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(*m1);
    }
    if alpha == 1.0 {
        return Ok(*m2);
    }
    let mv = *m1.mv() * (1.0 - alpha) + *m2.mv() * alpha;
    let v = Versor::from_multivector(mv, blend_kind(m1, m2))?;
    if renormalize {
        v.normalized()
    } else {
        Ok(v)
    }
}

/// Logarithmic blend `m1 exp(α log(m1⁻¹ m2))`. The endpoints return the inputs
/// unchanged. The blend follows the relative rotation as given, up to (but
/// excluding) a full turn; align hemispheres first for the short way round.
pub fn interp_log(m1: &Versor, m2: &Versor, alpha: f64) -> Result<Versor, CgaError> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(*m1);
    }
    if alpha == 1.0 {
        return Ok(*m2);
    }
    let rel = m1.inverse().compose(m2);
    let step = mv_exp(&(mv_log(&rel)? * alpha))?;
    Versor::from_multivector(*m1.mv() * step, blend_kind(m1, m2))
}

/// Blend with the given mode.
pub fn interp(m1: &Versor, m2: &Versor, alpha: f64, mode: BlendMode) -> Result<Versor, CgaError> {
    match mode {
        BlendMode::Linear => interp_linear(m1, m2, alpha),
        BlendMode::Log => interp_log(m1, m2, alpha),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cga::conformal::Vec3;

    #[test]
    fn endpoints_are_exact() {
        let a = Versor::rotor(&Vec3::x(), 0.3).unwrap();
        let b = Versor::rotor(&Vec3::y(), 1.1).unwrap();
        for f in [interp_linear, interp_log] {
            assert_eq!(f(&a, &b, 0.0).unwrap(), a);
            assert_eq!(f(&a, &b, 1.0).unwrap(), b);
        }
    }

    #[test]
    fn half_angle_on_common_axis() {
        let a = Versor::rotor(&Vec3::z(), 0.0).unwrap();
        let b = Versor::rotor(&Vec3::z(), 1.0).unwrap();
        let half = Versor::rotor(&Vec3::z(), 0.5).unwrap();
        let l = interp_log(&a, &b, 0.5).unwrap();
        assert!(l.mv().max_abs_diff(half.mv()) < 1e-12);
        let n = interp_linear(&a, &b, 0.5).unwrap();
        assert!(n.mv().max_abs_diff(half.mv()) < 1e-12);
    }

    #[test]
    fn linear_blend_of_translators_is_a_translator() {
        let a = Versor::translator(&Vec3::new(1.0, 0.0, 0.0));
        let b = Versor::translator(&Vec3::new(0.0, 2.0, 0.0));
        let m = interp_linear(&a, &b, 0.25).unwrap();
        let expected = Versor::translator(&Vec3::new(0.75, 0.5, 0.0));
        assert!(m.mv().max_abs_diff(expected.mv()) < 1e-15);
        assert_eq!(m.kind(), VersorKind::Translator);
    }

    #[test]
    fn alpha_out_of_range() {
        let a = Versor::identity();
        assert!(interp_linear(&a, &a, 1.5).is_err());
        assert!(interp_log(&a, &a, f64::NAN).is_err());
    }
}
