//! Translation, rotation and uniform scale.

use nalgebra::{Matrix4, Quaternion, UnitQuaternion};

use crate::cga::{Vec3, Versor, UNIT_AXIS_TOL};
use crate::error::CgaError;

/// A similarity `x ↦ t + s R x`, kept in the raw form it was authored in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trs {
    pub translation: Vec3,
    /// Unit quaternion `[w, x, y, z]`.
    pub rotation: [f64; 4],
    pub scale: f64,
}

impl Default for Trs {
    fn default() -> Self {
        Self::identity()
    }
}

impl Trs {
    pub const fn identity() -> Self {
        Self {
            translation: Vec3::new(0.0, 0.0, 0.0),
            rotation: [1.0, 0.0, 0.0, 0.0],
            scale: 1.0,
        }
    }

    /// Validated constructor: unit quaternion within `UNIT_AXIS_TOL`, finite
    /// translation, `scale > 0`.
    pub fn new(translation: Vec3, rotation: [f64; 4], scale: f64) -> Result<Self, CgaError> {
        let t = Self {
            translation,
            rotation,
            scale,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn translation(t: Vec3) -> Self {
        Self {
            translation: t,
            ..Self::identity()
        }
    }

    /// Rotation by `phi` about a unit axis.
    pub fn rotation(axis: &Vec3, phi: f64) -> Self {
        let (s, c) = (0.5 * phi).sin_cos();
        Self {
            rotation: [c, axis.x * s, axis.y * s, axis.z * s],
            ..Self::identity()
        }
    }

    pub fn uniform_scale(s: f64) -> Self {
        Self {
            scale: s,
            ..Self::identity()
        }
    }

    pub fn validate(&self) -> Result<(), CgaError> {
        if !self.translation.iter().all(|c| c.is_finite()) {
            return Err(CgaError::DegenerateInput(
                "translation is not finite".into(),
            ));
        }
        let [w, x, y, z] = self.rotation;
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if !((n - 1.0).abs() <= UNIT_AXIS_TOL) {
            return Err(CgaError::DegenerateInput(format!(
                "quaternion has norm {n}"
            )));
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(CgaError::NonInvertibleDilation(self.scale));
        }
        Ok(())
    }

    pub fn quaternion(&self) -> UnitQuaternion<f64> {
        let [w, x, y, z] = self.rotation;
        UnitQuaternion::new_unchecked(Quaternion::new(w, x, y, z))
    }

    fn from_parts(translation: Vec3, q: UnitQuaternion<f64>, scale: f64) -> Self {
        Self {
            translation,
            rotation: [q.w, q.i, q.j, q.k],
            scale,
        }
    }

    /// `self ∘ rhs`: `rhs` is applied first.
    pub fn compose(&self, rhs: &Trs) -> Trs {
        let q = self.quaternion();
        Self::from_parts(
            self.translation + q * rhs.translation * self.scale,
            q * rhs.quaternion(),
            self.scale * rhs.scale,
        )
    }

    pub fn inverse(&self) -> Trs {
        let qi = self.quaternion().inverse();
        Self::from_parts(-(qi * self.translation) / self.scale, qi, 1.0 / self.scale)
    }

    pub fn apply(&self, x: &Vec3) -> Vec3 {
        self.translation + self.quaternion() * x * self.scale
    }

    /// Homogeneous matrix `TR · MR · S`.
    pub fn to_matrix(&self) -> Matrix4<f64> {
        let mut m = self.quaternion().to_homogeneous();
        let s = self.scale;
        for r in 0..3 {
            for c in 0..3 {
                m[(r, c)] *= s;
            }
            m[(r, 3)] = self.translation[r];
        }
        m
    }

    /// `T · R · D` as one motor.
    pub fn to_motor(&self) -> Result<Versor, CgaError> {
        trs_to_motor(&self.translation, self.rotation, self.scale)
    }
}

/// Motor `translator(t) · rotor(q) · dilator(s)`: scale, then rotate, then translate.
pub fn trs_to_motor(
    translation: &Vec3,
    rotation: [f64; 4],
    scale: f64,
) -> Result<Versor, CgaError> {
    let [w, x, y, z] = rotation;
    let t = Versor::translator(translation);
    let r = Versor::from_quaternion(w, x, y, z)?;
    let d = Versor::dilator(scale)?;
    Ok(t.compose(&r).compose(&d))
}
