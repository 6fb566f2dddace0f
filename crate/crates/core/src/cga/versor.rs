//! Rotors, translators, dilators and their products.

use super::conformal::{down_project, euclidean, up_project, Vec3, EPS0, E_INF, E_INF_O, I3};
use super::multivector::Multivector;
use crate::error::CgaError;

/// Tolerance on the length of a rotation axis.
pub const UNIT_AXIS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum VersorKind {
    Rotor,
    Translator,
    Dilator,
    Motor,
}

/// An invertible even multivector used as a transformation, carried together
/// with its inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Versor {
    mv: Multivector,
    inv: Multivector,
    kind: VersorKind,
}

impl Versor {
    pub fn identity() -> Self {
        Self {
            mv: Multivector::scalar(1.0),
            inv: Multivector::scalar(1.0),
            kind: VersorKind::Motor,
        }
    }

    /// `R = cos(φ/2) - u I3 sin(φ/2)`: rotation by `phi` about the unit `axis`.
    pub fn rotor(axis: &Vec3, phi: f64) -> Result<Self, CgaError> {
        let len = axis.norm();
        if (len - 1.0).abs() > UNIT_AXIS_TOL {
            return Err(CgaError::DegenerateInput(format!(
                "rotation axis has length {len}"
            )));
        }
        let (s, c) = (0.5 * phi).sin_cos();
        let b = euclidean(axis) * I3;
        Ok(Self {
            mv: Multivector::scalar(c) - b * s,
            inv: Multivector::scalar(c) + b * s,
            kind: VersorKind::Rotor,
        })
    }

    /// Rotor of the unit quaternion `w + xi + yj + zk`.
    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Result<Self, CgaError> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if (n - 1.0).abs() > UNIT_AXIS_TOL {
            return Err(CgaError::DegenerateInput(format!(
                "quaternion has norm {n}"
            )));
        }
        let b = euclidean(&Vec3::new(x, y, z)) * I3;
        let s = Multivector::scalar(w);
        Ok(Self {
            mv: s - b,
            inv: s + b,
            kind: VersorKind::Rotor,
        })
    }

    /// `T = 1 - ½ t e_inf`.
    pub fn translator(t: &Vec3) -> Self {
        let h = euclidean(t) * E_INF * 0.5;
        Self {
            mv: Multivector::scalar(1.0) - h,
            inv: Multivector::scalar(1.0) + h,
            kind: VersorKind::Translator,
        }
    }

    /// `D = 1 + (1-d)/(1+d) e_inf ∧ e_o`, uniform scaling by `d` about the origin.
    pub fn dilator(d: f64) -> Result<Self, CgaError> {
        if !(d > 0.0) || !d.is_finite() {
            return Err(CgaError::NonInvertibleDilation(d));
        }
        let k = (1.0 - d) / (1.0 + d);
        let mv = Multivector::scalar(1.0) + E_INF_O * k;
        let inv = Multivector::scalar((1.0 + d) * (1.0 + d) / (4.0 * d))
            + E_INF_O * ((d * d - 1.0) / (4.0 * d));
        Ok(Self {
            mv,
            inv,
            kind: VersorKind::Dilator,
        })
    }

    /// Wrap an even multivector, inverting it as `reverse(m) / <m reverse(m)>_0`.
    pub fn from_multivector(mv: Multivector, kind: VersorKind) -> Result<Self, CgaError> {
        if !mv.is_even() {
            return Err(CgaError::DegenerateInput(
                "versor must have only even-grade components".into(),
            ));
        }
        let rev = mv.reverse();
        let n = (mv * rev).scalar_part();
        if !(n.abs() >= EPS0) || !n.is_finite() {
            return Err(CgaError::DegenerateInput(format!(
                "versor has norm {n:e} and cannot be inverted"
            )));
        }
        Ok(Self {
            mv,
            inv: rev * (1.0 / n),
            kind,
        })
    }

    pub fn mv(&self) -> &Multivector {
        &self.mv
    }

    pub fn inverse_mv(&self) -> &Multivector {
        &self.inv
    }

    pub fn kind(&self) -> VersorKind {
        self.kind
    }

    pub fn inverse(&self) -> Self {
        Self {
            mv: self.inv,
            inv: self.mv,
            kind: self.kind,
        }
    }

    /// Geometric product `self * rhs`: `rhs` acts first.
    pub fn compose(&self, rhs: &Versor) -> Versor {
        let mv = self.mv * rhs.mv;
        if self.kind == rhs.kind && self.kind != VersorKind::Motor {
            return Self {
                mv,
                inv: rhs.inv * self.inv,
                kind: self.kind,
            };
        }
        Self::from_multivector(mv, VersorKind::Motor).unwrap_or(Self {
            mv,
            inv: rhs.inv * self.inv,
            kind: VersorKind::Motor,
        })
    }

    /// Sandwich `M O M⁻¹`.
    pub fn sandwich(&self, o: &Multivector) -> Multivector {
        self.mv * *o * self.inv
    }

    /// Transform a Euclidean point through up-projection, sandwich and down-projection.
    pub fn apply_point(&self, x: &Vec3) -> Result<Vec3, CgaError> {
        down_project(&self.sandwich(&up_project(x)))
    }

    /// Divide by `sqrt(|<V reverse(V)>_0|)` so the scalar norm is ±1.
    pub fn normalized(&self) -> Result<Self, CgaError> {
        let n = self.mv.norm_sq();
        if !(n.abs() >= EPS0) {
            return Err(CgaError::DegenerateInput(format!(
                "cannot normalize versor with norm {n:e}"
            )));
        }
        let s = n.abs().sqrt();
        Ok(Self {
            mv: self.mv * (1.0 / s),
            inv: self.inv * s,
            kind: self.kind,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cga::conformal::{make_plane, plane_normal_distance};
    use std::f64::consts::PI;

    fn close(a: &Vec3, b: &Vec3, tol: f64) -> bool {
        (a - b).amax() <= tol
    }

    #[test]
    fn identities() {
        let one = Multivector::scalar(1.0);
        assert_eq!(*Versor::rotor(&Vec3::x(), 0.0).unwrap().mv(), one);
        assert_eq!(*Versor::translator(&Vec3::zeros()).mv(), one);
        assert_eq!(*Versor::dilator(1.0).unwrap().mv(), one);
    }

    #[test]
    fn zero_dilation_is_rejected() {
        assert_eq!(
            Versor::dilator(0.0),
            Err(CgaError::NonInvertibleDilation(0.0))
        );
        assert!(Versor::dilator(-1.0).is_err());
    }

    #[test]
    fn closed_form_inverses() {
        for v in [
            Versor::rotor(&Vec3::new(0.0, 0.6, 0.8), 1.3).unwrap(),
            Versor::translator(&Vec3::new(1.0, -2.0, 0.5)),
            Versor::dilator(2.5).unwrap(),
        ] {
            let p = *v.mv() * *v.inverse_mv();
            assert!(p.max_abs_diff(&Multivector::scalar(1.0)) < 1e-15, "{p:?}");
        }
    }

    #[test]
    fn half_turn_about_z() {
        let r = Versor::rotor(&Vec3::z(), PI).unwrap();
        let y = r.apply_point(&Vec3::x()).unwrap();
        assert!(close(&y, &Vec3::new(-1.0, 0.0, 0.0), 1e-15));
    }

    #[test]
    fn translate_origin() {
        let t = Versor::translator(&Vec3::x());
        assert_eq!(t.apply_point(&Vec3::zeros()).unwrap(), Vec3::x());
    }

    #[test]
    fn dilate_point() {
        let d = Versor::dilator(2.0).unwrap();
        let y = d.apply_point(&Vec3::new(1.0, 1.0, 1.0)).unwrap();
        assert!(close(&y, &Vec3::new(2.0, 2.0, 2.0), 1e-14));
    }

    #[test]
    fn translate_plane() {
        let t = Versor::translator(&Vec3::new(0.0, 0.0, 5.0));
        let p = t.sandwich(&make_plane(&Vec3::z(), 1.0).unwrap());
        let (n, d) = plane_normal_distance(&p).unwrap();
        assert!(close(&n, &Vec3::z(), 1e-15));
        assert!((d - 6.0).abs() < 1e-14);
    }

    #[test]
    fn quaternion_matches_axis_angle() {
        let phi: f64 = 0.9;
        let axis = Vec3::new(1.0, 2.0, -2.0) / 3.0;
        let q = axis * (0.5 * phi).sin();
        let a = Versor::from_quaternion((0.5 * phi).cos(), q.x, q.y, q.z).unwrap();
        let b = Versor::rotor(&axis, phi).unwrap();
        assert!(a.mv().max_abs_diff(b.mv()) < 1e-15);
    }

    #[test]
    fn motor_inverse_via_reverse() {
        let m = Versor::translator(&Vec3::new(1.0, 2.0, 3.0))
            .compose(&Versor::rotor(&Vec3::y(), 0.4).unwrap())
            .compose(&Versor::dilator(0.7).unwrap());
        assert_eq!(m.kind(), VersorKind::Motor);
        let p = *m.mv() * *m.inverse_mv();
        assert!(p.max_abs_diff(&Multivector::scalar(1.0)) < 1e-14);
    }
}
