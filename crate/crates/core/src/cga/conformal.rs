//! Conformal model: null basis, points, spheres, planes and duality.

use nalgebra::Vector3;

use super::multivector::Multivector;
use crate::error::CgaError;

/// Euclidean 3-vector.
pub type Vec3 = Vector3<f64>;

/// Threshold for null-weight and degenerate-input checks.
pub const EPS0: f64 = 1e-12;

pub const E1: Multivector = Multivector::blade(0b00001);
pub const E2: Multivector = Multivector::blade(0b00010);
pub const E3: Multivector = Multivector::blade(0b00100);
pub const E_PLUS: Multivector = Multivector::blade(0b01000);
pub const E_MINUS: Multivector = Multivector::blade(0b10000);

/// `e_o = (e- - e+) / 2`, the origin.
pub const E_O: Multivector = Multivector::vector(0.0, 0.0, 0.0, -0.5, 0.5);
/// `e_inf = e- + e+`, the point at infinity.
pub const E_INF: Multivector = Multivector::vector(0.0, 0.0, 0.0, 1.0, 1.0);
/// Pseudoscalar `I = e1 e2 e3 e+ e- = e1 ∧ e2 ∧ e3 ∧ e_inf ∧ e_o`.
pub const PSEUDOSCALAR: Multivector = Multivector::blade(0b11111);
/// Euclidean pseudoscalar `I3 = e1 e2 e3`.
pub const I3: Multivector = Multivector::blade(0b00111);
/// `e_inf ∧ e_o`, which equals `e+ e-`.
pub const E_INF_O: Multivector = Multivector::blade(0b11000);

/// Euclidean vector `x1 e1 + x2 e2 + x3 e3`.
pub fn euclidean(x: &Vec3) -> Multivector {
    Multivector::vector(x.x, x.y, x.z, 0.0, 0.0)
}

/// Grade-1 element given in the null basis: `x + inf e_inf + o e_o`.
pub fn null_vector(x: &Vec3, inf: f64, o: f64) -> Multivector {
    // e_inf = e+ + e-, e_o = (e- - e+)/2
    Multivector::vector(x.x, x.y, x.z, inf - 0.5 * o, inf + 0.5 * o)
}

/// Up-projection `X = x + ½x² e_inf + e_o`.
pub fn up_project(x: &Vec3) -> Multivector {
    null_vector(x, 0.5 * x.norm_squared(), 1.0)
}

/// Coefficient of `e_o` in the grade-1 part (null basis).
pub fn origin_weight(m: &Multivector) -> f64 {
    m.get(0b10000) - m.get(0b01000)
}

/// Coefficient of `e_inf` in the grade-1 part (null basis).
pub fn infinity_weight(m: &Multivector) -> f64 {
    0.5 * (m.get(0b10000) + m.get(0b01000))
}

/// Down-projection with the default threshold.
pub fn down_project(m: &Multivector) -> Result<Vec3, CgaError> {
    down_project_eps(m, EPS0)
}

/// Normalize the `e_o` weight to 1 and return the Euclidean part. Any residual
/// deviation from a null vector is ignored.
pub fn down_project_eps(m: &Multivector, eps: f64) -> Result<Vec3, CgaError> {
    let w = origin_weight(m);
    if !(w.abs() >= eps) {
        return Err(CgaError::NullWeight { weight: w, eps });
    }
    let x = Vec3::new(m.get(0b00001), m.get(0b00010), m.get(0b00100));
    // The weight is a difference of the e+ and e- coefficients; a weight that is
    // 1 up to that subtraction's rounding is taken as exactly 1.
    let rounding = 4.0 * f64::EPSILON * (m.get(0b01000).abs() + m.get(0b10000).abs()).max(1.0);
    if (w - 1.0).abs() <= rounding {
        return Ok(x);
    }
    Ok(x / w)
}

/// Dual sphere `S = up(c) - ½r² e_inf`.
pub fn make_sphere(center: &Vec3, radius: f64) -> Result<Multivector, CgaError> {
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(CgaError::DegenerateInput(format!("sphere radius {radius}")));
    }
    Ok(null_vector(
        center,
        0.5 * (center.norm_squared() - radius * radius),
        1.0,
    ))
}

/// Plane `Π = n + d e_inf` with `n` normalized.
pub fn make_plane(normal: &Vec3, d: f64) -> Result<Multivector, CgaError> {
    let len = normal.norm();
    if !(len >= EPS0) {
        return Err(CgaError::DegenerateInput(format!(
            "plane normal has length {len:e}"
        )));
    }
    Ok(null_vector(&(normal / len), d, 0.0))
}

/// Center and radius of a (dual) sphere vector, in any projective scale.
pub fn sphere_center_radius(s: &Multivector) -> Result<(Vec3, f64), CgaError> {
    let w = origin_weight(s);
    if w.abs() < EPS0 {
        return Err(CgaError::NullWeight {
            weight: w,
            eps: EPS0,
        });
    }
    let normalized = s.grade(1) * (1.0 / w);
    let center = down_project(&normalized)?;
    let r2 = normalized.scalar_product(&normalized);
    Ok((center, r2.max(0.0).sqrt()))
}

/// Normal and distance of a plane vector `λ(n + d e_inf)`, with `n` normalized.
pub fn plane_normal_distance(p: &Multivector) -> Result<(Vec3, f64), CgaError> {
    let n = Vec3::new(p.get(0b00001), p.get(0b00010), p.get(0b00100));
    let len = n.norm();
    if len < EPS0 {
        return Err(CgaError::DegenerateInput("plane has no normal part".into()));
    }
    Ok((n / len, infinity_weight(p) / len))
}

/// Dual `m* = -m I`.
pub fn dual(m: &Multivector) -> Multivector {
    -(*m * PSEUDOSCALAR)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_basis_metric() {
        assert_eq!(E_O.scalar_product(&E_O), 0.0);
        assert_eq!(E_INF.scalar_product(&E_INF), 0.0);
        assert_eq!(E_O.scalar_product(&E_INF), -1.0);
        assert_eq!((E_INF ^ E_O), E_INF_O);
    }

    #[test]
    fn up_projection_examples() {
        assert_eq!(up_project(&Vec3::zeros()), E_O);
        let x = up_project(&Vec3::new(1.0, 2.0, 3.0));
        let expected = E1 + 2.0 * E2 + 3.0 * E3 + 7.0 * E_INF + E_O;
        assert_eq!(x, expected);
        let x = up_project(&Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(x, E1 + 0.5 * E_INF + E_O);
        assert_eq!(origin_weight(&x), 1.0);
    }

    #[test]
    fn down_projection_is_projective() {
        let x = Vec3::new(0.3, -1.2, 2.5);
        assert_eq!(down_project(&up_project(&x)).unwrap(), x);
        let y = down_project(&(up_project(&x) * 2.0)).unwrap();
        assert!((y - x).norm() < 1e-15);
    }

    #[test]
    fn down_projecting_a_plane_fails() {
        let p = make_plane(&Vec3::z(), 1.0).unwrap();
        assert!(matches!(down_project(&p), Err(CgaError::NullWeight { .. })));
    }

    #[test]
    fn plane_normalizes_its_normal() {
        let p = make_plane(&Vec3::new(0.0, 0.0, 2.0), 1.0).unwrap();
        assert_eq!(p, E3 + E_INF);
        assert!(make_plane(&Vec3::zeros(), 1.0).is_err());
    }

    #[test]
    fn zero_radius_sphere_is_the_point() {
        let c = Vec3::new(1.0, -2.0, 0.5);
        assert_eq!(make_sphere(&c, 0.0).unwrap(), up_project(&c));
    }

    #[test]
    fn dual_of_one() {
        assert_eq!(dual(&Multivector::scalar(1.0)), -PSEUDOSCALAR);
    }
}
