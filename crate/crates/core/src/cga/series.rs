//! Taylor-series exponential and logarithm of multivectors.
//!
//! Both series run on a reduced argument: `exp` uses scaling and squaring, and
//! `log` takes repeated versor square roots until the argument is close to 1.
//! Each series stops once a term falls under `TAYLOR_TOL` relative to the
//! partial sum, or after `TAYLOR_MAX_TERMS` terms.

use super::multivector::Multivector;
use super::versor::Versor;
use crate::error::CgaError;

pub const TAYLOR_TOL: f64 = 1e-14;
pub const TAYLOR_MAX_TERMS: usize = 64;

/// Arguments with coefficient norm above this are halved before `exp`.
const EXP_REDUCE_ABOVE: f64 = 0.5;
/// `log` takes square roots until `|V - 1|` is at most this.
const LOG_REDUCE_ABOVE: f64 = 0.25;
const MAX_HALVINGS: u32 = 48;

fn converged(term: &Multivector, sum: &Multivector) -> bool {
    term.coeff_norm() <= TAYLOR_TOL * sum.coeff_norm().max(1.0)
}

/// `exp(m)` by truncated Taylor series with scaling and squaring.
pub fn mv_exp(m: &Multivector) -> Result<Multivector, CgaError> {
    let norm = m.coeff_norm();
    if !norm.is_finite() {
        return Err(CgaError::DegenerateInput(
            "exp of non-finite multivector".into(),
        ));
    }
    let mut halvings = 0;
    let mut scale = 1.0;
    while norm * scale > EXP_REDUCE_ABOVE && halvings < MAX_HALVINGS {
        scale *= 0.5;
        halvings += 1;
    }
    let x = *m * scale;
    let mut sum = Multivector::scalar(1.0);
    let mut term = Multivector::scalar(1.0);
    let mut done = false;
    for n in 1..=TAYLOR_MAX_TERMS {
        term = (term * x) * (1.0 / n as f64);
        sum += term;
        if converged(&term, &sum) {
            done = true;
            break;
        }
    }
    if !done {
        return Err(CgaError::LogDivergence {
            terms: TAYLOR_MAX_TERMS,
            residual: term.coeff_norm(),
        });
    }
    for _ in 0..halvings {
        sum = sum * sum;
    }
    Ok(sum)
}

/// `log(V)` by truncated Taylor series of `log(1 + x)` after square-root reduction.
pub fn mv_log(v: &Versor) -> Result<Multivector, CgaError> {
    log_multivector(v.mv())
}

fn log_multivector(v: &Multivector) -> Result<Multivector, CgaError> {
    let n = v.norm_sq();
    if !(n > 0.0) || !n.is_finite() {
        return Err(CgaError::DegenerateInput(format!(
            "log of multivector with norm {n:e}"
        )));
    }
    let s = n.sqrt();
    let mut v = *v * (1.0 / s);
    let one = Multivector::scalar(1.0);

    let mut halvings = 0;
    while (v - one).coeff_norm() > LOG_REDUCE_ABOVE && halvings < MAX_HALVINGS {
        match versor_sqrt(&v) {
            Some(r) => {
                v = r;
                halvings += 1;
            }
            // Outside what the closed-form root handles; let the series decide.
            None => break,
        }
    }

    let x = v - one;
    let mut sum = Multivector::zero();
    let mut power = x;
    let mut last = x;
    let mut done = false;
    for n in 1..=TAYLOR_MAX_TERMS {
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        last = power * (sign / n as f64);
        sum += last;
        if converged(&last, &sum) {
            done = true;
            break;
        }
        power = power * x;
    }
    if !done {
        return Err(CgaError::LogDivergence {
            terms: TAYLOR_MAX_TERMS,
            residual: last.coeff_norm(),
        });
    }
    let mut out = sum * 2f64.powi(halvings as i32);
    out.set(0, out.get(0) + s.ln());
    Ok(out)
}

/// Square root of a normalized even versor: `(1 + V) N^(-1/2)` with
/// `N = (1 + V) reverse(1 + V)`, a scalar `a` plus a grade-4 part `q`. When
/// `q² = β` is a scalar (every versor built from rotors, translators and
/// dilators) `(a + q)^(-1/2)` is `c0 + c1 q` in closed form; otherwise a
/// binomial series is used. Returns `None` when the root is undefined (`V`
/// near -1) or fails to square back to `V`.
fn versor_sqrt(v: &Multivector) -> Option<Multivector> {
    let s = Multivector::scalar(1.0) + *v;
    let n = s * s.reverse();
    let a = n.scalar_part();
    if a <= 1e-9 {
        return None;
    }
    let mut q = n;
    q.set(0, 0.0);
    let qq = q * q;
    let beta = qq.scalar_part();
    let scalar_square = qq.max_outside_grade(0) <= 1e-12 * a * a;
    let inv_sqrt = if scalar_square {
        let (c0, c1) = inv_sqrt_coeffs(a, beta)?;
        Multivector::scalar(c0) + q * c1
    } else {
        let ratio = q * (1.0 / a);
        if ratio.coeff_norm() >= 0.5 {
            return None;
        }
        // (1 + r)^(-1/2) = Σ binom(-1/2, j) r^j
        let mut acc = Multivector::scalar(1.0);
        let mut power = Multivector::scalar(1.0);
        let mut coef = 1.0;
        for j in 1..=TAYLOR_MAX_TERMS {
            coef *= (-0.5 - (j as f64 - 1.0)) / j as f64;
            power = power * ratio;
            let term = power * coef;
            acc += term;
            if converged(&term, &acc) {
                break;
            }
        }
        acc * (1.0 / a.sqrt())
    };
    let root = s * inv_sqrt;
    let check = root * root;
    if check.max_abs_diff(v) > 1e-9 * v.coeff_norm().max(1.0) {
        return None;
    }
    Some(root)
}

/// `(c0, c1)` with `(a + q)^(-1/2) = c0 + c1 q` for `q² = β`.
fn inv_sqrt_coeffs(a: f64, beta: f64) -> Option<(f64, f64)> {
    let f = |x: f64| x.powf(-0.5);
    if beta.abs() <= 1e-6 * a * a {
        // Even expansion in r = √β; the next terms are O((β/a²)³).
        let (h, b) = (f(a), beta / (a * a));
        let c0 = h * (1.0 + b * (3.0 / 8.0 + b * 35.0 / 128.0));
        let c1 = -h / a * (0.5 + b * (5.0 / 16.0 + b * 63.0 / 256.0));
        return Some((c0, c1));
    }
    if beta > 0.0 {
        let r = beta.sqrt();
        let (hi, lo) = (a + r, a - r);
        if lo <= 0.0 {
            return None;
        }
        return Some((0.5 * (f(hi) + f(lo)), 0.5 * (f(hi) - f(lo)) / r));
    }
    // Eigenvalues a ± i r: (a + i r)^(-1/2) = |λ|^(-1/2) e^(-iθ/2).
    let r = (-beta).sqrt();
    let m = (a * a + r * r).sqrt().powf(-0.5);
    let half = 0.5 * r.atan2(a);
    Some((m * half.cos(), -m * half.sin() / r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cga::conformal::{euclidean, Vec3, E_INF};

    #[test]
    fn exp_of_zero_and_log_of_one() {
        assert_eq!(
            mv_exp(&Multivector::zero()).unwrap(),
            Multivector::scalar(1.0)
        );
        assert_eq!(mv_log(&Versor::identity()).unwrap(), Multivector::zero());
    }

    #[test]
    fn exp_of_translation_generator_is_exact() {
        for t in [Vec3::new(1.0, -2.0, 0.5), Vec3::new(30.0, 4.0, -12.0)] {
            let g = euclidean(&t) * E_INF * -0.5;
            assert_eq!(mv_exp(&g).unwrap(), *Versor::translator(&t).mv());
        }
    }

    #[test]
    fn rotor_log_is_half_angle_bivector() {
        let r = Versor::rotor(&Vec3::z(), 0.7).unwrap();
        let l = mv_log(&r).unwrap();
        let mut expected = Multivector::zero();
        expected.set(0b011, -0.35);
        assert!(l.max_abs_diff(&expected) < 1e-14, "{l:?}");
    }

    #[test]
    fn exp_log_round_trips() {
        let cases = [
            Versor::rotor(&Vec3::new(0.0, 0.6, 0.8), 2.9).unwrap(),
            Versor::translator(&Vec3::new(3.0, -1.0, 2.0)),
            Versor::dilator(5.0).unwrap(),
            Versor::dilator(0.1).unwrap(),
            Versor::translator(&Vec3::new(1.0, 2.0, -0.5))
                .compose(&Versor::rotor(&Vec3::x(), 2.0).unwrap()),
        ];
        for v in cases {
            let back = mv_exp(&mv_log(&v).unwrap()).unwrap();
            assert!(back.max_abs_diff(v.mv()) < 1e-10, "{v:?} -> {back:?}");
        }
    }

    #[test]
    fn log_of_motor_with_long_translation_round_trips() {
        let m = Versor::translator(&Vec3::new(-3.1, 0.4, 2.2))
            .compose(&Versor::rotor(&Vec3::new(0.48, 0.6, 0.64), 2.4).unwrap());
        let back = mv_exp(&mv_log(&m).unwrap()).unwrap();
        assert!(back.max_abs_diff(m.mv()) < 1e-10, "{back:?}");
    }

    #[test]
    fn log_outside_principal_branch_diverges() {
        // A full turn gives the rotor -1, where log(1 + x) has no expansion.
        let r = Versor::rotor(&Vec3::z(), 2.0 * std::f64::consts::PI).unwrap();
        assert!(matches!(mv_log(&r), Err(CgaError::LogDivergence { .. })));
    }
}
