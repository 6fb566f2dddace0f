//! Dense multivectors of Cl(4,1).
//!
//! Coefficients are stored over the orthonormal basis `(e1, e2, e3, e+, e-)`
//! with metric signature `(+, +, +, +, -)`. A blade is addressed by a 5-bit
//! mask: bit 0 is `e1`, bit 1 `e2`, bit 2 `e3`, bit 3 `e+`, bit 4 `e-`. The
//! coefficient at index `mask` belongs to the blade written with its basis
//! vectors in ascending bit order, e.g. index `0b00101` is `e1 e3` and index
//! `0b11000` is `e+ e-`. This ordering is frozen: serialized multivectors are
//! plain 32-element arrays in this order.

use std::fmt;
use std::ops::{Add, AddAssign, BitOr, BitXor, Index, Mul, Neg, Sub, SubAssign};

/// Number of blades in Cl(4,1).
pub const BLADES: usize = 32;

/// Bit of the single negative-signature basis vector `e-`.
const NEGATIVE_BIT: u8 = 0b10000;

/// Sign picked up when reordering `a b` into canonical order, ignoring the metric.
const fn reorder_sign(a: u8, b: u8) -> i8 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 1 {
        -1
    } else {
        1
    }
}

const fn blade_sign(a: u8, b: u8) -> i8 {
    let mut s = reorder_sign(a, b);
    if a & b & NEGATIVE_BIT != 0 {
        s = -s;
    }
    s
}

const fn build_sign_table() -> [[i8; BLADES]; BLADES] {
    let mut table = [[0i8; BLADES]; BLADES];
    let mut a = 0;
    while a < BLADES {
        let mut b = 0;
        while b < BLADES {
            table[a][b] = blade_sign(a as u8, b as u8);
            b += 1;
        }
        a += 1;
    }
    table
}

/// `SIGN[a][b]` is the sign of the blade product `e_a e_b = SIGN[a][b] e_(a ^ b)`.
static SIGN: [[i8; BLADES]; BLADES] = build_sign_table();

/// Grade of the blade with the given mask.
#[inline]
pub const fn blade_grade(mask: usize) -> u32 {
    (mask as u32).count_ones()
}

/// Human-readable blade name, e.g. `e13` or `e+-`.
pub fn blade_name(mask: usize) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let mut s = String::from("e");
    for (bit, label) in ["1", "2", "3", "+", "-"].iter().enumerate() {
        if mask & (1 << bit) != 0 {
            s.push_str(label);
        }
    }
    s
}

/// A general element of Cl(4,1).
#[derive(Clone, Copy, PartialEq)]
pub struct Multivector {
    coeffs: [f64; BLADES],
}

impl Default for Multivector {
    fn default() -> Self {
        Self::zero()
    }
}

impl Multivector {
    pub const fn zero() -> Self {
        Self {
            coeffs: [0.0; BLADES],
        }
    }

    pub const fn scalar(s: f64) -> Self {
        let mut coeffs = [0.0; BLADES];
        coeffs[0] = s;
        Self { coeffs }
    }

    /// Unit blade with the given mask.
    pub const fn blade(mask: usize) -> Self {
        let mut coeffs = [0.0; BLADES];
        coeffs[mask] = 1.0;
        Self { coeffs }
    }

    pub const fn from_coeffs(coeffs: [f64; BLADES]) -> Self {
        Self { coeffs }
    }

    /// Grade-1 element `x1 e1 + x2 e2 + x3 e3 + p e+ + m e-`.
    pub const fn vector(x1: f64, x2: f64, x3: f64, p: f64, m: f64) -> Self {
        let mut coeffs = [0.0; BLADES];
        coeffs[0b00001] = x1;
        coeffs[0b00010] = x2;
        coeffs[0b00100] = x3;
        coeffs[0b01000] = p;
        coeffs[0b10000] = m;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64; BLADES] {
        &self.coeffs
    }

    pub fn get(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    pub fn set(&mut self, mask: usize, value: f64) {
        self.coeffs[mask] = value;
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Projection onto a single grade.
    pub fn grade(&self, k: u32) -> Self {
        let mut out = Self::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if blade_grade(i) == k {
                out.coeffs[i] = *c;
            }
        }
        out
    }

    /// Even-grade part (grades 0, 2, 4).
    pub fn even(&self) -> Self {
        let mut out = Self::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if blade_grade(i).is_multiple_of(2) {
                out.coeffs[i] = *c;
            }
        }
        out
    }

    /// Largest absolute coefficient outside the given grade.
    pub fn max_outside_grade(&self, k: u32) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(i, _)| blade_grade(*i) != k)
            .fold(0.0, |m, (_, c)| m.max(c.abs()))
    }

    /// Whether every odd-grade coefficient is exactly zero.
    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| blade_grade(i).is_multiple_of(2) || *c == 0.0)
    }

    /// Reversion: a grade-k blade picks up `(-1)^(k(k-1)/2)`.
    pub fn reverse(&self) -> Self {
        let mut out = *self;
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let k = blade_grade(i);
            if (k * k.saturating_sub(1) / 2) % 2 == 1 {
                *c = -*c;
            }
        }
        out
    }

    /// Grade involution: odd grades flip sign.
    pub fn involute(&self) -> Self {
        let mut out = *self;
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            if blade_grade(i) % 2 == 1 {
                *c = -*c;
            }
        }
        out
    }

    /// Euclidean norm of the coefficient array (not the algebraic norm).
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Scalar part of `self * reverse(self)`.
    pub fn norm_sq(&self) -> f64 {
        (*self * self.reverse()).scalar_part()
    }

    /// Generic blade-pair product; `keep(a, b)` filters which pairs contribute.
    #[inline]
    fn product_with(&self, rhs: &Self, keep: impl Fn(usize, usize) -> bool) -> Self {
        let mut out = [0.0; BLADES];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            let row = &SIGN[a];
            for (b, &cb) in rhs.coeffs.iter().enumerate() {
                if cb == 0.0 || !keep(a, b) {
                    continue;
                }
                out[a ^ b] += f64::from(row[b]) * ca * cb;
            }
        }
        Self { coeffs: out }
    }

    /// Geometric product.
    pub fn gp(&self, rhs: &Self) -> Self {
        self.product_with(rhs, |_, _| true)
    }

    /// Outer (wedge) product.
    pub fn wedge(&self, rhs: &Self) -> Self {
        self.product_with(rhs, |a, b| a & b == 0)
    }

    /// Inner product, taken as the left contraction `self ⌋ rhs`: a blade pair
    /// contributes only when every basis vector of the left blade also appears
    /// in the right one. On two vectors this is the metric scalar product.
    pub fn inner(&self, rhs: &Self) -> Self {
        self.product_with(rhs, |a, b| a & b == a)
    }

    /// Scalar product `<self rhs>_0`.
    pub fn scalar_product(&self, rhs: &Self) -> f64 {
        let mut s = 0.0;
        for (a, &ca) in self.coeffs.iter().enumerate() {
            let cb = rhs.coeffs[a];
            if ca != 0.0 && cb != 0.0 {
                s += f64::from(SIGN[a][a]) * ca * cb;
            }
        }
        s
    }

    /// Outer product of several multivectors, folded left to right.
    pub fn wedge_all<'a>(items: impl IntoIterator<Item = &'a Multivector>) -> Self {
        items
            .into_iter()
            .fold(Self::scalar(1.0), |acc, m| acc.wedge(m))
    }
}

impl Index<usize> for Multivector {
    type Output = f64;
    fn index(&self, mask: usize) -> &f64 {
        &self.coeffs[mask]
    }
}

impl Add for Multivector {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl Sub for Multivector {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl SubAssign for Multivector {
    fn sub_assign(&mut self, rhs: Self) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
    }
}

impl Neg for Multivector {
    type Output = Self;
    fn neg(mut self) -> Self {
        for c in self.coeffs.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul<f64> for Multivector {
    type Output = Self;
    fn mul(mut self, s: f64) -> Self {
        for c in self.coeffs.iter_mut() {
            *c *= s;
        }
        self
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, m: Multivector) -> Multivector {
        m * self
    }
}

/// `a * b` is the geometric product.
impl Mul for Multivector {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.gp(&rhs)
    }
}

/// `a ^ b` is the outer product.
impl BitXor for Multivector {
    type Output = Self;
    fn bitxor(self, rhs: Self) -> Self {
        self.wedge(&rhs)
    }
}

/// `a | b` is the inner product (left contraction).
impl BitOr for Multivector {
    type Output = Self;
    fn bitor(self, rhs: Self) -> Self {
        self.inner(&rhs)
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(")?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c != 0.0 {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "{c}*{}", blade_name(i))?;
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
