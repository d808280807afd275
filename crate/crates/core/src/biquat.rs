//! Complex quaternions `H(C)`.
//!
//! A biquaternion is `q0 + q1 i1 + q2 i2 + q3 i3` with complex coefficients.
//! The quaternionic units obey `i1 i2 = i3`, `i2 i3 = i1`, `i3 i1 = i2` and
//! `ik^2 = -1`. The complex unit `i` lives in the imaginary parts of the
//! coefficients and commutes with every `ik`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

pub use num_complex::Complex64 as Complex;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("non-finite component in biquaternion operand")]
    NonFinite,
    #[error("expected a purely vectorial biquaternion, scalar part is {0}")]
    NotVectorial(Complex),
}

const ZERO: Complex = Complex::new(0.0, 0.0);
const I: Complex = Complex::new(0.0, 1.0);

fn finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Real 3-vector. Used for gradients, medium log-gradients and real residuals.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Vec3([x1, x2, x3])
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        let a = self.0;
        let b = o.0;
        Vec3([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    pub fn scale(self, s: f64) -> Vec3 {
        Vec3(self.0.map(|x| x * s))
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        self.scale(-1.0)
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

/// Complex 3-vector, identified with a purely vectorial biquaternion.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3C(pub [Complex; 3]);

impl Vec3C {
    pub fn from_real(v: Vec3) -> Self {
        Vec3C(v.0.map(|x| Complex::new(x, 0.0)))
    }

    /// `re + i * im`.
    pub fn from_parts(re: Vec3, im: Vec3) -> Self {
        Vec3C([0, 1, 2].map(|k| Complex::new(re.0[k], im.0[k])))
    }

    pub fn re(self) -> Vec3 {
        Vec3(self.0.map(|z| z.re))
    }

    pub fn im(self) -> Vec3 {
        Vec3(self.0.map(|z| z.im))
    }
}

impl From<Vec3C> for Biquaternion {
    fn from(v: Vec3C) -> Self {
        Biquaternion::new(ZERO, v.0[0], v.0[1], v.0[2])
    }
}

impl From<Vec3> for Biquaternion {
    fn from(v: Vec3) -> Self {
        Biquaternion::from(Vec3C::from_real(v))
    }
}

impl TryFrom<Biquaternion> for Vec3C {
    type Error = AlgebraError;

    fn try_from(q: Biquaternion) -> Result<Self, AlgebraError> {
        if q.q[0] != ZERO {
            return Err(AlgebraError::NotVectorial(q.q[0]));
        }
        Ok(q.vec())
    }
}

/// Element of `H(C)`. Component 0 is the scalar part, 1..=3 the coefficients
/// of `i1, i2, i3`.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Biquaternion {
    pub q: [Complex; 4],
}

impl Biquaternion {
    pub const ZERO: Biquaternion = Biquaternion { q: [ZERO; 4] };
    pub const ONE: Biquaternion = Biquaternion {
        q: [Complex::new(1.0, 0.0), ZERO, ZERO, ZERO],
    };

    pub const fn new(q0: Complex, q1: Complex, q2: Complex, q3: Complex) -> Self {
        Biquaternion { q: [q0, q1, q2, q3] }
    }

    /// Quaternionic unit `i_k`, `k` in `1..=3`.
    pub fn unit(k: usize) -> Self {
        assert!((1..=3).contains(&k), "quaternionic unit index must be 1, 2 or 3");
        let mut q = [ZERO; 4];
        q[k] = Complex::new(1.0, 0.0);
        Biquaternion { q }
    }

    /// The complex unit `i` as a (central) biquaternion.
    pub fn imag_unit() -> Self {
        Biquaternion::scalar(I)
    }

    pub fn scalar(s: Complex) -> Self {
        Biquaternion {
            q: [s, ZERO, ZERO, ZERO],
        }
    }

    pub fn real_scalar(s: f64) -> Self {
        Biquaternion::scalar(Complex::new(s, 0.0))
    }

    /// Builds `re + i * im` from two real quaternions given as `[q0, q1, q2, q3]`.
    pub fn from_re_im(re: [f64; 4], im: [f64; 4]) -> Self {
        Biquaternion {
            q: [0, 1, 2, 3].map(|k| Complex::new(re[k], im[k])),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().all(|z| finite(*z))
    }

    pub fn is_vectorial(&self) -> bool {
        self.q[0] == ZERO
    }

    /// Scalar part `g0`.
    pub fn sc(&self) -> Complex {
        self.q[0]
    }

    /// Vector part `g`.
    pub fn vec(&self) -> Vec3C {
        Vec3C([self.q[1], self.q[2], self.q[3]])
    }

    /// Componentwise real part (a real quaternion embedded in `H(C)`).
    pub fn re(&self) -> Biquaternion {
        Biquaternion {
            q: self.q.map(|z| Complex::new(z.re, 0.0)),
        }
    }

    /// Componentwise imaginary part.
    pub fn im(&self) -> Biquaternion {
        Biquaternion {
            q: self.q.map(|z| Complex::new(z.im, 0.0)),
        }
    }

    /// Complex conjugation `*` applied to every coefficient. Leaves the
    /// quaternionic structure untouched.
    pub fn conj_complex(&self) -> Biquaternion {
        Biquaternion {
            q: self.q.map(|z| z.conj()),
        }
    }

    pub fn scale(&self, s: Complex) -> Biquaternion {
        Biquaternion {
            q: self.q.map(|z| z * s),
        }
    }

    pub fn scale_re(&self, s: f64) -> Biquaternion {
        Biquaternion {
            q: self.q.map(|z| z * s),
        }
    }

    /// Multiplication by the complex unit `i`.
    pub fn mul_i(&self) -> Biquaternion {
        self.scale(I)
    }

    /// Euclidean norm of the eight real components. Not multiplicative.
    pub fn norm8(&self) -> f64 {
        self.q.iter().map(|z| z.re * z.re + z.im * z.im).sum::<f64>().sqrt()
    }

    /// The eight real components in the order `re q0, im q0, re q1, ...`.
    pub fn components(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (k, z) in self.q.iter().enumerate() {
            out[2 * k] = z.re;
            out[2 * k + 1] = z.im;
        }
        out
    }

    pub fn checked_mul(&self, rhs: &Biquaternion) -> Result<Biquaternion, AlgebraError> {
        if !self.is_finite() || !rhs.is_finite() {
            return Err(AlgebraError::NonFinite);
        }
        Ok(*self * *rhs)
    }

    /// Left multiplication operator: `alpha * g`.
    pub fn apply_left(alpha: &Biquaternion, g: &Biquaternion) -> Biquaternion {
        *alpha * *g
    }

    /// Right multiplication operator: `g * alpha`.
    pub fn apply_right(alpha: &Biquaternion, g: &Biquaternion) -> Biquaternion {
        *g * *alpha
    }
}

/// Usual bilinear scalar product `p1 q1 + p2 q2 + p3 q3` (no conjugation).
pub fn scalar_product(p: &Vec3C, q: &Vec3C) -> Complex {
    p.0[0] * q.0[0] + p.0[1] * q.0[1] + p.0[2] * q.0[2]
}

/// The scalar product written through the multiplication operators,
/// `-1/2 (left_p + right_p) q`. Only the scalar part of the anticommutator
/// survives; the vector part is returned alongside so callers can check it
/// vanishes.
pub fn scalar_product_anticommutator(p: &Biquaternion, q: &Biquaternion) -> Result<(Complex, Vec3C), AlgebraError> {
    for v in [p, q] {
        if !v.is_vectorial() {
            return Err(AlgebraError::NotVectorial(v.sc()));
        }
    }
    let s = (Biquaternion::apply_left(p, q) + Biquaternion::apply_right(p, q)).scale_re(-0.5);
    Ok((s.sc(), s.vec()))
}

/// Cross product on complex vectors.
pub fn cross(p: &Vec3C, q: &Vec3C) -> Vec3C {
    let a = p.0;
    let b = q.0;
    Vec3C([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

impl Mul for Biquaternion {
    type Output = Biquaternion;

    fn mul(self, rhs: Biquaternion) -> Biquaternion {
        let [a0, a1, a2, a3] = self.q;
        let [b0, b1, b2, b3] = rhs.q;
        Biquaternion::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 + a2 * b0 + a3 * b1 - a1 * b3,
            a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1,
        )
    }
}

impl Add for Biquaternion {
    type Output = Biquaternion;
    fn add(self, rhs: Biquaternion) -> Biquaternion {
        Biquaternion {
            q: [0, 1, 2, 3].map(|k| self.q[k] + rhs.q[k]),
        }
    }
}

impl AddAssign for Biquaternion {
    fn add_assign(&mut self, rhs: Biquaternion) {
        *self = *self + rhs;
    }
}

impl Sub for Biquaternion {
    type Output = Biquaternion;
    fn sub(self, rhs: Biquaternion) -> Biquaternion {
        Biquaternion {
            q: [0, 1, 2, 3].map(|k| self.q[k] - rhs.q[k]),
        }
    }
}

impl Neg for Biquaternion {
    type Output = Biquaternion;
    fn neg(self) -> Biquaternion {
        self.scale_re(-1.0)
    }
}

impl fmt::Debug for Biquaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Biquaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = ["", "i1", "i2", "i3"];
        write!(f, "(")?;
        for (k, z) in self.q.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({} {:+}i){}", z.re, z.im, labels[k])?;
        }
        write!(f, ")")
    }
}
