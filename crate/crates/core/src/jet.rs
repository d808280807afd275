//! First-order space-time jets.
//!
//! A [`Jet4`] carries a real value and its partial derivatives with respect to
//! `(t, x1, x2, x3)`. Arithmetic propagates derivatives by the chain rule, so a
//! field built from jets yields exact first derivatives up to round-off.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::biquat::{Biquaternion, Complex, Vec3};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by a jet with zero value")]
    DivisionByZero,
    #[error("{func}: argument {arg} outside the function's domain")]
    Domain { func: &'static str, arg: f64 },
    #[error("non-finite result from {0}")]
    NonFinite(&'static str),
    #[error("finite-difference step must be positive, got {0}")]
    BadStep(f64),
}

/// Derivative slot index of the time axis. Spatial axis `xk` sits in slot `k`.
pub const T: usize = 0;

/// A point `(t, x1, x2, x3)` of space-time.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Point4 {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Point4 {
    pub fn new(t: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Point4 { t, x1, x2, x3 }
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.t, self.x1, self.x2, self.x3]
    }

    pub fn from_coords(c: [f64; 4]) -> Self {
        Point4::new(c[0], c[1], c[2], c[3])
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|c| c.is_finite())
    }
}

impl fmt::Display for Point4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t={}, x1={}, x2={}, x3={})", self.t, self.x1, self.x2, self.x3)
    }
}

/// Value plus `[d/dt, d/dx1, d/dx2, d/dx3]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet4 {
    pub val: f64,
    pub d: [f64; 4],
}

/// Elementary functions understood by jets and by the expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElemFn {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Tanh,
}

impl ElemFn {
    pub const ALL: [ElemFn; 6] = [
        ElemFn::Sin,
        ElemFn::Cos,
        ElemFn::Exp,
        ElemFn::Log,
        ElemFn::Sqrt,
        ElemFn::Tanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ElemFn::Sin => "sin",
            ElemFn::Cos => "cos",
            ElemFn::Exp => "exp",
            ElemFn::Log => "log",
            ElemFn::Sqrt => "sqrt",
            ElemFn::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Option<ElemFn> {
        ElemFn::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Plain evaluation with domain checks.
    pub fn eval(self, x: f64) -> Result<f64, JetError> {
        let y = match self {
            ElemFn::Sin => x.sin(),
            ElemFn::Cos => x.cos(),
            ElemFn::Exp => x.exp(),
            ElemFn::Tanh => x.tanh(),
            ElemFn::Log if x > 0.0 => x.ln(),
            ElemFn::Sqrt if x >= 0.0 => x.sqrt(),
            ElemFn::Log | ElemFn::Sqrt => {
                return Err(JetError::Domain {
                    func: self.name(),
                    arg: x,
                })
            }
        };
        if y.is_finite() {
            Ok(y)
        } else {
            Err(JetError::NonFinite(self.name()))
        }
    }
}

impl Jet4 {
    pub fn constant(val: f64) -> Self {
        Jet4 { val, d: [0.0; 4] }
    }

    /// The coordinate function for `slot` (0 = t, 1..=3 = xk) evaluated at `value`.
    pub fn variable(value: f64, slot: usize) -> Self {
        let mut d = [0.0; 4];
        d[slot] = 1.0;
        Jet4 { val: value, d }
    }

    pub fn new(val: f64, d: [f64; 4]) -> Self {
        Jet4 { val, d }
    }

    pub fn dt(&self) -> f64 {
        self.d[T]
    }

    /// Spatial gradient `(d1, d2, d3)`.
    pub fn grad(&self) -> Vec3 {
        Vec3([self.d[1], self.d[2], self.d[3]])
    }

    pub fn is_finite(&self) -> bool {
        self.val.is_finite() && self.d.iter().all(|x| x.is_finite())
    }

    pub fn scale(&self, s: f64) -> Jet4 {
        Jet4 {
            val: self.val * s,
            d: self.d.map(|x| x * s),
        }
    }

    /// `f(self)` given `f(val)` and `f'(val)`.
    fn chain(&self, value: f64, slope: f64) -> Jet4 {
        Jet4 {
            val: value,
            d: self.d.map(|x| slope * x),
        }
    }

    pub fn checked_div(&self, rhs: &Jet4) -> Result<Jet4, JetError> {
        if rhs.val == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let inv = 1.0 / rhs.val;
        let val = self.val * inv;
        let out = Jet4 {
            val,
            d: [0, 1, 2, 3].map(|k| (self.d[k] - val * rhs.d[k]) * inv),
        };
        finite_or(out, "division")
    }

    pub fn recip(&self) -> Result<Jet4, JetError> {
        Jet4::constant(1.0).checked_div(self)
    }

    /// Applies an elementary function with the chain rule.
    pub fn apply(&self, func: ElemFn) -> Result<Jet4, JetError> {
        let x = self.val;
        let value = func.eval(x)?;
        let slope = match func {
            ElemFn::Sin => x.cos(),
            ElemFn::Cos => -x.sin(),
            ElemFn::Exp => value,
            ElemFn::Log => 1.0 / x,
            ElemFn::Sqrt => {
                if value == 0.0 {
                    return Err(JetError::Domain { func: "sqrt", arg: x });
                }
                0.5 / value
            }
            ElemFn::Tanh => 1.0 - value * value,
        };
        finite_or(self.chain(value, slope), func.name())
    }

    pub fn sqrt(&self) -> Result<Jet4, JetError> {
        self.apply(ElemFn::Sqrt)
    }

    /// `self ^ exponent`. Constant integer exponents accept any base; otherwise
    /// the base must be positive.
    pub fn pow(&self, exponent: &Jet4) -> Result<Jet4, JetError> {
        let b = exponent.val;
        let const_exp = exponent.d.iter().all(|x| *x == 0.0);
        let a = self.val;
        if const_exp && (b.fract() == 0.0 || a > 0.0) {
            if a == 0.0 && b < 0.0 {
                return Err(JetError::Domain { func: "pow", arg: a });
            }
            let value = a.powf(b);
            let slope = if b == 0.0 { 0.0 } else { b * a.powf(b - 1.0) };
            return finite_or(self.chain(value, slope), "pow");
        }
        if a <= 0.0 {
            return Err(JetError::Domain { func: "pow", arg: a });
        }
        let value = a.powf(b);
        let ln_a = a.ln();
        let out = Jet4 {
            val: value,
            d: [0, 1, 2, 3].map(|k| value * (exponent.d[k] * ln_a + b * self.d[k] / a)),
        };
        finite_or(out, "pow")
    }
}

fn finite_or(j: Jet4, what: &'static str) -> Result<Jet4, JetError> {
    if j.is_finite() {
        Ok(j)
    } else {
        Err(JetError::NonFinite(what))
    }
}

impl Add for Jet4 {
    type Output = Jet4;
    fn add(self, o: Jet4) -> Jet4 {
        Jet4 {
            val: self.val + o.val,
            d: [0, 1, 2, 3].map(|k| self.d[k] + o.d[k]),
        }
    }
}

impl Sub for Jet4 {
    type Output = Jet4;
    fn sub(self, o: Jet4) -> Jet4 {
        Jet4 {
            val: self.val - o.val,
            d: [0, 1, 2, 3].map(|k| self.d[k] - o.d[k]),
        }
    }
}

impl Mul for Jet4 {
    type Output = Jet4;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: Jet4) -> Jet4 {
        Jet4 {
            val: self.val * o.val,
            d: [0, 1, 2, 3].map(|k| self.d[k] * o.val + self.val * o.d[k]),
        }
    }
}

impl Neg for Jet4 {
    type Output = Jet4;
    fn neg(self) -> Jet4 {
        self.scale(-1.0)
    }
}

/// Three jets: a real vector field and its first derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VecFieldSample(pub [Jet4; 3]);

impl VecFieldSample {
    pub fn zero() -> Self {
        VecFieldSample::default()
    }

    pub fn value(&self) -> Vec3 {
        Vec3(self.0.map(|j| j.val))
    }

    pub fn dt(&self) -> Vec3 {
        Vec3(self.0.map(|j| j.dt()))
    }

    pub fn div(&self) -> f64 {
        self.0[0].d[1] + self.0[1].d[2] + self.0[2].d[3]
    }

    pub fn rot(&self) -> Vec3 {
        let [a, b, c] = self.0;
        Vec3([c.d[2] - b.d[3], a.d[3] - c.d[1], b.d[1] - a.d[2]])
    }

    /// Componentwise product with a scalar jet (product rule per slot).
    pub fn scaled_by(&self, s: &Jet4) -> VecFieldSample {
        VecFieldSample(self.0.map(|j| *s * j))
    }

    pub fn scale(&self, s: f64) -> VecFieldSample {
        VecFieldSample(self.0.map(|j| j.scale(s)))
    }

    pub fn add(&self, other: &VecFieldSample) -> VecFieldSample {
        VecFieldSample([0, 1, 2].map(|k| self.0[k] + other.0[k]))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(Jet4::is_finite)
    }
}

/// Both parts of the vector-calculus decomposition of a vector field sample.
pub fn vector_calculus(v: &VecFieldSample) -> (f64, Vec3) {
    (v.div(), v.rot())
}

pub fn gradient(s: &Jet4) -> Vec3 {
    s.grad()
}

/// `D g = -div g + grad g0 + rot g` for a real field with optional scalar part.
pub fn apply_d(scalar: Option<&Jet4>, vector: &VecFieldSample) -> Biquaternion {
    let (div, rot) = vector_calculus(vector);
    let grad = scalar.map(gradient).unwrap_or(Vec3::ZERO);
    Biquaternion::real_scalar(-div) + Biquaternion::from(grad + rot)
}

/// A biquaternion-valued jet: value and the four partial derivatives, each an
/// element of `H(C)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BiquatJet {
    pub val: Biquaternion,
    pub d: [Biquaternion; 4],
}

impl BiquatJet {
    /// Assembles `g = g0 + g_vec` from real jets for the real and imaginary
    /// parts of each of the four components.
    pub fn from_parts(re: [Jet4; 4], im: [Jet4; 4]) -> Self {
        let comp = |slot: Option<usize>| {
            let pick = |j: &Jet4| match slot {
                None => j.val,
                Some(s) => j.d[s],
            };
            Biquaternion::from_re_im(re.each_ref().map(pick), im.each_ref().map(pick))
        };
        BiquatJet {
            val: comp(None),
            d: [0, 1, 2, 3].map(|s| comp(Some(s))),
        }
    }

    /// Purely vectorial `re + i * im`.
    pub fn vectorial(re: &VecFieldSample, im: &VecFieldSample) -> Self {
        let z = Jet4::constant(0.0);
        BiquatJet::from_parts([z, re.0[0], re.0[1], re.0[2]], [z, im.0[0], im.0[1], im.0[2]])
    }

    pub fn from_real_vector(v: &VecFieldSample) -> Self {
        BiquatJet::vectorial(v, &VecFieldSample::zero())
    }

    /// Product with a real scalar jet.
    pub fn scaled_by(&self, phi: &Jet4) -> BiquatJet {
        BiquatJet {
            val: self.val.scale_re(phi.val),
            d: [0, 1, 2, 3].map(|k| self.d[k].scale_re(phi.val) + self.val.scale_re(phi.d[k])),
        }
    }

    pub fn add(&self, o: &BiquatJet) -> BiquatJet {
        BiquatJet {
            val: self.val + o.val,
            d: [0, 1, 2, 3].map(|k| self.d[k] + o.d[k]),
        }
    }

    pub fn mul_i(&self) -> BiquatJet {
        BiquatJet {
            val: self.val.mul_i(),
            d: self.d.map(|x| x.mul_i()),
        }
    }

    pub fn conj_complex(&self) -> BiquatJet {
        BiquatJet {
            val: self.val.conj_complex(),
            d: self.d.map(|x| x.conj_complex()),
        }
    }

    pub fn dt(&self) -> Biquaternion {
        self.d[T]
    }
}

/// `D g = sum_k i_k * dg/dx_k`, computed with biquaternion products.
pub fn apply_d_sum(g: &BiquatJet) -> Biquaternion {
    (1..=3).fold(Biquaternion::ZERO, |acc, k| acc + Biquaternion::unit(k) * g.d[k])
}

/// `-div g + grad g0 + rot g` evaluated on a complex biquaternion jet,
/// without going through the product.
pub fn apply_d_assembled(g: &BiquatJet) -> Biquaternion {
    let part = |pick: fn(Complex) -> f64| -> Biquaternion {
        let jet = |c: usize| Jet4 {
            val: pick(g.val.q[c]),
            d: g.d.map(|b| pick(b.q[c])),
        };
        let vector = VecFieldSample([jet(1), jet(2), jet(3)]);
        apply_d(Some(&jet(0)), &vector)
    };
    part(|z| z.re) + part(|z| z.im).mul_i()
}

/// Central-difference jet of a scalar field; error `O(h^2)` per slot.
pub fn fd_jet<F>(field: F, p: Point4, h: f64) -> Result<Jet4, JetError>
where
    F: Fn(Point4) -> f64,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(JetError::BadStep(h));
    }
    let base = p.coords();
    let mut d = [0.0; 4];
    for (slot, slot_d) in d.iter_mut().enumerate() {
        let mut plus = base;
        let mut minus = base;
        plus[slot] += h;
        minus[slot] -= h;
        *slot_d = (field(Point4::from_coords(plus)) - field(Point4::from_coords(minus))) / (2.0 * h);
    }
    Ok(Jet4 { val: field(p), d })
}

/// Default finite-difference step in natural units.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

#[cfg(test)]
mod tests {
    use super::*;

    fn at(p: Point4) -> [Jet4; 4] {
        let c = p.coords();
        [0, 1, 2, 3].map(|k| Jet4::variable(c[k], k))
    }

    #[test]
    fn product_rule_examples() {
        let [_, x1, ..] = at(Point4::new(0.0, 3.0, 0.0, 0.0));
        let sq = x1 * x1;
        assert_eq!(sq, Jet4::new(9.0, [0.0, 6.0, 0.0, 0.0]));

        let [_, x1, x2, _] = at(Point4::new(0.0, 1.0, 2.0, 0.0));
        assert_eq!(x1 * x2, Jet4::new(2.0, [0.0, 2.0, 1.0, 0.0]));

        let [_, x1, ..] = at(Point4::new(0.0, 2.0, 0.0, 0.0));
        let q = Jet4::constant(1.0).checked_div(&x1).unwrap();
        assert_eq!(q, Jet4::new(0.5, [0.0, -0.25, 0.0, 0.0]));
    }

    #[test]
    fn division_by_zero_value() {
        let zero = Jet4::variable(0.0, 1);
        assert_eq!(Jet4::constant(1.0).checked_div(&zero), Err(JetError::DivisionByZero));
    }

    #[test]
    fn elementary_functions() {
        let x1 = Jet4::variable(0.0, 1);
        assert_eq!(x1.apply(ElemFn::Sin).unwrap(), Jet4::new(0.0, [0.0, 1.0, 0.0, 0.0]));

        let two_x3 = Jet4::variable(0.0, 3).scale(2.0);
        assert_eq!(two_x3.apply(ElemFn::Exp).unwrap(), Jet4::new(1.0, [0.0, 0.0, 0.0, 2.0]));

        let x1 = Jet4::variable(4.0, 1);
        assert_eq!(x1.sqrt().unwrap(), Jet4::new(2.0, [0.0, 0.25, 0.0, 0.0]));
    }

    #[test]
    fn domain_errors_name_the_function() {
        let neg = Jet4::variable(-1.0, 1);
        let err = neg.sqrt().unwrap_err();
        assert!(err.to_string().contains("sqrt"), "{err}");
        let err = Jet4::constant(0.0).apply(ElemFn::Log).unwrap_err();
        assert!(err.to_string().contains("log"), "{err}");
        assert!(Jet4::constant(1000.0).apply(ElemFn::Exp).is_err());
    }

    #[test]
    fn pow_rules() {
        let x = Jet4::variable(-2.0, 1);
        let sq = x.pow(&Jet4::constant(2.0)).unwrap();
        assert_eq!(sq, Jet4::new(4.0, [0.0, -4.0, 0.0, 0.0]));
        assert!(x.pow(&Jet4::constant(0.5)).is_err());
        assert!(Jet4::constant(0.0).pow(&Jet4::constant(-1.0)).is_err());
        // x^x at 2: value 4, derivative 4 (1 + ln 2)
        let x = Jet4::variable(2.0, 1);
        let r = x.pow(&x).unwrap();
        assert!((r.d[1] - 4.0 * (1.0 + 2f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn div_and_rot_examples() {
        let p = Point4::new(0.0, 0.4, -0.7, 0.2);
        let [_, x1, x2, _] = at(p);
        let zero = Jet4::constant(0.0);

        let v = VecFieldSample([x1, zero, zero]);
        assert_eq!(vector_calculus(&v), (1.0, Vec3::ZERO));

        let v = VecFieldSample([-x2, x1, zero]);
        assert_eq!(vector_calculus(&v), (0.0, Vec3::new(0.0, 0.0, 2.0)));

        assert_eq!(gradient(&(x1 * x2)), Vec3::new(p.x2, p.x1, 0.0));
    }

    #[test]
    fn d_operator_examples() {
        let p = Point4::new(0.0, 0.4, -0.7, 0.2);
        let [_, x1, x2, _] = at(p);
        let zero = Jet4::constant(0.0);

        let g = VecFieldSample([x1, zero, zero]);
        assert_eq!(apply_d(None, &g), Biquaternion::real_scalar(-1.0));

        let g0 = x1 * x2;
        assert_eq!(
            apply_d(Some(&g0), &VecFieldSample::zero()),
            Biquaternion::from(Vec3::new(p.x2, p.x1, 0.0))
        );

        let g = VecFieldSample([-x2, x1, zero]);
        assert_eq!(apply_d(None, &g), Biquaternion::unit(3).scale_re(2.0));
        assert_eq!(
            apply_d_sum(&BiquatJet::from_real_vector(&g)),
            Biquaternion::unit(3).scale_re(2.0)
        );
    }

    #[test]
    fn fd_examples() {
        let f = |p: Point4| p.x1.sin();
        let j = fd_jet(f, Point4::default(), 1e-2).unwrap();
        let err = (j.d[1] - 1.0).abs();
        // central difference error on sine: 1 - sin(h)/h ~ h^2/6
        let expected = 1.0 - (1e-2f64).sin() / 1e-2;
        assert!((err - expected).abs() < 1e-12, "{err} vs {expected}");
        assert!((err - 1.0e-4 / 6.0).abs() < 1e-8);

        let lin = |p: Point4| 3.0 * p.x1 - 2.0;
        for h in [1.0, 0.5, 1e-3] {
            let j = fd_jet(lin, Point4::new(0.0, 0.25, 0.0, 0.0), h).unwrap();
            assert!((j.d[1] - 3.0).abs() < 1e-11);
        }

        assert_eq!(fd_jet(f, Point4::default(), 0.0), Err(JetError::BadStep(0.0)));
        assert!(fd_jet(f, Point4::default(), -1.0).is_err());
    }

    #[test]
    fn fd_halving_quarters_error() {
        let f = |p: Point4| (p.x2 * 1.3).exp() * p.x2.cos();
        let exact = |x: f64| (1.3 * x).exp() * (1.3 * x.cos() - x.sin());
        let p = Point4::new(0.0, 0.0, 0.4, 0.0);
        let e1 = (fd_jet(f, p, 0.02).unwrap().d[2] - exact(0.4)).abs();
        let e2 = (fd_jet(f, p, 0.01).unwrap().d[2] - exact(0.4)).abs();
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }
}
