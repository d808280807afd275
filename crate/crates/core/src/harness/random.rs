//! Deterministic random inputs.
//!
//! Everything is drawn from ChaCha8 seeded with a 64-bit seed; independent
//! suites use separate stream numbers of the same seed. Coefficients are
//! uniform in `[-1, 1]`. Media are exponentials of bounded polynomials, so
//! they are positive by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::biquat::{Biquaternion, Complex};
use crate::dsl::{add, div, mul, neg, sub, Expr, Var};
use crate::jet::{ElemFn, Point4};
use crate::medium::UnitMode;

use super::grid::Box4;
use super::scenario::{DerivativeMode, FieldsFile, MediumFile, SamplesFile, ScenarioFile, VectorSource, MANUFACTURED};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn coeff(r: &mut impl Rng) -> f64 {
    r.gen_range(-1.0..=1.0)
}

pub fn biquaternion(r: &mut impl Rng) -> Biquaternion {
    Biquaternion::new(
        Complex::new(coeff(r), coeff(r)),
        Complex::new(coeff(r), coeff(r)),
        Complex::new(coeff(r), coeff(r)),
        Complex::new(coeff(r), coeff(r)),
    )
}

pub fn vectorial(r: &mut impl Rng) -> Biquaternion {
    let mut b = biquaternion(r);
    b.q[0] = Complex::new(0.0, 0.0);
    b
}

pub fn point(r: &mut impl Rng, bx: &Box4) -> Point4 {
    let c = bx.axes().map(|[a, b]| if a == b { a } else { r.gen_range(a..=b) });
    Point4::from_coords(c)
}

/// Monomials of total degree <= 2 in the given variables (constant first).
fn monomials(vars: &[Var]) -> Vec<Expr> {
    let mut out = vec![Expr::Const(1.0)];
    for (i, a) in vars.iter().enumerate() {
        out.push(Expr::Var(*a));
        for b in &vars[i..] {
            out.push(mul(Expr::Var(*a), Expr::Var(*b)));
        }
    }
    out
}

/// Random polynomial of degree <= 2 in `vars`, coefficients in `[-scale, scale]`.
pub fn polynomial(r: &mut impl Rng, vars: &[Var], scale: f64) -> Expr {
    monomials(vars).into_iter().fold(Expr::Const(0.0), |acc, m| {
        add(acc, mul(Expr::Const(scale * coeff(r)), m))
    })
}

pub fn spacetime_polynomial(r: &mut impl Rng) -> Expr {
    polynomial(r, &Var::ALL, 1.0)
}

/// `exp(0.5 * p(x1, x2, x3))`: positive, time-independent.
pub fn positive_medium(r: &mut impl Rng) -> Expr {
    Expr::call(ElemFn::Exp, polynomial(r, &Var::ALL[1..], 0.5))
}

/// Smooth scalar field mixing a travelling sinusoid with a polynomial.
pub fn smooth_field(r: &mut impl Rng) -> Expr {
    let k = [0, 1, 2].map(|_| 2.0 * coeff(r));
    let omega = 2.0 * coeff(r);
    let phase = coeff(r);
    let arg = (1..=3).fold(Expr::Const(phase), |acc, i| {
        add(acc, mul(Expr::Const(k[i - 1]), Expr::Var(Var::spatial(i))))
    });
    let arg = sub(arg, mul(Expr::Const(omega), Expr::Var(Var::T)));
    add(
        mul(Expr::Const(coeff(r)), Expr::call(ElemFn::Sin, arg)),
        polynomial(r, &Var::ALL, 0.5),
    )
}

/// Medium families for manufactured scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MediumFamily {
    Exponential,
    Polynomial,
    Mixed,
}

impl MediumFamily {
    pub const ALL: [MediumFamily; 3] = [MediumFamily::Exponential, MediumFamily::Polynomial, MediumFamily::Mixed];

    pub fn name(self) -> &'static str {
        match self {
            MediumFamily::Exponential => "exponential",
            MediumFamily::Polynomial => "polynomial",
            MediumFamily::Mixed => "mixed",
        }
    }
}

/// `exp(a . x)` with `|a_k| <= 1`.
fn exponential_profile(r: &mut impl Rng) -> Expr {
    let arg = (1..=3).fold(Expr::Const(0.0), |acc, k| {
        add(acc, mul(Expr::Const(coeff(r)), Expr::Var(Var::spatial(k))))
    });
    Expr::call(ElemFn::Exp, arg)
}

/// `1.5 + sum c_m m(x)` over degree <= 2 monomials with `|c_m| <= 0.1`;
/// at least 0.5 on the unit cube.
fn polynomial_profile(r: &mut impl Rng) -> Expr {
    let tail = monomials(&Var::ALL[1..])
        .into_iter()
        .skip(1)
        .fold(Expr::Const(0.0), |acc, m| add(acc, mul(Expr::Const(0.1 * coeff(r)), m)));
    add(Expr::Const(1.5), tail)
}

fn profile(r: &mut impl Rng, family: MediumFamily, which: usize) -> Expr {
    match family {
        MediumFamily::Exponential => exponential_profile(r),
        MediumFamily::Polynomial => polynomial_profile(r),
        MediumFamily::Mixed if which == 0 => mul(exponential_profile(r), polynomial_profile(r)),
        MediumFamily::Mixed => polynomial_profile(r),
    }
}

fn rot(a: &[Expr; 3]) -> [Expr; 3] {
    let d = |c: usize, k: usize| a[c].derivative(Var::spatial(k));
    [sub(d(2, 2), d(1, 3)), sub(d(0, 3), d(2, 1)), sub(d(1, 1), d(0, 2))]
}

fn fmt3(v: &[Expr; 3]) -> [String; 3] {
    [v[0].to_string(), v[1].to_string(), v[2].to_string()]
}

/// A field pair satisfying Faraday and `div(mu H) = 0` exactly in the given
/// (natural-unit) medium: `E = -dA/dt - grad phi`, `H = rot A / mu_r`.
pub fn admissible_fields(r: &mut impl Rng, mu_r: &Expr) -> ([Expr; 3], [Expr; 3]) {
    let a = [0, 1, 2].map(|_| smooth_field(r));
    let phi = smooth_field(r);
    let e = [0, 1, 2].map(|k| neg(add(a[k].derivative(Var::T), phi.derivative(Var::spatial(k + 1)))));
    let h = rot(&a).map(|c| div(c, mu_r.clone()));
    (e, h)
}

/// Manufactured scenario over an inhomogeneous natural-unit medium.
pub fn manufactured_scenario(seed: u64, family: MediumFamily) -> ScenarioFile {
    let mut r = rng(seed, 0x6d6d73);
    let eps_r = profile(&mut r, family, 0);
    let mu_r = profile(&mut r, family, 1);
    let (e, h) = admissible_fields(&mut r, &mu_r);
    ScenarioFile {
        name: format!("manufactured-{}-{seed}", family.name()),
        units: UnitMode::Natural,
        medium: MediumFile {
            eps_r: eps_r.to_string(),
            mu_r: mu_r.to_string(),
        },
        fields: FieldsFile {
            e: fmt3(&e),
            h: fmt3(&h),
            rho: Some(MANUFACTURED.to_string()),
            j: Some(VectorSource::Keyword(MANUFACTURED.to_string())),
        },
        bx: Box4::default(),
        samples: SamplesFile::Uniform(4),
        derivative_mode: DerivativeMode::Jet,
        fd_step: crate::jet::DEFAULT_FD_STEP,
        seed,
        tolerance: None,
        solution_tolerance: None,
    }
}

/// Same fields and medium, with the sources of the manufactured pair written
/// out as expressions, then `H` scaled by `h_factor`. With `h_factor != 1`
/// the result is not a solution.
pub fn explicit_source_variant(base: &ScenarioFile, h_factor: f64) -> ScenarioFile {
    let parse = |s: &str| crate::dsl::parse(s).expect("generated expression parses");
    let eps0 = crate::medium::UnitSystem::from_mode(base.units).eps0;
    let eps = mul(Expr::Const(eps0), parse(&base.medium.eps_r));
    let e = base.fields.e.each_ref().map(|s| parse(s));
    let h = base.fields.h.each_ref().map(|s| parse(s));
    let rho = (1..=3).fold(Expr::Const(0.0), |acc, k| {
        add(acc, mul(eps.clone(), e[k - 1].clone()).derivative(Var::spatial(k)))
    });
    let rot_h = rot(&h);
    let j = [0, 1, 2].map(|k| sub(rot_h[k].clone(), mul(eps.clone(), e[k].derivative(Var::T))));
    let scaled_h = h.map(|c| mul(Expr::Const(h_factor), c));

    let mut out = base.clone();
    out.name = format!("{}-h{h_factor}", base.name);
    out.fields.h = fmt3(&scaled_h);
    out.fields.rho = Some(rho.to_string());
    out.fields.j = Some(VectorSource::Components(fmt3(&j)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = (0..5).map(|_| coeff(&mut rng(42, 1))).collect();
        let b: Vec<f64> = (0..5).map(|_| coeff(&mut rng(42, 1))).collect();
        assert_eq!(a, b);
        let mut r1 = rng(42, 1);
        let mut r2 = rng(42, 2);
        assert_ne!(coeff(&mut r1), coeff(&mut r2));
    }

    #[test]
    fn media_are_positive_on_the_unit_box() {
        let mut r = rng(3, 0);
        let bx = Box4::default();
        for family in MediumFamily::ALL {
            for which in 0..2 {
                let m = profile(&mut r, family, which);
                for _ in 0..50 {
                    assert!(m.eval(point(&mut r, &bx)).unwrap() > 0.0);
                }
            }
        }
        let m = positive_medium(&mut r);
        assert!(!m.mentions(Var::T));
    }

    #[test]
    fn generated_scenarios_reparse() {
        let s = manufactured_scenario(5, MediumFamily::Mixed);
        let parsed = super::super::scenario::Scenario::from_file(&s).unwrap();
        assert!(parsed.sources.is_manufactured());
        let v = explicit_source_variant(&s, 2.0);
        let parsed = super::super::scenario::Scenario::from_file(&v).unwrap();
        assert!(!parsed.sources.is_manufactured());
    }
}
