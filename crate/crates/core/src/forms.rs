//! Pointwise residual evaluators for every formulation of Maxwell's system in
//! an inhomogeneous medium, from the classical four equations down to the
//! single quaternionic equation
//!
//! ```text
//! (1/c d_t + i D) f - M^{i c_vec} f - M^{i w_vec} f* = -(sqrt(mu) j + i rho / sqrt(eps))
//! ```
//!
//! with `f = sqrt(eps) E + i sqrt(mu) H`. Each evaluator returns `LHS - RHS`.
//! The evaluators use deliberately different routes (vector calculus on `E`
//! and `H`, the assembled `D` on real fields, and the product form of `D` on
//! the complex field `f`) so that agreement between them is a real check.

use crate::biquat::{scalar_product, Biquaternion, Complex, Vec3, Vec3C};
use crate::dsl::FieldSpec;
use crate::jet::{apply_d, apply_d_sum, BiquatJet, Jet4, JetError, Point4, VecFieldSample};
use crate::medium::{MediumError, MediumSample, MediumSpec, UnitSystem};

/// Electromagnetic state at one point: fields with first derivatives and
/// the sources. Only the values of `rho` and `j` enter any residual.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EMState {
    pub e: VecFieldSample,
    pub h: VecFieldSample,
    pub rho: Jet4,
    pub j: VecFieldSample,
}

impl EMState {
    pub fn source_free(e: VecFieldSample, h: VecFieldSample) -> Self {
        EMState {
            e,
            h,
            ..Default::default()
        }
    }
}

/// `calE = sqrt(eps) E`, `calH = sqrt(mu) H` and `f = calE + i calH`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledFields {
    pub cal_e: Vec3,
    pub cal_h: Vec3,
    pub f: Biquaternion,
}

impl ScaledFields {
    /// `(f + f*) / 2`.
    pub fn reconstruct_e(&self) -> Vec3 {
        (self.f + self.f.conj_complex()).scale_re(0.5).vec().re()
    }

    /// `(f - f*) / 2i`.
    pub fn reconstruct_h(&self) -> Vec3 {
        (self.f - self.f.conj_complex())
            .scale(Complex::new(0.0, -0.5))
            .vec()
            .re()
    }

    /// Inverse transform back to `(E, H)`.
    pub fn unscale(&self, m: &MediumSample) -> (Vec3, Vec3) {
        (
            self.reconstruct_e().scale(1.0 / m.eps.sqrt()),
            self.reconstruct_h().scale(1.0 / m.mu.sqrt()),
        )
    }
}

pub fn transform_fields(state: &EMState, m: &MediumSample) -> ScaledFields {
    let cal_e = state.e.value().scale(m.eps.sqrt());
    let cal_h = state.h.value().scale(m.mu.sqrt());
    ScaledFields {
        cal_e,
        cal_h,
        f: Vec3C::from_parts(cal_e, cal_h).into(),
    }
}

/// Residuals of the four classical equations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassicalResiduals {
    /// Ampere: `rot H - eps dE/dt - j`.
    pub r1: Vec3,
    /// Faraday: `rot E + mu dH/dt`.
    pub r2: Vec3,
    /// Gauss: `div(eps E) - rho`.
    pub r3: f64,
    /// `div(mu H)`.
    pub r4: f64,
}

impl ClassicalResiduals {
    pub fn max_abs(&self) -> f64 {
        self.r1
            .max_abs()
            .max(self.r2.max_abs())
            .max(self.r3.abs())
            .max(self.r4.abs())
    }

    /// Largest componentwise difference.
    pub fn max_deviation(&self, other: &ClassicalResiduals) -> f64 {
        (self.r1 - other.r1)
            .max_abs()
            .max((self.r2 - other.r2).max_abs())
            .max((self.r3 - other.r3).abs())
            .max((self.r4 - other.r4).abs())
    }
}

pub fn classical_residuals(state: &EMState, m: &MediumSample) -> ClassicalResiduals {
    let eps = m.eps_jet();
    let mu = m.mu_jet();
    ClassicalResiduals {
        r1: state.h.rot() - state.e.dt().scale(m.eps) - state.j.value(),
        r2: state.e.rot() + state.h.dt().scale(m.mu),
        r3: state.e.scaled_by(&eps).div() - state.rho.val,
        r4: state.h.scaled_by(&mu).div(),
    }
}

/// Residuals of `div E + <grad eps/eps, E> = rho/eps` and
/// `div H + <grad mu/mu, H> = 0`.
pub fn divergence_rewrite_residuals(state: &EMState, m: &MediumSample) -> (f64, f64) {
    let e = state.e.value();
    let h = state.h.value();
    (
        state.e.div() + m.grad_eps.scale(1.0 / m.eps).dot(e) - state.rho.val / m.eps,
        state.h.div() + m.grad_mu.scale(1.0 / m.mu).dot(h),
    )
}

/// The intermediate quaternionic forms of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// `D E = <grad eps/eps, E> - mu dH/dt - rho/eps` and its `H` partner.
    Min11_12,
    /// Scalar product traded for left and right multiplication by `grad eps / eps`.
    Min21_22,
    /// `(1/sqrt eps) D(sqrt(eps) E) + E eps_vec = ...` and its `H` partner.
    Min31_32,
    /// `(D + M^{eps_vec}) calE = -(1/c) d calH/dt - rho/sqrt(eps)` and partner.
    Minq1_2,
}

impl Form {
    pub const ALL: [Form; 4] = [Form::Min11_12, Form::Min21_22, Form::Min31_32, Form::Minq1_2];

    pub fn labels(self) -> (&'static str, &'static str) {
        match self {
            Form::Min11_12 => ("min11", "min12"),
            Form::Min21_22 => ("min21", "min22"),
            Form::Min31_32 => ("min31", "min32"),
            Form::Minq1_2 => ("minq1", "minq2"),
        }
    }
}

fn real(x: f64) -> Biquaternion {
    Biquaternion::real_scalar(x)
}

fn vq(v: Vec3) -> Biquaternion {
    Biquaternion::from(v)
}

/// `LHS - RHS` of the chosen pair, as (electric equation, magnetic equation).
pub fn intermediate_residuals(state: &EMState, m: &MediumSample, form: Form) -> (Biquaternion, Biquaternion) {
    let e = vq(state.e.value());
    let h = vq(state.h.value());
    let mu_dh = vq(state.h.dt().scale(m.mu));
    let eps_de = vq(state.e.dt().scale(m.eps));
    let j = vq(state.j.value());
    let rho_eps = real(state.rho.val / m.eps);
    let de = apply_d(None, &state.e);
    let dh = apply_d(None, &state.h);
    let ge = m.grad_eps.scale(1.0 / m.eps);
    let gm = m.grad_mu.scale(1.0 / m.mu);

    match form {
        Form::Min11_12 => {
            let se = scalar_product(&Vec3C::from_real(ge), &Vec3C::from_real(state.e.value()));
            let sh = scalar_product(&Vec3C::from_real(gm), &Vec3C::from_real(state.h.value()));
            (
                de - Biquaternion::scalar(se) + mu_dh + rho_eps,
                dh - Biquaternion::scalar(sh) - eps_de - j,
            )
        }
        Form::Min21_22 => {
            let (ae, am) = (vq(ge), vq(gm));
            (
                de + (ae * e).scale_re(0.5) + (e * ae).scale_re(0.5) + mu_dh + rho_eps,
                dh + (am * h).scale_re(0.5) + (h * am).scale_re(0.5) - eps_de - j,
            )
        }
        Form::Min31_32 => {
            let se = m.sqrt_eps_jet();
            let sm = m.sqrt_mu_jet();
            let d_se = apply_d(None, &state.e.scaled_by(&se)).scale_re(1.0 / se.val);
            let d_sm = apply_d(None, &state.h.scaled_by(&sm)).scale_re(1.0 / sm.val);
            (
                d_se + e * vq(m.eps_vec) + mu_dh + rho_eps,
                d_sm + h * vq(m.mu_vec) - eps_de - j,
            )
        }
        Form::Minq1_2 => {
            let se = m.sqrt_eps_jet();
            let sm = m.sqrt_mu_jet();
            let cal_e = state.e.scaled_by(&se);
            let cal_h = state.h.scaled_by(&sm);
            let inv_c = 1.0 / m.c;
            (
                apply_d(None, &cal_e)
                    + vq(cal_e.value()) * vq(m.eps_vec)
                    + vq(cal_h.dt().scale(inv_c))
                    + real(state.rho.val / se.val),
                apply_d(None, &cal_h) + vq(cal_h.value()) * vq(m.mu_vec)
                    - vq(cal_e.dt().scale(inv_c))
                    - j.scale_re(sm.val),
            )
        }
    }
}

/// Full residual of the single quaternionic equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxmainResidual {
    pub r: Biquaternion,
}

impl MaxmainResidual {
    pub fn sc_re(&self) -> f64 {
        self.r.sc().re
    }

    pub fn sc_im(&self) -> f64 {
        self.r.sc().im
    }

    pub fn vec_re(&self) -> Vec3 {
        self.r.vec().re()
    }

    pub fn vec_im(&self) -> Vec3 {
        self.r.vec().im()
    }

    pub fn norm8(&self) -> f64 {
        self.r.norm8()
    }
}

/// Jet of `f = sqrt(eps) E + i sqrt(mu) H`.
pub fn f_jet(state: &EMState, m: &MediumSample) -> BiquatJet {
    BiquatJet::vectorial(
        &state.e.scaled_by(&m.sqrt_eps_jet()),
        &state.h.scaled_by(&m.sqrt_mu_jet()),
    )
}

pub fn maxmain_residual(state: &EMState, m: &MediumSample) -> MaxmainResidual {
    let f = f_jet(state, m);
    let fv = f.val;
    let i_c = vq(m.c_vec).mul_i();
    let i_w = vq(m.w_vec).mul_i();
    let operator = f.dt().scale_re(1.0 / m.c) + apply_d_sum(&f).mul_i();
    let lhs = operator - fv * i_c - fv.conj_complex() * i_w;
    let rhs = -(vq(state.j.value()).scale_re(m.mu.sqrt()) + real(state.rho.val / m.eps.sqrt()).mul_i());
    MaxmainResidual { r: lhs - rhs }
}

/// `(1/c0 d_t + i D) f` with `f = sqrt(eps0) E + i sqrt(mu0) H`; the vacuum
/// equation, valid only for a homogeneous vacuum with no sources.
pub fn vacuum_residual(state: &EMState, units: &UnitSystem) -> Biquaternion {
    let f = BiquatJet::vectorial(&state.e.scale(units.eps0.sqrt()), &state.h.scale(units.mu0.sqrt()));
    f.dt().scale_re(1.0 / units.c0()) + apply_d_sum(&f).mul_i()
}

/// `M^{eps_vec} calE + i M^{mu_vec} calH + (M^{c_vec} f + M^{w_vec} f*)`,
/// which vanishes identically for a consistent medium sample.
pub fn m_term_identity(scaled: &ScaledFields, m: &MediumSample) -> Biquaternion {
    let f = scaled.f;
    vq(scaled.cal_e) * vq(m.eps_vec)
        + (vq(scaled.cal_h) * vq(m.mu_vec)).mul_i()
        + f * vq(m.c_vec)
        + f.conj_complex() * vq(m.w_vec)
}

/// Sources that make `(E, H)` satisfy Ampere and Gauss exactly:
/// `rho = div(eps E)`, `j = rot H - eps dE/dt`.
pub fn sources_for(e: &VecFieldSample, h: &VecFieldSample, m: &MediumSample) -> (f64, Vec3) {
    let rho = e.scaled_by(&m.eps_jet()).div();
    let j = h.rot() - e.dt().scale(m.eps);
    (rho, j)
}

#[derive(Debug, thiserror::Error)]
pub enum SourceError {
    #[error(transparent)]
    Medium(#[from] MediumError),
    #[error("field evaluation failed at {point}: {source}")]
    Field { point: Point4, source: JetError },
}

pub fn extract_sources(e: &FieldSpec, h: &FieldSpec, spec: &MediumSpec, p: Point4) -> Result<(f64, Vec3), SourceError> {
    let m = spec.sample(p)?;
    let field = |f: &FieldSpec| {
        f.eval_vector(p)
            .map_err(|source| SourceError::Field { point: p, source })
    };
    Ok(sources_for(&field(e)?, &field(h)?, &m))
}

/// Recovers the classical residuals from the quaternionic residual alone:
///
/// ```text
/// sc_re(R)  =  r4 / sqrt(mu)      vec_re(R) = -sqrt(mu)  r1
/// sc_im(R)  = -r3 / sqrt(eps)     vec_im(R) =  sqrt(eps) r2
/// ```
pub fn decompose_residual(r: &MaxmainResidual, m: &MediumSample) -> ClassicalResiduals {
    let se = m.eps.sqrt();
    let sm = m.mu.sqrt();
    ClassicalResiduals {
        r1: r.vec_re().scale(-1.0 / sm),
        r2: r.vec_im().scale(1.0 / se),
        r3: -se * r.sc_im(),
        r4: sm * r.sc_re(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::FieldSpec;

    fn state(e: [&str; 3], h: [&str; 3], p: Point4) -> EMState {
        let e = FieldSpec::vector("E", &e).unwrap().eval_vector(p).unwrap();
        let h = FieldSpec::vector("H", &h).unwrap().eval_vector(p).unwrap();
        EMState::source_free(e, h)
    }

    fn vacuum() -> MediumSample {
        MediumSpec::homogeneous(UnitSystem::NATURAL)
            .sample(Point4::default())
            .unwrap()
    }

    const PLANE_E: [&str; 3] = ["cos(x3 - t)", "0", "0"];
    const PLANE_H: [&str; 3] = ["0", "cos(x3 - t)", "0"];

    #[test]
    fn transform_examples() {
        let m = vacuum();
        assert_eq!(transform_fields(&EMState::default(), &m).f, Biquaternion::ZERO);

        let s = state(["1", "0", "0"], ["0", "1", "0"], Point4::default());
        let t = transform_fields(&s, &m);
        assert_eq!(t.f, Biquaternion::unit(1) + Biquaternion::unit(2).mul_i());
        assert_eq!(t.f.sc(), Complex::new(0.0, 0.0));

        let m4 = MediumSpec::parse("4", "1", UnitSystem::NATURAL)
            .unwrap()
            .sample(Point4::default())
            .unwrap();
        let t = transform_fields(&state(["1", "0", "0"], ["0", "0", "0"], Point4::default()), &m4);
        assert_eq!(t.cal_e, Vec3::new(2.0, 0.0, 0.0));
        let (e, h) = t.unscale(&m4);
        assert_eq!((e, h), (Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO));
    }

    #[test]
    fn classical_examples() {
        let m = vacuum();
        assert_eq!(
            classical_residuals(&EMState::default(), &m),
            ClassicalResiduals::default()
        );

        let mut s = state(["x1", "0", "0"], ["0", "0", "0"], Point4::new(0.0, 0.3, 0.0, 0.0));
        s.rho = Jet4::constant(1.0);
        assert_eq!(classical_residuals(&s, &m).max_abs(), 0.0);

        for p in [Point4::new(0.1, 0.2, 0.3, 0.4), Point4::new(0.9, -1.0, 2.0, 0.5)] {
            let s = state(PLANE_E, PLANE_H, p);
            assert!(classical_residuals(&s, &m).max_abs() <= 1e-13);
        }
    }

    #[test]
    fn maxmain_examples() {
        let m = vacuum();
        assert_eq!(maxmain_residual(&EMState::default(), &m).r, Biquaternion::ZERO);

        let s = EMState {
            rho: Jet4::constant(1.0),
            ..Default::default()
        };
        let r = maxmain_residual(&s, &m);
        assert_eq!(r.r, Biquaternion::imag_unit());
        let d = decompose_residual(&r, &m);
        assert_eq!(d, classical_residuals(&s, &m));
        assert_eq!(d.r3, -1.0);

        let s = state(PLANE_E, PLANE_H, Point4::new(0.3, 0.1, 0.2, 0.7));
        assert!(maxmain_residual(&s, &m).norm8() <= 1e-12);
        assert!(vacuum_residual(&s, &UnitSystem::NATURAL).norm8() <= 1e-12);
    }

    #[test]
    fn static_uniform_field_in_vacuum() {
        let s = state(["2", "-1", "0.5"], ["0", "0", "0"], Point4::default());
        assert_eq!(vacuum_residual(&s, &UnitSystem::NATURAL), Biquaternion::ZERO);
        assert_eq!(vacuum_residual(&s, &UnitSystem::SI), Biquaternion::ZERO);
    }

    #[test]
    fn doubled_h_is_detected_and_decomposed() {
        let m = vacuum();
        let p = Point4::new(0.3, 0.1, 0.2, 0.7);
        let s = state(PLANE_E, ["0", "2 * cos(x3 - t)", "0"], p);
        let r = maxmain_residual(&s, &m);
        let c = classical_residuals(&s, &m);
        assert!(r.norm8() > 0.1);
        assert!(decompose_residual(&r, &m).max_deviation(&c) <= 1e-12);
    }

    #[test]
    fn source_extraction_examples() {
        let spec = MediumSpec::homogeneous(UnitSystem::NATURAL);
        let zero = FieldSpec::vector("H", &["0", "0", "0"]).unwrap();
        let e = FieldSpec::vector("E", &["x1", "0", "0"]).unwrap();
        let p = Point4::new(0.0, 0.25, 0.5, 0.75);
        assert_eq!(extract_sources(&e, &zero, &spec, p).unwrap(), (1.0, Vec3::ZERO));

        let h = FieldSpec::vector("H", &["0", "0", "x1"]).unwrap();
        let ez = FieldSpec::vector("E", &["0", "0", "0"]).unwrap();
        assert_eq!(
            extract_sources(&ez, &h, &spec, p).unwrap(),
            (0.0, Vec3::new(0.0, -1.0, 0.0))
        );

        let e = FieldSpec::vector("E", &PLANE_E).unwrap();
        let h = FieldSpec::vector("H", &PLANE_H).unwrap();
        let (rho, j) = extract_sources(&e, &h, &spec, Point4::new(0.2, 0.0, 0.0, 0.9)).unwrap();
        assert!(rho.abs() <= 1e-15 && j.max_abs() <= 1e-15);
    }

    #[test]
    fn divergence_rewrite_in_exponential_medium() {
        let spec = MediumSpec::parse("exp(2*x3)", "1", UnitSystem::NATURAL).unwrap();
        let p = Point4::new(0.0, 0.1, 0.2, 0.3);
        let m = spec.sample(p).unwrap();
        let e = FieldSpec::vector("E", &["0", "0", "1"]).unwrap();
        let h = FieldSpec::vector("H", &["0", "0", "0"]).unwrap();
        let (rho, _) = extract_sources(&e, &h, &spec, p).unwrap();
        assert!((rho - 2.0 * m.eps).abs() <= 1e-14);
        let mut s = state(["0", "0", "1"], ["0", "0", "0"], p);
        s.rho = Jet4::constant(rho);
        let (a, b) = divergence_rewrite_residuals(&s, &m);
        assert!(a.abs() <= 1e-15 && b == 0.0);

        let homogeneous = vacuum();
        let s = state(["x1 * x2", "x3", "t"], ["x2", "0", "x1"], p);
        let (a, b) = divergence_rewrite_residuals(&s, &homogeneous);
        assert_eq!((a, b), (s.e.div(), s.h.div()));
    }
}
