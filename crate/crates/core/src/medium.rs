//! Isotropic, time-independent media given by relative permittivity and
//! permeability profiles, and every derived quantity the quaternionic
//! formulation needs: `c`, `W` and the logarithmic gradients.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::biquat::Vec3;
use crate::dsl::{self, DslError, Expr, Var};
use crate::jet::{Jet4, JetError, Point4};

/// Vacuum permittivity, F/m (CODATA 2018).
pub const EPS0_SI: f64 = 8.8541878128e-12;
/// Vacuum permeability, H/m (CODATA 2018).
pub const MU0_SI: f64 = 1.25663706212e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitMode {
    #[serde(rename = "SI")]
    Si,
    #[serde(rename = "natural")]
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub mode: UnitMode,
    pub eps0: f64,
    pub mu0: f64,
}

impl UnitSystem {
    pub const NATURAL: UnitSystem = UnitSystem {
        mode: UnitMode::Natural,
        eps0: 1.0,
        mu0: 1.0,
    };

    pub const SI: UnitSystem = UnitSystem {
        mode: UnitMode::Si,
        eps0: EPS0_SI,
        mu0: MU0_SI,
    };

    pub fn from_mode(mode: UnitMode) -> Self {
        match mode {
            UnitMode::Si => UnitSystem::SI,
            UnitMode::Natural => UnitSystem::NATURAL,
        }
    }

    /// Speed of light in vacuum, `1/sqrt(eps0 mu0)`.
    pub fn c0(&self) -> f64 {
        1.0 / (self.eps0 * self.mu0).sqrt()
    }

    pub fn label(&self) -> &'static str {
        match self.mode {
            UnitMode::Si => "SI",
            UnitMode::Natural => "natural",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MediumError {
    #[error("{0} must not depend on t (media are time-independent)")]
    TimeDependent(&'static str),
    #[error("{which}: {source}")]
    Parse { which: &'static str, source: DslError },
    #[error("{which} = {value} is not positive at {point}")]
    NonPositive {
        which: &'static str,
        value: f64,
        point: Point4,
    },
    #[error("medium evaluation failed at {point}: {source}")]
    Eval { point: Point4, source: JetError },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MediumSpec {
    eps_r: Expr,
    mu_r: Expr,
    pub units: UnitSystem,
}

impl MediumSpec {
    pub fn new(eps_r: Expr, mu_r: Expr, units: UnitSystem) -> Result<Self, MediumError> {
        if eps_r.mentions(Var::T) {
            return Err(MediumError::TimeDependent("eps_r"));
        }
        if mu_r.mentions(Var::T) {
            return Err(MediumError::TimeDependent("mu_r"));
        }
        Ok(MediumSpec { eps_r, mu_r, units })
    }

    pub fn parse(eps_r: &str, mu_r: &str, units: UnitSystem) -> Result<Self, MediumError> {
        let eps = dsl::parse(eps_r).map_err(|source| MediumError::Parse { which: "eps_r", source })?;
        let mu = dsl::parse(mu_r).map_err(|source| MediumError::Parse { which: "mu_r", source })?;
        MediumSpec::new(eps, mu, units)
    }

    pub fn homogeneous(units: UnitSystem) -> Self {
        MediumSpec {
            eps_r: Expr::Const(1.0),
            mu_r: Expr::Const(1.0),
            units,
        }
    }

    pub fn eps_r(&self) -> &Expr {
        &self.eps_r
    }

    pub fn mu_r(&self) -> &Expr {
        &self.mu_r
    }

    /// Samples the medium with jet derivatives.
    pub fn sample(&self, p: Point4) -> Result<MediumSample, MediumError> {
        let eps_r = self
            .eps_r
            .eval_jet(p)
            .map_err(|source| MediumError::Eval { point: p, source })?;
        let mu_r = self
            .mu_r
            .eval_jet(p)
            .map_err(|source| MediumError::Eval { point: p, source })?;
        MediumSample::from_relative(eps_r, mu_r, self.units, p)
    }
}

/// Every medium quantity at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumSample {
    pub eps: f64,
    pub mu: f64,
    /// Wave speed `1/sqrt(eps mu)`.
    pub c: f64,
    /// Intrinsic impedance `sqrt(mu/eps)`.
    pub w: f64,
    /// `grad sqrt(eps) / sqrt(eps)`.
    pub eps_vec: Vec3,
    /// `grad sqrt(mu) / sqrt(mu)`.
    pub mu_vec: Vec3,
    /// `grad sqrt(c) / sqrt(c)`.
    pub c_vec: Vec3,
    /// `grad sqrt(W) / sqrt(W)`.
    pub w_vec: Vec3,
    pub grad_eps: Vec3,
    pub grad_mu: Vec3,
    pub grad_c: Vec3,
    pub grad_w: Vec3,
}

fn log_grad(j: &Jet4) -> Vec3 {
    j.grad().scale(1.0 / j.val)
}

impl MediumSample {
    /// Builds the sample from jets of `eps_r` and `mu_r` (jet or
    /// finite-difference derivatives alike).
    pub fn from_relative(eps_r: Jet4, mu_r: Jet4, units: UnitSystem, point: Point4) -> Result<Self, MediumError> {
        for (which, j) in [("eps_r", &eps_r), ("mu_r", &mu_r)] {
            if j.val.is_nan() || j.val <= 0.0 {
                return Err(MediumError::NonPositive {
                    which,
                    value: j.val,
                    point,
                });
            }
        }
        let eval = |r: Result<Jet4, JetError>| r.map_err(|source| MediumError::Eval { point, source });
        let eps = eps_r.scale(units.eps0);
        let mu = mu_r.scale(units.mu0);
        let sqrt_eps = eval(eps.sqrt())?;
        let sqrt_mu = eval(mu.sqrt())?;
        let c = eval(eval((eps * mu).sqrt())?.recip())?;
        let w = eval(eval(mu.checked_div(&eps))?.sqrt())?;
        let sqrt_c = eval(c.sqrt())?;
        let sqrt_w = eval(w.sqrt())?;
        Ok(MediumSample {
            eps: eps.val,
            mu: mu.val,
            c: c.val,
            w: w.val,
            eps_vec: log_grad(&sqrt_eps),
            mu_vec: log_grad(&sqrt_mu),
            c_vec: log_grad(&sqrt_c),
            w_vec: log_grad(&sqrt_w),
            grad_eps: eps.grad(),
            grad_mu: mu.grad(),
            grad_c: c.grad(),
            grad_w: w.grad(),
        })
    }

    /// Jet of `eps` (no time dependence).
    pub fn eps_jet(&self) -> Jet4 {
        spatial_jet(self.eps, self.grad_eps)
    }

    pub fn mu_jet(&self) -> Jet4 {
        spatial_jet(self.mu, self.grad_mu)
    }

    /// Jet of `sqrt(eps)`; its log-gradient is `eps_vec`.
    pub fn sqrt_eps_jet(&self) -> Jet4 {
        let s = self.eps.sqrt();
        spatial_jet(s, self.eps_vec.scale(s))
    }

    pub fn sqrt_mu_jet(&self) -> Jet4 {
        let s = self.mu.sqrt();
        spatial_jet(s, self.mu_vec.scale(s))
    }

    /// The pair `(c_vec, w_vec)`.
    pub fn c_and_w_vectors(&self) -> (Vec3, Vec3) {
        (self.c_vec, self.w_vec)
    }
}

fn spatial_jet(val: f64, grad: Vec3) -> Jet4 {
    Jet4::new(val, [0.0, grad[0], grad[1], grad[2]])
}

/// Residuals of `eps_vec + mu_vec = -grad c / c` and
/// `eps_vec - mu_vec = -grad W / W`. Both vanish for a consistent sample.
pub fn gradient_identity_residuals(m: &MediumSample) -> (Vec3, Vec3) {
    (
        m.eps_vec + m.mu_vec + m.grad_c.scale(1.0 / m.c),
        m.eps_vec - m.mu_vec + m.grad_w.scale(1.0 / m.w),
    )
}

pub fn check_gradient_identities(spec: &MediumSpec, p: Point4) -> Result<(Vec3, Vec3), MediumError> {
    Ok(gradient_identity_residuals(&spec.sample(p)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn natural(eps: &str, mu: &str) -> MediumSpec {
        MediumSpec::parse(eps, mu, UnitSystem::NATURAL).unwrap()
    }

    fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn homogeneous_vacuum_is_exactly_flat() {
        let m = natural("1", "1").sample(Point4::new(0.2, 0.1, 0.5, 0.9)).unwrap();
        assert_eq!((m.eps, m.mu, m.c, m.w), (1.0, 1.0, 1.0, 1.0));
        for v in [m.eps_vec, m.mu_vec, m.c_vec, m.w_vec, m.grad_c, m.grad_w] {
            assert_eq!(v, Vec3::ZERO);
        }
        assert_eq!(gradient_identity_residuals(&m), (Vec3::ZERO, Vec3::ZERO));
    }

    #[test]
    fn exponential_permittivity() {
        let spec = natural("exp(2*x3)", "1");
        for x3 in [-0.5, 0.0, 0.3, 1.0] {
            let p = Point4::new(0.0, 0.1, 0.2, x3);
            let m = spec.sample(p).unwrap();
            assert!(close(m.eps_vec, Vec3::new(0.0, 0.0, 1.0), 1e-15));
            assert_eq!(m.mu_vec, Vec3::ZERO);
            assert!((m.c - (-x3).exp()).abs() <= 1e-15 * m.c.max(1.0));
            assert!((m.w - (-x3).exp()).abs() <= 1e-15 * m.w.max(1.0));
            assert!(close(m.grad_c.scale(1.0 / m.c), Vec3::new(0.0, 0.0, -1.0), 1e-15));
            assert!(close(m.c_vec, Vec3::new(0.0, 0.0, -0.5), 1e-15));
            assert!(close(m.w_vec, Vec3::new(0.0, 0.0, -0.5), 1e-15));
            let (a, b) = check_gradient_identities(&spec, p).unwrap();
            assert!(a.max_abs() <= 1e-15 && b.max_abs() <= 1e-15);
        }
    }

    #[test]
    fn si_vacuum_speed() {
        let m = MediumSpec::homogeneous(UnitSystem::SI)
            .sample(Point4::default())
            .unwrap();
        assert!((m.c / 2.99792458e8 - 1.0).abs() < 1e-9, "{}", m.c);
        assert!((m.w / 376.730313668 - 1.0).abs() < 1e-9, "{}", m.w);
        assert!((UnitSystem::SI.c0() - m.c).abs() <= 1e-7);
    }

    #[test]
    fn c_and_w_vector_relations() {
        let spec = natural("2 + x1 * x2", "exp(0.3 * x3 - x1)");
        let m = spec.sample(Point4::new(0.0, 0.4, 0.7, -0.2)).unwrap();
        let (cv, wv) = m.c_and_w_vectors();
        assert!(close(cv.scale(-2.0), m.eps_vec + m.mu_vec, 1e-15));
        assert!(close(wv.scale(-2.0), m.eps_vec - m.mu_vec, 1e-15));
        assert!(close(m.eps_vec, -(cv + wv), 1e-15));
        assert!(close(m.mu_vec, -(cv - wv), 1e-15));
        assert!(close(m.eps_vec, m.grad_eps.scale(0.5 / m.eps), 1e-15));
    }

    #[test]
    fn rejects_bad_media() {
        assert!(matches!(
            MediumSpec::parse("1 + t", "1", UnitSystem::NATURAL),
            Err(MediumError::TimeDependent("eps_r"))
        ));
        let spec = natural("x1", "1");
        let err = spec.sample(Point4::new(0.0, -0.5, 0.0, 0.0)).unwrap_err();
        assert!(matches!(err, MediumError::NonPositive { which: "eps_r", .. }));
        assert!(err.to_string().contains("x1=-0.5"), "{err}");
        assert!(natural("1", "0").sample(Point4::default()).is_err());
        assert!(matches!(
            natural("sqrt(x1)", "1").sample(Point4::new(0.0, -1.0, 0.0, 0.0)),
            Err(MediumError::Eval { .. })
        ));
    }
}
