//! Seeded property suite over the algebraic and differential identities the
//! quaternionic formulation rests on.

use rand::Rng;
use serde::Serialize;

use super::grid::Box4;
use super::random::{self, rng};
use super::report::Check;
use super::{HarnessError, VERSION};
use crate::biquat::{cross, scalar_product, scalar_product_anticommutator, Biquaternion};
use crate::dsl::Expr;
use crate::forms::{
    classical_residuals, decompose_residual, intermediate_residuals, m_term_identity, maxmain_residual,
    transform_fields, vacuum_residual, EMState, Form,
};
use crate::jet::{apply_d_assembled, apply_d_sum, BiquatJet, ElemFn, Jet4, Point4, VecFieldSample};
use crate::medium::{gradient_identity_residuals, MediumSpec, UnitSystem};

/// Tolerance for the pure algebra identities (relative, norm8).
pub const ALGEBRA_TOLERANCE: f64 = 1e-13;
/// Tolerance for differential and medium identities.
pub const DIFFERENTIAL_TOLERANCE: f64 = 1e-12;
/// Tolerance for `c sqrt(eps mu) = 1` and `W = sqrt(mu/eps)`.
pub const SPEED_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub version: String,
    pub seed: u64,
    pub count: usize,
    pub identities: Vec<Check>,
    pub pass: bool,
}

impl IdentityReport {
    pub fn to_json(&self) -> String {
        super::report::to_json(self)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.identities.iter().find(|c| c.name == name)
    }
}

/// Identity names, in report order. Each draws from its own random stream.
pub const IDENTITIES: [&str; 17] = [
    "associativity",
    "noncommutativity",
    "conj_complex_automorphism",
    "conj_complex_involution",
    "vector_product_law",
    "anticommutator_scalar_product",
    "d_operator_routes",
    "leibniz",
    "factorization",
    "medium_gradient",
    "medium_speed_impedance",
    "c_w_vectors",
    "m_term",
    "chain_consistency",
    "decomposition",
    "vacuum_reduction",
    "reconstruction",
];

pub fn run_identity_suite(seed: u64, count: usize) -> Result<IdentityReport, HarnessError> {
    run_identities(seed, count, &IDENTITIES)
}

/// Runs the named identities only. Each keeps the random stream it has in
/// the full suite, so results agree with [`run_identity_suite`].
pub fn run_identities(seed: u64, count: usize, names: &[&str]) -> Result<IdentityReport, HarnessError> {
    if count == 0 {
        return Err(HarnessError::Config("identity count must be at least 1".into()));
    }
    let mut identities = Vec::with_capacity(names.len());
    for name in names {
        let stream = IDENTITIES
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| HarnessError::Config(format!("unknown identity {name:?}")))?;
        let mut r = rng(seed, stream as u64);
        let (value, tol) = evaluate(name, &mut r, count)?;
        identities.push(Check::at_most(name, value, tol));
    }
    let pass = identities.iter().all(|c| c.pass);
    Ok(IdentityReport {
        version: VERSION.to_string(),
        seed,
        count,
        identities,
        pass,
    })
}

fn max_over<R: Rng>(
    r: &mut R,
    count: usize,
    mut f: impl FnMut(&mut R) -> Result<f64, HarnessError>,
) -> Result<f64, HarnessError> {
    let mut worst = 0.0_f64;
    for _ in 0..count {
        let v = f(r)?;
        // NaN must not be swallowed by max
        worst = if v.is_nan() { f64::NAN } else { worst.max(v) };
        if worst.is_nan() {
            break;
        }
    }
    Ok(worst)
}

fn evaluate<R: Rng>(name: &str, r: &mut R, count: usize) -> Result<(f64, f64), HarnessError> {
    let algebra = ALGEBRA_TOLERANCE;
    let diff = DIFFERENTIAL_TOLERANCE;
    let v = match name {
        "associativity" => (
            max_over(r, count, |r| {
                let (a, b, c) = (
                    random::biquaternion(r),
                    random::biquaternion(r),
                    random::biquaternion(r),
                );
                let scale = a.norm8() * b.norm8() * c.norm8();
                Ok(((a * b) * c - a * (b * c)).norm8() / scale)
            })?,
            algebra,
        ),
        "noncommutativity" => {
            let (i1, i2) = (Biquaternion::unit(1), Biquaternion::unit(2));
            ((i1 * i2 + i2 * i1).norm8(), 0.0)
        }
        "conj_complex_automorphism" => (
            max_over(r, count, |r| {
                let (a, b) = (random::biquaternion(r), random::biquaternion(r));
                let lhs = (a * b).conj_complex();
                let rhs = a.conj_complex() * b.conj_complex();
                let add = (a + b).conj_complex() - (a.conj_complex() + b.conj_complex());
                Ok(((lhs - rhs).norm8() / (a.norm8() * b.norm8())).max(add.norm8()))
            })?,
            algebra,
        ),
        "conj_complex_involution" => (
            max_over(r, count, |r| {
                let a = random::biquaternion(r);
                Ok((a.conj_complex().conj_complex() - a).norm8())
            })?,
            0.0,
        ),
        "vector_product_law" => (
            max_over(r, count, |r| {
                let (p, q) = (random::vectorial(r), random::vectorial(r));
                let (pv, qv) = (p.vec(), q.vec());
                let expected = Biquaternion::scalar(-scalar_product(&pv, &qv)) + Biquaternion::from(cross(&pv, &qv));
                Ok((p * q - expected).norm8() / (p.norm8() * q.norm8()))
            })?,
            algebra,
        ),
        "anticommutator_scalar_product" => (
            max_over(r, count, |r| {
                let (p, q) = (random::vectorial(r), random::vectorial(r));
                let (s, rest) = scalar_product_anticommutator(&p, &q)?;
                let direct = scalar_product(&p.vec(), &q.vec());
                let residue = Biquaternion::scalar(s - direct) + Biquaternion::from(rest);
                Ok(residue.norm8() / (p.norm8() * q.norm8()))
            })?,
            algebra,
        ),
        "d_operator_routes" => (
            max_over(r, count, |r| {
                let p = random::point(r, &Box4::default());
                let g = random_biquat_field(r, p)?;
                Ok((apply_d_assembled(&g) - apply_d_sum(&g)).norm8())
            })?,
            diff,
        ),
        "leibniz" => (
            max_over(r, count, |r| {
                let p = random::point(r, &Box4::default());
                let phi = random_scalar(r, p, false)?;
                let g = random_biquat_field(r, p)?;
                let lhs = apply_d_sum(&g.scaled_by(&phi));
                let grad_phi = Biquaternion::from(phi.grad());
                let rhs = grad_phi * g.val + apply_d_sum(&g).scale_re(phi.val);
                Ok((lhs - rhs).norm8() / lhs.norm8().max(1.0))
            })?,
            diff,
        ),
        "factorization" => (
            max_over(r, count, |r| {
                let p = random::point(r, &Box4::default());
                let phi = random_scalar(r, p, true)?;
                let g = random_biquat_field(r, p)?;
                let log_grad = Biquaternion::from(phi.grad().scale(1.0 / phi.val));
                let lhs = apply_d_sum(&g) + log_grad * g.val;
                let rhs = apply_d_sum(&g.scaled_by(&phi)).scale_re(1.0 / phi.val);
                Ok((lhs - rhs).norm8() / lhs.norm8().max(1.0))
            })?,
            diff,
        ),
        "medium_gradient" => (
            max_over(r, count, |r| {
                let (m, _) = random_medium_sample(r)?;
                let (a, b) = gradient_identity_residuals(&m);
                Ok(a.max_abs().max(b.max_abs()))
            })?,
            diff,
        ),
        "medium_speed_impedance" => (
            max_over(r, count, |r| {
                let (m, _) = random_medium_sample(r)?;
                let speed = (m.c * (m.eps * m.mu).sqrt() - 1.0).abs();
                let imp = (m.w - (m.mu / m.eps).sqrt()).abs() / m.w;
                Ok(speed.max(imp))
            })?,
            SPEED_TOLERANCE,
        ),
        "c_w_vectors" => (
            max_over(r, count, |r| {
                let (m, _) = random_medium_sample(r)?;
                let (cv, wv) = m.c_and_w_vectors();
                Ok((m.eps_vec + cv + wv).max_abs().max((m.mu_vec + cv - wv).max_abs()))
            })?,
            diff,
        ),
        "m_term" => (
            max_over(r, count, |r| {
                let (state, m) = random_state(r)?;
                Ok(m_term_identity(&transform_fields(&state, &m), &m).norm8())
            })?,
            diff,
        ),
        "chain_consistency" => (
            max_over(r, count, |r| {
                let (state, m) = random_state(r)?;
                let (m11, m12) = intermediate_residuals(&state, &m, Form::Min11_12);
                let (q1, q2) = intermediate_residuals(&state, &m, Form::Minq1_2);
                let (e1, h1) = (m11.scale_re(m.eps.sqrt()), m12.scale_re(m.mu.sqrt()));
                Ok(((q1 - e1).norm8() / e1.norm8().max(1e-300)).max((q2 - h1).norm8() / h1.norm8().max(1e-300)))
            })?,
            diff,
        ),
        "decomposition" => (
            max_over(r, count, |r| {
                let (state, m) = random_state(r)?;
                let predicted = decompose_residual(&maxmain_residual(&state, &m), &m);
                let direct = classical_residuals(&state, &m);
                Ok(predicted.max_deviation(&direct) / direct.max_abs().max(1.0))
            })?,
            diff,
        ),
        "vacuum_reduction" => (
            max_over(r, count, |r| {
                let p = random::point(r, &Box4::default());
                let m = MediumSpec::homogeneous(UnitSystem::NATURAL).sample(p)?;
                let state = EMState::source_free(random_vector(r, p)?, random_vector(r, p)?);
                let full = maxmain_residual(&state, &m).r;
                Ok((full - vacuum_residual(&state, &UnitSystem::NATURAL)).norm8())
            })?,
            1e-13,
        ),
        "reconstruction" => (
            max_over(r, count, |r| {
                let (state, m) = random_state(r)?;
                let s = transform_fields(&state, &m);
                Ok((s.reconstruct_e() - s.cal_e)
                    .max_abs()
                    .max((s.reconstruct_h() - s.cal_h).max_abs()))
            })?,
            0.0,
        ),
        other => unreachable!("unknown identity {other}"),
    };
    Ok(v)
}

fn jet_at(e: &Expr, p: Point4) -> Result<Jet4, HarnessError> {
    e.eval_jet(p).map_err(|source| HarnessError::Field {
        what: "random field",
        point: p,
        source,
    })
}

/// Random polynomial (or, when `positive`, exponential of a polynomial)
/// scalar jet at `p`.
fn random_scalar(r: &mut impl Rng, p: Point4, positive: bool) -> Result<Jet4, HarnessError> {
    let poly = random::spacetime_polynomial(r);
    let e = if positive || r.gen_bool(0.5) {
        Expr::call(ElemFn::Exp, crate::dsl::mul(Expr::Const(0.5), poly))
    } else {
        poly
    };
    jet_at(&e, p)
}

fn random_vector(r: &mut impl Rng, p: Point4) -> Result<VecFieldSample, HarnessError> {
    Ok(VecFieldSample([
        jet_at(&random::spacetime_polynomial(r), p)?,
        jet_at(&random::spacetime_polynomial(r), p)?,
        jet_at(&random::spacetime_polynomial(r), p)?,
    ]))
}

fn random_biquat_field(r: &mut impl Rng, p: Point4) -> Result<BiquatJet, HarnessError> {
    let mut comp = || jet_at(&random::spacetime_polynomial(r), p);
    let re = [comp()?, comp()?, comp()?, comp()?];
    let im = [comp()?, comp()?, comp()?, comp()?];
    Ok(BiquatJet::from_parts(re, im))
}

fn random_medium_sample(r: &mut impl Rng) -> Result<(crate::medium::MediumSample, Point4), HarnessError> {
    let spec = MediumSpec::new(
        random::positive_medium(r),
        random::positive_medium(r),
        UnitSystem::NATURAL,
    )?;
    let p = random::point(r, &Box4::default());
    Ok((spec.sample(p)?, p))
}

/// Random non-solution state in a random positive medium.
fn random_state(r: &mut impl Rng) -> Result<(EMState, crate::medium::MediumSample), HarnessError> {
    let (m, p) = random_medium_sample(r)?;
    let e = random_vector(r, p)?;
    let h = random_vector(r, p)?;
    let rho = Jet4::constant(random::coeff(r));
    let j = VecFieldSample([0, 1, 2].map(|_| Jet4::constant(random::coeff(r))));
    Ok((EMState { e, h, rho, j }, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_count_is_a_config_error() {
        assert!(matches!(run_identity_suite(1, 0), Err(HarnessError::Config(_))));
    }

    #[test]
    fn small_suite_passes_and_is_deterministic() {
        let a = run_identity_suite(7, 50).unwrap();
        assert!(a.pass, "{}", a.to_json());
        assert_eq!(a.identities.len(), IDENTITIES.len());
        assert_eq!(a.to_json(), run_identity_suite(7, 50).unwrap().to_json());
        assert_ne!(a.to_json(), run_identity_suite(8, 50).unwrap().to_json());
    }
}
