//! Evaluates every formulation over a scenario grid and certifies that they
//! agree.

use serde::Serialize;

use super::grid::sample_grid;
use super::random;
use super::report::{Check, NormAccumulator, NormStats};
use super::scenario::{DerivativeMode, Differentiation, Scenario, Sources};
use super::{HarnessError, VERSION};
use crate::biquat::Biquaternion;
use crate::dsl::Expr;
use crate::forms::{
    classical_residuals, decompose_residual, divergence_rewrite_residuals, intermediate_residuals, m_term_identity,
    maxmain_residual, sources_for, transform_fields, vacuum_residual, EMState, Form,
};
use crate::jet::{Jet4, Point4, VecFieldSample};
use crate::medium::{gradient_identity_residuals, MediumSample};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalStats {
    pub r1: NormStats,
    pub r2: NormStats,
    pub r3: NormStats,
    pub r4: NormStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceStats {
    pub electric: NormStats,
    pub magnetic: NormStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormulationStats {
    pub min11: NormStats,
    pub min12: NormStats,
    pub min21: NormStats,
    pub min22: NormStats,
    pub min31: NormStats,
    pub min32: NormStats,
    pub minq1: NormStats,
    pub minq2: NormStats,
    pub maxmain: NormStats,
    /// Present only when every grid point is homogeneous vacuum without sources.
    pub vacuum: Option<NormStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionStats {
    /// Max componentwise gap between the classical residuals recovered from
    /// the quaternionic residual and those evaluated directly.
    pub max_deviation: f64,
    /// Same, on seeded perturbations of the scenario state.
    pub perturbed_max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityStats {
    pub medium_gradient: f64,
    pub c_w_vectors: f64,
    pub m_term: f64,
    pub reconstruction: f64,
    pub chain_min21: f64,
    pub chain_min31: f64,
    pub chain_minq1: f64,
    pub chain_minq2: f64,
    pub vacuum_reduction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub max_abs_r2: f64,
    pub max_abs_r4: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equivalence {
    /// Every classical residual vanishes at every point.
    pub solution: bool,
    /// The quaternionic residual vanishes at every point.
    pub maxmain_vanishes: bool,
    /// Points (scenario or perturbed) where exactly one side vanishes.
    pub inconsistent_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub version: String,
    pub scenario: String,
    pub units: String,
    pub derivative_mode: DerivativeMode,
    pub fd_step: Option<f64>,
    pub seed: u64,
    pub points: usize,
    pub tolerance: f64,
    pub solution_tolerance: f64,
    pub sources: String,
    pub classical: ClassicalStats,
    pub divergence_rewrite: DivergenceStats,
    pub formulations: FormulationStats,
    pub decomposition: DecompositionStats,
    pub identities: IdentityStats,
    pub manufactured: Option<Admissibility>,
    pub equivalence: Equivalence,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl ResidualReport {
    pub fn to_json(&self) -> String {
        super::report::to_json(self)
    }
}

/// Fields, sources and medium at one point, with derivatives from the
/// scenario's differentiation mode.
pub fn evaluate_state(s: &Scenario, p: Point4) -> Result<(EMState, MediumSample), HarnessError> {
    let d = s.differentiation;
    let eval = |what: &'static str, e: &Expr| {
        d.eval(e, p)
            .map_err(|source| HarnessError::Field { what, point: p, source })
    };
    let eps_r = d
        .eval(s.medium.eps_r(), p)
        .map_err(|source| HarnessError::Medium(crate::medium::MediumError::Eval { point: p, source }))?;
    let mu_r = d
        .eval(s.medium.mu_r(), p)
        .map_err(|source| HarnessError::Medium(crate::medium::MediumError::Eval { point: p, source }))?;
    let m = MediumSample::from_relative(eps_r, mu_r, s.medium.units, p)?;

    let vector = |what: &'static str, exprs: &[Expr]| -> Result<VecFieldSample, HarnessError> {
        Ok(VecFieldSample([
            eval(what, &exprs[0])?,
            eval(what, &exprs[1])?,
            eval(what, &exprs[2])?,
        ]))
    };
    let e = vector("E", s.e.exprs())?;
    let h = vector("H", s.h.exprs())?;
    let (rho, j) = match &s.sources {
        Sources::Explicit { rho, j } => (eval("rho", rho)?, vector("j", j)?),
        Sources::Manufactured { rho, j } => {
            let (m_rho, m_j) = sources_for(&e, &h, &m);
            let rho = match rho {
                Some(r) => eval("rho", r)?,
                None => Jet4::constant(m_rho),
            };
            let j = match j {
                Some(j) => vector("j", j)?,
                None => VecFieldSample(m_j.0.map(Jet4::constant)),
            };
            (rho, j)
        }
    };
    Ok((EMState { e, h, rho, j }, m))
}

fn is_source_free_vacuum(state: &EMState, m: &MediumSample, s: &Scenario) -> bool {
    let units = s.medium.units;
    let flat = |v: crate::biquat::Vec3| v.0.iter().all(|x| *x == 0.0);
    m.eps == units.eps0
        && m.mu == units.mu0
        && flat(m.grad_eps)
        && flat(m.grad_mu)
        && state.rho.val == 0.0
        && flat(state.j.value())
}

fn rel(diff: Biquaternion, reference: Biquaternion) -> f64 {
    diff.norm8() / reference.norm8().max(1.0)
}

struct Perturbation {
    e: [Expr; 3],
    h: [Expr; 3],
}

impl Perturbation {
    fn new(seed: u64) -> Self {
        let mut r = random::rng(seed, 0x7065_7274);
        Perturbation {
            e: [0, 1, 2].map(|_| random::spacetime_polynomial(&mut r)),
            h: [0, 1, 2].map(|_| random::spacetime_polynomial(&mut r)),
        }
    }

    fn apply(&self, state: &EMState, p: Point4) -> Result<EMState, HarnessError> {
        let sample = |exprs: &[Expr; 3]| -> Result<VecFieldSample, HarnessError> {
            let mut out = [Jet4::default(); 3];
            for (o, e) in out.iter_mut().zip(exprs) {
                *o = e.eval_jet(p).map_err(|source| HarnessError::Field {
                    what: "perturbation",
                    point: p,
                    source,
                })?;
            }
            Ok(VecFieldSample(out))
        };
        Ok(EMState {
            e: state.e.add(&sample(&self.e)?),
            h: state.h.add(&sample(&self.h)?),
            ..*state
        })
    }
}

#[derive(Default)]
struct Accumulators {
    r: [NormAccumulator; 4],
    div: [NormAccumulator; 2],
    forms: [NormAccumulator; 8],
    maxmain: NormAccumulator,
    vacuum: NormAccumulator,
    decomposition: NormAccumulator,
    perturbed: NormAccumulator,
    medium: NormAccumulator,
    c_w: NormAccumulator,
    m_term: NormAccumulator,
    reconstruction: NormAccumulator,
    chain: [NormAccumulator; 4],
    vacuum_reduction: NormAccumulator,
    all_vacuum: bool,
    solution: bool,
    maxmain_vanishes: bool,
    inconsistent: usize,
}

/// Runs every evaluator over the scenario grid.
pub fn run_scenario(s: &Scenario) -> Result<ResidualReport, HarnessError> {
    let points = sample_grid(&s.bx, s.samples)?;

    // Medium validity is checked at every point before anything else runs.
    for p in &points {
        evaluate_state(s, *p)?;
    }

    let perturbation = Perturbation::new(s.seed);
    let sol_tol = s.solution_tolerance;
    let mut acc = Accumulators {
        all_vacuum: true,
        solution: true,
        maxmain_vanishes: true,
        ..Default::default()
    };

    for p in &points {
        let (state, m) = evaluate_state(s, *p)?;
        let classical = classical_residuals(&state, &m);
        acc.r[0].push(classical.r1.norm());
        acc.r[1].push(classical.r2.norm());
        acc.r[2].push(classical.r3);
        acc.r[3].push(classical.r4);
        let (de, dh) = divergence_rewrite_residuals(&state, &m);
        acc.div[0].push(de);
        acc.div[1].push(dh);

        let mut pairs = [(Biquaternion::ZERO, Biquaternion::ZERO); 4];
        for (k, form) in Form::ALL.into_iter().enumerate() {
            pairs[k] = intermediate_residuals(&state, &m, form);
            acc.forms[2 * k].push(pairs[k].0.norm8());
            acc.forms[2 * k + 1].push(pairs[k].1.norm8());
        }
        let (m11, m12) = pairs[0];
        let se = m.eps.sqrt();
        let sm = m.mu.sqrt();
        acc.chain[0].push(rel(pairs[1].0 - m11, m11).max(rel(pairs[1].1 - m12, m12)));
        acc.chain[1].push(rel(pairs[2].0 - m11, m11).max(rel(pairs[2].1 - m12, m12)));
        acc.chain[2].push(rel(pairs[3].0 - m11.scale_re(se), m11.scale_re(se)));
        acc.chain[3].push(rel(pairs[3].1 - m12.scale_re(sm), m12.scale_re(sm)));

        let r = maxmain_residual(&state, &m);
        acc.maxmain.push(r.norm8());
        acc.decomposition
            .push(decompose_residual(&r, &m).max_deviation(&classical));

        let (gi1, gi2) = gradient_identity_residuals(&m);
        acc.medium.push(gi1.max_abs().max(gi2.max_abs()));
        acc.c_w.push(
            (m.c_vec.scale(-2.0) - (m.eps_vec + m.mu_vec))
                .max_abs()
                .max((m.w_vec.scale(-2.0) - (m.eps_vec - m.mu_vec)).max_abs()),
        );
        let scaled = transform_fields(&state, &m);
        acc.m_term.push(m_term_identity(&scaled, &m).norm8());
        acc.reconstruction.push(
            (scaled.reconstruct_e() - scaled.cal_e)
                .max_abs()
                .max((scaled.reconstruct_h() - scaled.cal_h).max_abs()),
        );

        if is_source_free_vacuum(&state, &m, s) {
            let v = vacuum_residual(&state, &s.medium.units);
            acc.vacuum.push(v.norm8());
            acc.vacuum_reduction.push((r.r - v).norm8());
        } else {
            acc.all_vacuum = false;
        }

        let classical_zero = classical.max_abs() <= sol_tol;
        let maxmain_zero = r.norm8() <= sol_tol;
        acc.solution &= classical_zero;
        acc.maxmain_vanishes &= maxmain_zero;
        acc.inconsistent += usize::from(classical_zero != maxmain_zero);

        let perturbed = perturbation.apply(&state, *p)?;
        let pc = classical_residuals(&perturbed, &m);
        let pr = maxmain_residual(&perturbed, &m);
        acc.perturbed.push(decompose_residual(&pr, &m).max_deviation(&pc));
        acc.inconsistent += usize::from((pc.max_abs() <= sol_tol) != (pr.norm8() <= sol_tol));
    }

    let manufactured = if s.sources.is_manufactured() {
        let max_abs_r2 = acc.r[1].max();
        let max_abs_r4 = acc.r[3].max();
        if !(max_abs_r2 <= sol_tol && max_abs_r4 <= sol_tol) {
            return Err(HarnessError::Inadmissible { max_abs_r2, max_abs_r4 });
        }
        Some(Admissibility {
            admissible: true,
            max_abs_r2,
            max_abs_r4,
        })
    } else {
        None
    };

    let tol = s.tolerance;
    let vacuum_reduction = acc.all_vacuum.then(|| acc.vacuum_reduction.max());
    let identities = IdentityStats {
        medium_gradient: acc.medium.max(),
        c_w_vectors: acc.c_w.max(),
        m_term: acc.m_term.max(),
        reconstruction: acc.reconstruction.max(),
        chain_min21: acc.chain[0].max(),
        chain_min31: acc.chain[1].max(),
        chain_minq1: acc.chain[2].max(),
        chain_minq2: acc.chain[3].max(),
        vacuum_reduction,
    };
    let decomposition = DecompositionStats {
        max_deviation: acc.decomposition.max(),
        perturbed_max_deviation: acc.perturbed.max(),
    };

    let mut checks = vec![
        Check::at_most("decomposition", decomposition.max_deviation, tol),
        Check::at_most("decomposition_perturbed", decomposition.perturbed_max_deviation, tol),
        Check::at_most("medium_gradient_identities", identities.medium_gradient, tol),
        Check::at_most("c_w_vectors", identities.c_w_vectors, tol),
        Check::at_most("m_term_identity", identities.m_term, tol),
        Check::at_most("reconstruction", identities.reconstruction, tol),
        Check::at_most("chain_min21", identities.chain_min21, tol),
        Check::at_most("chain_min31", identities.chain_min31, tol),
        Check::at_most("chain_minq1", identities.chain_minq1, tol),
        Check::at_most("chain_minq2", identities.chain_minq2, tol),
        Check::holds("equivalence", acc.inconsistent == 0),
    ];
    if let Some(v) = vacuum_reduction {
        checks.push(Check::at_most("vacuum_reduction", v, tol));
    }
    let pass = checks.iter().all(|c| c.pass);

    Ok(ResidualReport {
        version: VERSION.to_string(),
        scenario: s.name.clone(),
        units: s.medium.units.label().to_string(),
        derivative_mode: s.derivative_mode(),
        fd_step: match s.differentiation {
            Differentiation::Fd { h } => Some(h),
            Differentiation::Jet => None,
        },
        seed: s.seed,
        points: points.len(),
        tolerance: tol,
        solution_tolerance: sol_tol,
        sources: if s.sources.is_manufactured() {
            "manufactured"
        } else {
            "explicit"
        }
        .to_string(),
        classical: ClassicalStats {
            r1: acc.r[0].stats(),
            r2: acc.r[1].stats(),
            r3: acc.r[2].stats(),
            r4: acc.r[3].stats(),
        },
        divergence_rewrite: DivergenceStats {
            electric: acc.div[0].stats(),
            magnetic: acc.div[1].stats(),
        },
        formulations: FormulationStats {
            min11: acc.forms[0].stats(),
            min12: acc.forms[1].stats(),
            min21: acc.forms[2].stats(),
            min22: acc.forms[3].stats(),
            min31: acc.forms[4].stats(),
            min32: acc.forms[5].stats(),
            minq1: acc.forms[6].stats(),
            minq2: acc.forms[7].stats(),
            maxmain: acc.maxmain.stats(),
            vacuum: acc.all_vacuum.then(|| acc.vacuum.stats()),
        },
        decomposition,
        identities,
        manufactured,
        equivalence: Equivalence {
            solution: acc.solution,
            maxmain_vanishes: acc.maxmain_vanishes,
            inconsistent_points: acc.inconsistent,
        },
        checks,
        pass,
    })
}

/// Sampled manufactured sources at every grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceSample {
    pub point: [f64; 4],
    pub rho: f64,
    pub j: [f64; 3],
}

pub fn sample_sources(s: &Scenario) -> Result<Vec<SourceSample>, HarnessError> {
    let points = sample_grid(&s.bx, s.samples)?;
    points
        .into_iter()
        .map(|p| {
            let (state, m) = evaluate_state(s, p)?;
            let (rho, j) = sources_for(&state.e, &state.h, &m);
            Ok(SourceSample {
                point: p.coords(),
                rho,
                j: j.0,
            })
        })
        .collect()
}
