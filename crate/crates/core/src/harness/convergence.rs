//! Finite-difference derivatives checked against jets over a scenario grid.

use serde::Serialize;

use super::grid::sample_grid;
use super::scenario::{Scenario, Sources};
use super::{HarnessError, VERSION};
use crate::dsl::Expr;
use crate::jet::fd_jet;

/// Accepted band for the fitted order of central differences.
pub const ORDER_BAND: [f64; 2] = [1.9, 2.1];
/// Errors at or below this level everywhere count as exact (e.g. linear fields).
pub const ROUND_OFF_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepError {
    pub h: f64,
    pub max_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub version: String,
    pub scenario: String,
    pub points: usize,
    pub expressions: usize,
    pub steps: Vec<StepError>,
    /// Least-squares slope of `log(max_error)` against `log(h)`; absent when
    /// every error is at round-off level.
    pub fitted_order: Option<f64>,
    pub exact: bool,
    pub pass: bool,
}

impl ConvergenceReport {
    pub fn to_json(&self) -> String {
        super::report::to_json(self)
    }
}

fn expressions(s: &Scenario) -> Vec<&Expr> {
    let mut out: Vec<&Expr> = vec![s.medium.eps_r(), s.medium.mu_r()];
    out.extend(s.e.exprs());
    out.extend(s.h.exprs());
    match &s.sources {
        Sources::Explicit { rho, j } => {
            out.push(rho);
            out.extend(j.iter());
        }
        Sources::Manufactured { rho, j } => {
            out.extend(rho.iter());
            out.extend(j.iter().flatten());
        }
    }
    out
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn convergence_study(s: &Scenario, steps: &[f64]) -> Result<ConvergenceReport, HarnessError> {
    if steps.len() < 3 {
        return Err(HarnessError::Config(
            "convergence study needs at least 3 step sizes".into(),
        ));
    }
    if let Some(h) = steps.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
        return Err(HarnessError::Config(format!("step sizes must be positive, got {h}")));
    }
    if steps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(HarnessError::Config("step sizes must be strictly decreasing".into()));
    }

    let points = sample_grid(&s.bx, s.samples)?;
    let exprs = expressions(s);
    let mut results = Vec::with_capacity(steps.len());
    for &h in steps {
        let mut worst = 0.0_f64;
        for p in &points {
            for e in &exprs {
                let jet = e.eval_jet(*p).map_err(|source| HarnessError::Field {
                    what: "expression",
                    point: *p,
                    source,
                })?;
                let fd = fd_jet(|q| e.eval(q).unwrap_or(f64::NAN), *p, h).map_err(|source| HarnessError::Field {
                    what: "expression",
                    point: *p,
                    source,
                })?;
                for k in 0..4 {
                    let err = (fd.d[k] - jet.d[k]).abs();
                    if err.is_nan() {
                        return Err(HarnessError::Config(format!(
                            "finite difference with h = {h} leaves the expression domain near {p}"
                        )));
                    }
                    worst = worst.max(err);
                }
            }
        }
        results.push(StepError { h, max_error: worst });
    }

    let exact = results.iter().all(|r| r.max_error <= ROUND_OFF_FLOOR);
    let fitted_order = if exact {
        None
    } else {
        let x: Vec<f64> = results.iter().map(|r| r.h.ln()).collect();
        let y: Vec<f64> = results
            .iter()
            .map(|r| r.max_error.max(f64::MIN_POSITIVE).ln())
            .collect();
        Some(fit_slope(&x, &y))
    };
    let pass = exact || fitted_order.is_some_and(|o| (ORDER_BAND[0]..=ORDER_BAND[1]).contains(&o));

    Ok(ConvergenceReport {
        version: VERSION.to_string(),
        scenario: s.name.clone(),
        points: points.len(),
        expressions: exprs.len(),
        steps: results,
        fitted_order,
        exact,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_power_law() {
        let h = [1e-1, 1e-2, 1e-3];
        let x: Vec<f64> = h.iter().map(|v: &f64| v.ln()).collect();
        let y: Vec<f64> = h.iter().map(|v: &f64| (3.0 * v * v).ln()).collect();
        assert!((fit_slope(&x, &y) - 2.0).abs() < 1e-12);
    }
}
