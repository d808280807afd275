//! Browser bindings. Every export takes and returns JSON text; failures come
//! back as `{"error": "..."}` so the page never has to catch exceptions.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use qmaxwell::harness::random::explicit_source_variant;
use qmaxwell::harness::report::to_json;
use qmaxwell::harness::{run_scenario, Scenario, ScenarioFile};
use qmaxwell::medium::{MediumSpec, UnitSystem};
use qmaxwell::Point4;

#[derive(Serialize)]
struct ErrorReply {
    error: String,
}

fn reply(r: Result<String, String>) -> String {
    r.unwrap_or_else(|error| to_json(&ErrorReply { error }))
}

/// Full residual report for a scenario document.
#[wasm_bindgen]
pub fn residual_report(scenario_json: &str) -> String {
    reply(residual_report_impl(scenario_json))
}

fn residual_report_impl(scenario_json: &str) -> Result<String, String> {
    let file = ScenarioFile::from_json(scenario_json).map_err(|e| e.to_string())?;
    let s = Scenario::from_file(&file).map_err(|e| e.to_string())?;
    Ok(run_scenario(&s).map_err(|e| e.to_string())?.to_json())
}

#[derive(Serialize)]
struct Profile {
    axis: String,
    x: Vec<f64>,
    eps_r: Vec<f64>,
    mu_r: Vec<f64>,
    /// Speed relative to vacuum.
    c_rel: Vec<f64>,
    /// Impedance relative to vacuum.
    w_rel: Vec<f64>,
    /// Component of `grad sqrt(eps)/sqrt(eps)` along the axis.
    eps_vec: Vec<f64>,
    mu_vec: Vec<f64>,
}

/// Medium quantities along `x_axis` in `[0, 1]`, other coordinates at 0.5.
#[wasm_bindgen]
pub fn medium_profile(eps_r: &str, mu_r: &str, axis: u32, samples: u32) -> String {
    reply(medium_profile_impl(eps_r, mu_r, axis as usize, samples as usize))
}

fn medium_profile_impl(eps_r: &str, mu_r: &str, axis: usize, samples: usize) -> Result<String, String> {
    if !(1..=3).contains(&axis) {
        return Err(format!("axis must be 1, 2 or 3, got {axis}"));
    }
    if !(2..=10_000).contains(&samples) {
        return Err(format!("samples must be between 2 and 10000, got {samples}"));
    }
    let spec = MediumSpec::parse(eps_r, mu_r, UnitSystem::NATURAL).map_err(|e| e.to_string())?;
    let mut p = Profile {
        axis: format!("x{axis}"),
        x: Vec::new(),
        eps_r: Vec::new(),
        mu_r: Vec::new(),
        c_rel: Vec::new(),
        w_rel: Vec::new(),
        eps_vec: Vec::new(),
        mu_vec: Vec::new(),
    };
    for k in 0..samples {
        let x = k as f64 / (samples - 1) as f64;
        let mut c = [0.0, 0.5, 0.5, 0.5];
        c[axis] = x;
        let m = spec.sample(Point4::from_coords(c)).map_err(|e| e.to_string())?;
        p.x.push(x);
        p.eps_r.push(m.eps);
        p.mu_r.push(m.mu);
        p.c_rel.push(m.c);
        p.w_rel.push(m.w);
        p.eps_vec.push(m.eps_vec[axis - 1]);
        p.mu_vec.push(m.mu_vec[axis - 1]);
    }
    Ok(to_json(&p))
}

#[derive(Serialize)]
struct SweepPoint {
    h_factor: f64,
    maxmain_max: f64,
    classical_max: f64,
    decomposition_max_deviation: f64,
}

/// Scales `H` by each factor in `[from, to]` while keeping the sources of
/// the unscaled pair, and reports how far the quaternionic residual and its
/// decomposition move.
#[wasm_bindgen]
pub fn h_scaling_sweep(scenario_json: &str, from: f64, to: f64, steps: u32) -> String {
    reply(h_scaling_sweep_impl(scenario_json, from, to, steps as usize))
}

fn h_scaling_sweep_impl(scenario_json: &str, from: f64, to: f64, steps: usize) -> Result<String, String> {
    if !(from.is_finite() && to.is_finite()) || !(2..=200).contains(&steps) {
        return Err("sweep needs finite bounds and 2 to 200 steps".into());
    }
    let mut base = ScenarioFile::from_json(scenario_json).map_err(|e| e.to_string())?;
    // coarse grid keeps the sweep interactive
    base.samples = qmaxwell::harness::scenario::SamplesFile::Uniform(3);
    let manufactured = Scenario::from_file(&base)
        .map_err(|e| e.to_string())?
        .sources
        .is_manufactured();
    let mut out = Vec::with_capacity(steps);
    for k in 0..steps {
        let factor = from + (to - from) * k as f64 / (steps - 1) as f64;
        let file = if manufactured {
            explicit_source_variant(&base, factor)
        } else {
            let mut f = base.clone();
            f.fields.h = f.fields.h.map(|c| format!("({factor:?}) * ({c})"));
            f
        };
        let s = Scenario::from_file(&file).map_err(|e| e.to_string())?;
        let r = run_scenario(&s).map_err(|e| e.to_string())?;
        let c = &r.classical;
        out.push(SweepPoint {
            h_factor: factor,
            maxmain_max: r.formulations.maxmain.max,
            classical_max: c.r1.max.max(c.r2.max).max(c.r3.max).max(c.r4.max),
            decomposition_max_deviation: r.decomposition.max_deviation,
        });
    }
    Ok(to_json(&out))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PLANEWAVE: &str = include_str!("../../../scenarios/planewave.json");
    const EXPONENTIAL: &str = include_str!("../../../scenarios/exponential_medium.json");

    fn json(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn report_round_trips_through_json() {
        let v = json(&residual_report(PLANEWAVE));
        assert_eq!(v["pass"], true);
        assert_eq!(v["points"], 625);
        assert!(json(&residual_report("{")).get("error").is_some());
    }

    #[test]
    fn profile_of_an_exponential_medium() {
        let v = json(&medium_profile("exp(2*x3)", "1", 3, 11));
        let eps = v["eps_r"].as_array().unwrap();
        assert_eq!(eps.len(), 11);
        assert!((eps[10].as_f64().unwrap() - 2f64.exp()).abs() < 1e-12);
        // grad sqrt(eps) / sqrt(eps) = 1 along x3
        assert!(v["eps_vec"]
            .as_array()
            .unwrap()
            .iter()
            .all(|e| (e.as_f64().unwrap() - 1.0).abs() < 1e-12));
        assert!(json(&medium_profile("1", "1", 4, 10)).get("error").is_some());
        assert!(json(&medium_profile("x1 - 2", "1", 1, 10)).get("error").is_some());
    }

    #[test]
    fn sweep_vanishes_only_at_unit_factor() {
        for src in [PLANEWAVE, EXPONENTIAL] {
            let v = json(&h_scaling_sweep(src, 0.0, 2.0, 5));
            let pts = v.as_array().unwrap();
            assert_eq!(pts.len(), 5);
            for p in pts {
                let f = p["h_factor"].as_f64().unwrap();
                let m = p["maxmain_max"].as_f64().unwrap();
                assert_eq!(m <= 1e-11, f == 1.0, "factor {f}: {m}");
                assert!(p["decomposition_max_deviation"].as_f64().unwrap() <= 1e-11);
            }
        }
    }
}
