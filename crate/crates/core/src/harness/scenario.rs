//! Scenario files: JSON documents naming a medium, a field pair, sources,
//! a sampling box and evaluation settings.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::grid::Box4;
use super::HarnessError;
use crate::dsl::{self, Expr, FieldSpec};
use crate::jet::{fd_jet, Jet4, JetError, Point4, DEFAULT_FD_STEP};
use crate::medium::{MediumSpec, UnitMode, UnitSystem};

pub const MANUFACTURED: &str = "manufactured";

/// Tolerance on identities and decompositions when derivatives come from jets.
pub const DEFAULT_TOLERANCE: f64 = 1e-11;
/// Threshold under which a residual counts as vanishing with finite differences.
pub const DEFAULT_FD_SOLUTION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumFile {
    pub eps_r: String,
    pub mu_r: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorSource {
    Components([String; 3]),
    Keyword(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldsFile {
    #[serde(rename = "E")]
    pub e: [String; 3],
    #[serde(rename = "H")]
    pub h: [String; 3],
    /// An expression, or `"manufactured"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<String>,
    /// Three expressions, or `"manufactured"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<VectorSource>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SamplesFile {
    Uniform(usize),
    PerAxis { t: usize, x1: usize, x2: usize, x3: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivativeMode {
    Jet,
    Fd,
}

fn default_units() -> UnitMode {
    UnitMode::Natural
}

fn default_samples() -> SamplesFile {
    SamplesFile::Uniform(5)
}

fn default_mode() -> DerivativeMode {
    DerivativeMode::Jet
}

fn default_fd_step() -> f64 {
    DEFAULT_FD_STEP
}

/// On-disk scenario document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default = "default_units")]
    pub units: UnitMode,
    pub medium: MediumFile,
    pub fields: FieldsFile,
    #[serde(rename = "box", default)]
    pub bx: Box4,
    #[serde(default = "default_samples")]
    pub samples: SamplesFile,
    #[serde(default = "default_mode")]
    pub derivative_mode: DerivativeMode,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    #[serde(default)]
    pub seed: u64,
    /// Identity and decomposition tolerance; defaults to 1e-11.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Threshold for "this residual vanishes"; defaults to `tolerance` with
    /// jets and 1e-6 with finite differences.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution_tolerance: Option<f64>,
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("scenario: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        })?;
        ScenarioFile::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sources {
    /// Sources given by expressions (absent ones are zero).
    Explicit { rho: Expr, j: [Expr; 3] },
    /// `rho = div(eps E)` and/or `j = rot H - eps dE/dt`, computed pointwise.
    Manufactured { rho: Option<Expr>, j: Option<[Expr; 3]> },
}

impl Sources {
    pub fn is_manufactured(&self) -> bool {
        matches!(self, Sources::Manufactured { .. })
    }
}

/// How field derivatives are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Differentiation {
    Jet,
    Fd { h: f64 },
}

impl Differentiation {
    pub fn eval(&self, e: &Expr, p: Point4) -> Result<Jet4, JetError> {
        match *self {
            Differentiation::Jet => e.eval_jet(p),
            Differentiation::Fd { h } => {
                // Domain errors surface from the centre value; neighbours that
                // leave the domain show up as non-finite slots.
                e.eval(p)?;
                let j = fd_jet(|q| e.eval(q).unwrap_or(f64::NAN), p, h)?;
                if j.is_finite() {
                    Ok(j)
                } else {
                    Err(JetError::NonFinite("finite difference"))
                }
            }
        }
    }
}

/// A validated scenario with parsed expressions.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub medium: MediumSpec,
    pub e: FieldSpec,
    pub h: FieldSpec,
    pub sources: Sources,
    pub bx: Box4,
    pub samples: [usize; 4],
    pub differentiation: Differentiation,
    pub seed: u64,
    pub tolerance: f64,
    pub solution_tolerance: f64,
}

fn parse_expr(what: &str, src: &str) -> Result<Expr, HarnessError> {
    dsl::parse(src).map_err(|e| HarnessError::Config(format!("{what}: {e}")))
}

fn parse_triple(what: &str, srcs: &[String; 3]) -> Result<[Expr; 3], HarnessError> {
    Ok([
        parse_expr(&format!("{what}[1]"), &srcs[0])?,
        parse_expr(&format!("{what}[2]"), &srcs[1])?,
        parse_expr(&format!("{what}[3]"), &srcs[2])?,
    ])
}

impl Scenario {
    pub fn from_file(f: &ScenarioFile) -> Result<Self, HarnessError> {
        let units = UnitSystem::from_mode(f.units);
        let medium = MediumSpec::parse(&f.medium.eps_r, &f.medium.mu_r, units)
            .map_err(|e| HarnessError::Config(format!("medium: {e}")))?;
        let e = FieldSpec::from_exprs("E", parse_triple("E", &f.fields.e)?);
        let h = FieldSpec::from_exprs("H", parse_triple("H", &f.fields.h)?);

        let rho_manufactured = f.fields.rho.as_deref() == Some(MANUFACTURED);
        let rho = match &f.fields.rho {
            Some(s) if s == MANUFACTURED => None,
            Some(s) => Some(parse_expr("rho", s)?),
            None => Some(Expr::Const(0.0)),
        };
        let (j, j_manufactured) = match &f.fields.j {
            Some(VectorSource::Keyword(k)) if k == MANUFACTURED => (None, true),
            Some(VectorSource::Keyword(k)) => {
                return Err(HarnessError::Config(format!(
                    "j: expected three expressions or \"{MANUFACTURED}\", got {k:?}"
                )))
            }
            Some(VectorSource::Components(c)) => (Some(parse_triple("j", c)?), false),
            None => (Some([0.0; 3].map(Expr::Const)), false),
        };
        let sources = if rho_manufactured || j_manufactured {
            Sources::Manufactured { rho, j }
        } else {
            Sources::Explicit {
                rho: rho.expect("explicit rho"),
                j: j.expect("explicit j"),
            }
        };

        let samples = match f.samples {
            SamplesFile::Uniform(n) => {
                // A single sample count applies to every non-degenerate axis.
                f.bx.axes().map(|[a, b]| if a == b { 1 } else { n })
            }
            SamplesFile::PerAxis { t, x1, x2, x3 } => [t, x1, x2, x3],
        };

        let differentiation = match f.derivative_mode {
            DerivativeMode::Jet => Differentiation::Jet,
            DerivativeMode::Fd => {
                if !(f.fd_step > 0.0 && f.fd_step.is_finite()) {
                    return Err(HarnessError::Config(format!(
                        "fd_step must be positive, got {}",
                        f.fd_step
                    )));
                }
                Differentiation::Fd { h: f.fd_step }
            }
        };
        let tolerance = f.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        let solution_tolerance = f.solution_tolerance.unwrap_or(match differentiation {
            Differentiation::Jet => tolerance,
            Differentiation::Fd { .. } => DEFAULT_FD_SOLUTION_TOLERANCE,
        });
        for (what, v) in [("tolerance", tolerance), ("solution_tolerance", solution_tolerance)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(HarnessError::Config(format!("{what} must be positive, got {v}")));
            }
        }
        if f.name.is_empty() {
            return Err(HarnessError::Config("scenario name must not be empty".into()));
        }

        Ok(Scenario {
            name: f.name.clone(),
            medium,
            e,
            h,
            sources,
            bx: f.bx,
            samples,
            differentiation,
            seed: f.seed,
            tolerance,
            solution_tolerance,
        })
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        Scenario::from_file(&ScenarioFile::load(path)?)
    }

    pub fn derivative_mode(&self) -> DerivativeMode {
        match self.differentiation {
            Differentiation::Jet => DerivativeMode::Jet,
            Differentiation::Fd { .. } => DerivativeMode::Fd,
        }
    }
}
