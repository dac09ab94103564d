use std::fs;
use std::path::{Path, PathBuf};

use cfr_core::verify::Suite;
use cfr_core::{LambdaParam, QuadratureSpec, QuantumNumbers};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable overriding the default relative tolerance.
pub const TOL_ENV: &str = "CFR_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Gaussian,
    #[default]
    Hydrogenic,
    Sweep,
    Verify,
}

/// Evaluation path requested for a hydrogenic state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    #[default]
    Closed,
    Quadrature,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub n: u32,
    pub l: u32,
    pub m: i32,
}

/// Inclusive arithmetic progression `start, start + step, …, stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl LambdaRange {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        let ok = self.start.is_finite() && self.stop.is_finite() && self.step > 0.0 && self.step.is_finite();
        if !ok || self.stop < self.start {
            return Err(CliError::Usage(format!("invalid lambda range {self:?}")));
        }
        // tolerate rounding in (stop - start) / step
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        Ok((0..=count).map(|i| self.start + i as f64 * self.step).collect())
    }
}

/// A complete run description, as read from a JSON config file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    pub lambdas: Vec<f64>,
    pub lambda_range: Option<LambdaRange>,
    pub dim: Option<usize>,
    pub states: Vec<State>,
    #[serde(alias = "Z")]
    pub z: Option<f64>,
    pub method: MethodArg,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub suite: Option<String>,
}

/// A config after every precondition has been checked.
#[derive(Debug, Clone)]
pub enum Plan {
    Gaussian { lambdas: Vec<LambdaParam> },
    Hydrogenic {
        states: Vec<QuantumNumbers>,
        lambdas: Vec<LambdaParam>,
        method: MethodArg,
    },
    Verify { suites: Vec<Suite> },
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// Explicit λ values followed by the range, in order.
    pub fn lambda_values(&self) -> Result<Vec<f64>, CliError> {
        let mut out = self.lambdas.clone();
        if let Some(r) = &self.lambda_range {
            out.extend(r.values()?);
        }
        Ok(out)
    }

    /// Config tolerances, then `CFR_TOL`, then the library defaults.
    pub fn quadrature_spec(&self) -> Result<QuadratureSpec, CliError> {
        let mut spec = default_spec()?;
        if let Some(t) = self.rel_tol {
            spec.rel_tol = t;
        }
        if let Some(t) = self.abs_tol {
            spec.abs_tol = t;
        }
        if let Some(k) = self.max_subdivisions {
            spec.max_subdivisions = k;
        }
        check_spec(&spec)?;
        Ok(spec)
    }

    pub fn plan(&self) -> Result<Plan, CliError> {
        if self.command == CommandKind::Verify {
            let suites = parse_suites(self.suite.as_deref().unwrap_or("all"))?;
            return Ok(Plan::Verify { suites });
        }
        let values = self.lambda_values()?;
        if values.is_empty() {
            return Err(CliError::Usage("the lambda list is empty".into()));
        }
        match self.command {
            CommandKind::Gaussian => {
                let dim = self
                    .dim
                    .ok_or_else(|| CliError::Usage("gaussian runs need \"dim\"".into()))?;
                let lambdas = values
                    .iter()
                    .map(|&l| LambdaParam::new(l, dim))
                    .collect::<Result<_, _>>()?;
                Ok(Plan::Gaussian { lambdas })
            }
            _ => {
                if let Some(d) = self.dim.filter(|&d| d != 3) {
                    return Err(CliError::Usage(format!("hydrogenic runs are three-dimensional, got dim = {d}")));
                }
                if self.states.is_empty() {
                    return Err(CliError::Usage("the state list is empty".into()));
                }
                let z = self.z.unwrap_or(1.0);
                let states = self
                    .states
                    .iter()
                    .map(|s| QuantumNumbers::new(s.n, s.l, s.m, z))
                    .collect::<Result<_, _>>()?;
                let lambdas = values
                    .iter()
                    .map(|&l| LambdaParam::new(l, 3))
                    .collect::<Result<_, _>>()?;
                Ok(Plan::Hydrogenic {
                    states,
                    lambdas,
                    method: self.method,
                })
            }
        }
    }
}

/// Library defaults with `CFR_TOL` applied.
pub fn default_spec() -> Result<QuadratureSpec, CliError> {
    let mut spec = QuadratureSpec::default();
    if let Ok(raw) = std::env::var(TOL_ENV) {
        spec.rel_tol = raw
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{TOL_ENV} must be a number, got '{raw}'")))?;
    }
    check_spec(&spec)?;
    Ok(spec)
}

fn check_spec(spec: &QuadratureSpec) -> Result<(), CliError> {
    let ok = |t: f64| t > 0.0 && t < 1.0;
    if !ok(spec.rel_tol) {
        return Err(CliError::Usage(format!("rel_tol must lie in (0, 1), got {}", spec.rel_tol)));
    }
    if !(spec.abs_tol > 0.0 && spec.abs_tol.is_finite()) {
        return Err(CliError::Usage(format!("abs_tol must be positive, got {}", spec.abs_tol)));
    }
    if spec.max_subdivisions == 0 {
        return Err(CliError::Usage("max_subdivisions must be positive".into()));
    }
    Ok(())
}

/// `all` or a single suite name.
pub fn parse_suites(name: &str) -> Result<Vec<Suite>, CliError> {
    if name == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    name.parse::<Suite>().map(|s| vec![s]).map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        CliError::Usage(format!("unknown suite '{name}'; expected all or one of {}", names.join(", ")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_is_inclusive() {
        let r = LambdaRange { start: 1.1, stop: 3.0, step: 0.1 };
        let v = r.values().unwrap();
        assert_eq!(v.len(), 20);
        assert!((v[19] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn minimal_config_parses() {
        let c: RunConfig = serde_json::from_str(r#"{"states": [{"n": 1, "l": 0, "m": 0}], "lambdas": [2]}"#).unwrap();
        assert_eq!(c.command, CommandKind::Hydrogenic);
        assert!(matches!(c.plan().unwrap(), Plan::Hydrogenic { .. }));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"lambda": [2]}"#).is_err());
    }

    #[test]
    fn empty_lambda_list_is_a_usage_error() {
        let c: RunConfig = serde_json::from_str(r#"{"states": [{"n": 1, "l": 0, "m": 0}]}"#).unwrap();
        assert!(matches!(c.plan(), Err(CliError::Usage(_))));
    }

    #[test]
    fn every_lambda_is_validated_up_front() {
        let c: RunConfig =
            serde_json::from_str(r#"{"states": [{"n": 1, "l": 0, "m": 0}], "lambdas": [2, 0.5]}"#).unwrap();
        assert!(matches!(c.plan(), Err(CliError::Core(_))));
    }

    #[test]
    fn suite_names() {
        assert_eq!(parse_suites("all").unwrap().len(), 6);
        assert_eq!(parse_suites("near-continuity").unwrap(), vec![Suite::NearContinuity]);
        assert!(parse_suites("bogus").is_err());
    }
}
