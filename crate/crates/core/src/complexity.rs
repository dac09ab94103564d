//! `D_λ`, the Fisher–Rényi complexity and its companions.

use std::f64::consts::{E, PI};

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::densities::{AnalyticParts, Density};
use crate::error::{Error, Result};
use crate::functionals::{
    fisher_lambda, fisher_standard, renyi_power, shannon_entropy, variance, FunctionalValue,
    LambdaParam,
};
use crate::quadrature::QuadratureSpec;
use crate::specfun::log_gamma;

/// Relative analytic-vs-quadrature difference above which a report is flagged.
pub const SUSPECT_DISCREPANCY: f64 = 1e-6;

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Quadrature,
    /// Analytic value, cross-checked by quadrature.
    Both,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Quadrature => "quadrature",
            Method::Both => "both",
        }
    }
}

/// Which evaluation paths [`cfr_complexity`] should run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    #[default]
    AnalyticIfAvailable,
    Quadrature,
    Both,
}

/// Cramér–Rao and Fisher–Shannon complexities of the same density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Companions {
    pub cramer_rao: f64,
    pub fisher_shannon: f64,
}

/// Result of a complexity evaluation with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityReport {
    pub lambda: LambdaParam,
    pub fisher_lambda: FunctionalValue,
    pub renyi_power: FunctionalValue,
    pub d_norm: f64,
    pub cfr: f64,
    pub companions: Option<Companions>,
    pub method: Method,
    /// `|C_analytic − C_quadrature| / C_analytic` when both paths ran.
    pub discrepancy: Option<f64>,
}

impl ComplexityReport {
    /// Assemble `C_FR = D_λ⁻¹ F̃_λ N_λ` from its parts.
    pub fn from_parts(
        lambda: LambdaParam,
        fisher_lambda: FunctionalValue,
        renyi_power: FunctionalValue,
        method: Method,
    ) -> Self {
        let d_norm = normalization_d(&lambda);
        Self {
            lambda,
            fisher_lambda,
            renyi_power,
            d_norm,
            cfr: fisher_lambda.value * renyi_power.value / d_norm,
            companions: None,
            method,
            discrepancy: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.lambda.dim()
    }

    /// True when the two evaluation paths disagree by more than [`SUSPECT_DISCREPANCY`].
    pub fn is_suspect(&self) -> bool {
        self.discrepancy.is_some_and(|d| !(d <= SUSPECT_DISCREPANCY))
    }

    pub fn with_companions<D: Density + ?Sized>(mut self, rho: &D, spec: &QuadratureSpec) -> Result<Self> {
        self.companions = Some(Companions {
            cramer_rao: cramer_rao(rho, spec)?,
            fisher_shannon: fisher_shannon(rho, spec)?,
        });
        Ok(self)
    }
}

impl Serialize for ComplexityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ComplexityReport", 8)?;
        s.serialize_field("lambda", &self.lambda.value())?;
        s.serialize_field("dim", &self.dim())?;
        s.serialize_field("fisher_lambda", &self.fisher_lambda.value)?;
        s.serialize_field("renyi_power", &self.renyi_power.value)?;
        s.serialize_field("d_norm", &self.d_norm)?;
        s.serialize_field("cfr", &self.cfr)?;
        s.serialize_field("method", &self.method)?;
        s.serialize_field("discrepancy", &self.discrepancy)?;
        s.end()
    }
}

/// The constant `D_λ` that makes `C_FR[B_λ] = 1`; `D_1 = 2πde`.
pub fn normalization_d(lambda: &LambdaParam) -> f64 {
    let l = lambda.value();
    let d = lambda.dim() as f64;
    if lambda.is_shannon_limit() {
        return 2.0 * PI * d * E;
    }
    let gamma_ratio = if l > 1.0 {
        let e = l / (l - 1.0);
        log_gamma(e).and_then(|a| Ok(a - log_gamma(e + d / 2.0)?))
    } else {
        let e = 1.0 / (1.0 - l);
        log_gamma(e - d / 2.0).and_then(|a| Ok(a - log_gamma(e)?))
    }
    .expect("admissible lambda keeps Gamma arguments positive");
    let ln_d = (2.0 * PI * d / l / (l - 1.0).abs()).ln()
        + 2.0 / d * gamma_ratio
        + (2.0 + d * (l - 1.0)) / (d * (l - 1.0)) * (((d + 2.0) * l - d) / (2.0 * l)).ln();
    ln_d.exp()
}

fn parts_report(lambda: LambdaParam, parts: AnalyticParts) -> ComplexityReport {
    let fv = |value| FunctionalValue {
        value,
        err_estimate: 0.0,
        method: Method::Analytic,
    };
    ComplexityReport::from_parts(lambda, fv(parts.fisher_lambda), fv(parts.renyi_power), Method::Analytic)
}

fn quadrature_report<D: Density + ?Sized>(
    rho: &D,
    lambda: LambdaParam,
    spec: &QuadratureSpec,
) -> Result<ComplexityReport> {
    let f = fisher_lambda(rho, &lambda, spec)?;
    let n = renyi_power(rho, &lambda, spec)?;
    Ok(ComplexityReport::from_parts(lambda, f, n, Method::Quadrature))
}

/// Closed-form parts, with `Unsupported` treated as "no closed form".
fn analytic_parts<D: Density + ?Sized>(rho: &D, lambda: f64) -> Result<Option<AnalyticParts>> {
    match rho.analytic(lambda) {
        None | Some(Err(Error::Unsupported(_))) => Ok(None),
        Some(r) => r.map(Some),
    }
}

/// Fisher–Rényi complexity `C_FR^(λ)[ρ] = D_λ⁻¹ F̃_λ[ρ] N_λ[ρ]`.
pub fn cfr_complexity<D: Density + ?Sized>(
    rho: &D,
    lambda: &LambdaParam,
    choice: MethodChoice,
    spec: &QuadratureSpec,
) -> Result<ComplexityReport> {
    if rho.dim() != lambda.dim() {
        return Err(Error::domain(format!(
            "lambda was validated for dimension {} but the density has dimension {}",
            lambda.dim(),
            rho.dim()
        )));
    }
    rho.check_integrable(lambda.value())?;
    let lambda = *lambda;
    match choice {
        MethodChoice::Quadrature => quadrature_report(rho, lambda, spec),
        MethodChoice::AnalyticIfAvailable => match analytic_parts(rho, lambda.value())? {
            Some(p) => Ok(parts_report(lambda, p)),
            None => quadrature_report(rho, lambda, spec),
        },
        MethodChoice::Both => {
            let numeric = quadrature_report(rho, lambda, spec)?;
            match analytic_parts(rho, lambda.value())? {
                Some(p) => {
                    let mut report = parts_report(lambda, p);
                    report.method = Method::Both;
                    report.discrepancy = Some(((report.cfr - numeric.cfr) / report.cfr).abs());
                    Ok(report)
                }
                None => Ok(numeric),
            }
        }
    }
}

/// Cramér–Rao complexity `F[ρ]·V[ρ]`.
pub fn cramer_rao<D: Density + ?Sized>(rho: &D, spec: &QuadratureSpec) -> Result<f64> {
    Ok(fisher_standard(rho, spec)?.value * variance(rho, spec)?.value)
}

/// Fisher–Shannon complexity `F[ρ]·exp(2S[ρ]/d)`.
pub fn fisher_shannon<D: Density + ?Sized>(rho: &D, spec: &QuadratureSpec) -> Result<f64> {
    let f = fisher_standard(rho, spec)?.value;
    let s = shannon_entropy(rho, spec)?.value;
    Ok(f * (2.0 * s / rho.dim() as f64).exp())
}
