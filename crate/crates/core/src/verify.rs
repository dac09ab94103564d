//! Machine checks of the analytic properties of `C_FR`.
//!
//! Each [`Suite`] evaluates a group of numbered criteria and returns one
//! [`Check`] per measured quantity. [`summarize`] folds the checks into one
//! outcome per criterion.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::complexity::{cfr_complexity, normalization_d, ComplexityReport, MethodChoice};
use crate::densities::{
    near_continuity_pair, rearrange_decreasing_1d, replicate_1d, scale_translate, BetaDensity, Bump,
    Density, Gaussian, GeneralizedGaussian, SineBumps,
};
use crate::error::{Error, Result};
use crate::functionals::{biparametric_fisher, renyi_entropy, LambdaParam};
use crate::hydrogenic::{
    cfr_circular_closed, cfr_ground_closed, cfr_ns_closed, cfr_numeric, phi0, radial_g, HydrogenicDensity,
    Phi0Request, QuantumNumbers,
};
use crate::quadrature::QuadratureSpec;

/// A group of related criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Bounds,
    Scaling,
    Replication,
    Rearrangement,
    NearContinuity,
    Hydrogenic,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Bounds,
        Suite::Scaling,
        Suite::Replication,
        Suite::Rearrangement,
        Suite::NearContinuity,
        Suite::Hydrogenic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Bounds => "bounds",
            Suite::Scaling => "scaling",
            Suite::Replication => "replication",
            Suite::Rearrangement => "rearrangement",
            Suite::NearContinuity => "near-continuity",
            Suite::Hydrogenic => "hydrogenic",
        }
    }

    /// Criterion numbers covered by the suite.
    pub fn criteria(&self) -> &'static [u32] {
        match self {
            Suite::Bounds => &[1, 2, 10],
            Suite::Scaling => &[5],
            Suite::Replication => &[6],
            Suite::Rearrangement => &[7],
            Suite::NearContinuity => &[8],
            Suite::Hydrogenic => &[3, 4, 9],
        }
    }

    pub fn run(&self, spec: &QuadratureSpec) -> Vec<Check> {
        match self {
            Suite::Bounds => bounds(spec),
            Suite::Scaling => scaling(spec),
            Suite::Replication => replication(spec),
            Suite::Rearrangement => rearrangement(spec),
            Suite::NearContinuity => near_continuity(spec),
            Suite::Hydrogenic => hydrogenic(spec),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown verification suite '{s}'")))
    }
}

/// Short description of a numbered criterion.
pub fn criterion_title(criterion: u32) -> &'static str {
    match criterion {
        1 => "generalized Gaussians attain C_FR = 1",
        2 => "C_FR >= 1 over the density battery",
        3 => "hydrogenic closed forms agree with quadrature",
        4 => "exact identities of the closed forms",
        5 => "scale and translation invariance",
        6 => "replication law C_FR ratio = n^2",
        7 => "rearrangement lowers Fisher information and C_FR",
        8 => "near-continuity counterexample",
        9 => "independence of the nuclear charge",
        10 => "Shannon limit at lambda = 1",
        _ => "unknown criterion",
    }
}

/// One measured quantity and its verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u32,
    pub label: String,
    /// the measured quantity itself
    pub value: f64,
    /// distance from the requirement; 0 when an inequality holds
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// error text when the quantity could not be computed
    pub error: Option<String>,
}

impl Check {
    fn failed(criterion: u32, label: String, tolerance: f64, err: Error) -> Self {
        Self {
            criterion,
            label,
            value: f64::NAN,
            deviation: f64::NAN,
            tolerance,
            passed: false,
            error: Some(err.to_string()),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} [{:>2}] {}: ", self.criterion, self.label)?;
        match &self.error {
            Some(e) => write!(f, "error: {e}"),
            None => write!(
                f,
                "value {:.12e}, deviation {:.3e} (tol {:.1e})",
                self.value, self.deviation, self.tolerance
            ),
        }
    }
}

/// Folded outcome of one criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub criterion: u32,
    pub title: &'static str,
    pub checks: usize,
    pub failed: usize,
    /// largest deviation relative to its tolerance
    pub worst_ratio: f64,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.checks > 0 && self.failed == 0
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} criterion {:>2} ({}): {}/{} checks passed, worst deviation/tolerance {:.3e}",
            self.criterion,
            self.title,
            self.checks - self.failed,
            self.checks,
            self.worst_ratio
        )
    }
}

/// Run the given suites in order.
pub fn run(suites: &[Suite], spec: &QuadratureSpec) -> Vec<Check> {
    suites.iter().flat_map(|s| s.run(spec)).collect()
}

/// One outcome per criterion, ordered by criterion number.
pub fn summarize(checks: &[Check]) -> Vec<CriterionOutcome> {
    let mut numbers: Vec<u32> = checks.iter().map(|c| c.criterion).collect();
    numbers.sort_unstable();
    numbers.dedup();
    numbers
        .into_iter()
        .map(|n| {
            let group: Vec<&Check> = checks.iter().filter(|c| c.criterion == n).collect();
            let worst_ratio = group
                .iter()
                .map(|c| {
                    if c.error.is_some() {
                        f64::INFINITY
                    } else if c.tolerance > 0.0 {
                        c.deviation / c.tolerance
                    } else if c.passed {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                })
                .fold(0.0, f64::max);
            CriterionOutcome {
                criterion: n,
                title: criterion_title(n),
                checks: group.len(),
                failed: group.iter().filter(|c| !c.passed).count(),
                worst_ratio,
            }
        })
        .collect()
}

/// `|value − target| ≤ tol`.
fn within(criterion: u32, label: String, tol: f64, f: impl FnOnce() -> Result<(f64, f64)>) -> Check {
    match f() {
        Ok((value, target)) => {
            let deviation = (value - target).abs();
            Check {
                criterion,
                label,
                value,
                deviation,
                tolerance: tol,
                passed: deviation <= tol,
                error: None,
            }
        }
        Err(e) => Check::failed(criterion, label, tol, e),
    }
}

/// `|value/target − 1| ≤ tol`.
fn relative(criterion: u32, label: String, tol: f64, f: impl FnOnce() -> Result<(f64, f64)>) -> Check {
    match f() {
        Ok((value, target)) => {
            let deviation = (value / target - 1.0).abs();
            Check {
                criterion,
                label,
                value,
                deviation,
                tolerance: tol,
                passed: deviation <= tol,
                error: None,
            }
        }
        Err(e) => Check::failed(criterion, label, tol, e),
    }
}

/// `value ≥ bound − tol`.
fn at_least(criterion: u32, label: String, tol: f64, f: impl FnOnce() -> Result<(f64, f64)>) -> Check {
    match f() {
        Ok((value, bound)) => {
            let deviation = (bound - value).max(0.0);
            Check {
                criterion,
                label,
                value,
                deviation,
                tolerance: tol,
                passed: value >= bound - tol,
                error: None,
            }
        }
        Err(e) => Check::failed(criterion, label, tol, e),
    }
}

fn lam(value: f64, dim: usize) -> Result<LambdaParam> {
    LambdaParam::new(value, dim)
}

fn quad_report<D: Density + ?Sized>(rho: &D, lambda: f64, spec: &QuadratureSpec) -> Result<ComplexityReport> {
    cfr_complexity(rho, &lam(lambda, rho.dim())?, MethodChoice::Quadrature, spec)
}

fn quad_cfr<D: Density + ?Sized>(rho: &D, lambda: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(quad_report(rho, lambda, spec)?.cfr)
}

fn bumps(list: &[(f64, f64, f64)]) -> Result<SineBumps> {
    SineBumps::new(
        list.iter()
            .map(|&(lo, width, height)| Bump { lo, width, height })
            .collect(),
    )
}

fn hydrogen(n: u32, l: u32, m: i32, z: f64) -> Result<HydrogenicDensity> {
    Ok(HydrogenicDensity::new(QuantumNumbers::new(n, l, m, z)?))
}

fn battery() -> Result<Vec<(String, Box<dyn Density>)>> {
    Ok(vec![
        ("Gaussian d=1".into(), Box::new(Gaussian::new(1, 1.0)?) as Box<dyn Density>),
        ("Gaussian d=3".into(), Box::new(Gaussian::new(3, 0.7)?)),
        ("B_1.5 d=1".into(), Box::new(GeneralizedGaussian::new(lam(1.5, 1)?)?)),
        ("B_1.25 d=3".into(), Box::new(GeneralizedGaussian::new(lam(1.25, 3)?)?)),
        ("B_0.8 d=1".into(), Box::new(GeneralizedGaussian::new(lam(0.8, 1)?)?)),
        ("truncated cosine".into(), Box::new(SineBumps::truncated_cosine(0.0, 2.0)?)),
        (
            "two trig bumps".into(),
            Box::new(bumps(&[(-2.0, 1.0, 1.0), (0.5, 2.0, 2.5)])?),
        ),
        ("Beta(2,3)".into(), Box::new(BetaDensity::new(2.0, 3.0)?)),
        ("hydrogen 1s".into(), Box::new(hydrogen(1, 0, 0, 1.0)?)),
        ("hydrogen 2p m=1".into(), Box::new(hydrogen(2, 1, 1, 1.0)?)),
    ])
}

const BATTERY_LAMBDAS: [f64; 5] = [0.8, 1.25, 1.5, 2.0, 3.0];

fn bounds(spec: &QuadratureSpec) -> Vec<Check> {
    let mut out = Vec::new();
    for (l, d) in [(1.5, 1), (2.0, 1), (0.8, 1), (2.0, 3), (1.25, 3)] {
        out.push(within(1, format!("C_FR[B_{l}] in d={d}"), 1e-6, || {
            let b = GeneralizedGaussian::new(lam(l, d)?)?;
            Ok((quad_cfr(&b, l, spec)?, 1.0))
        }));
    }
    match battery() {
        Ok(list) => {
            for (name, rho) in &list {
                for l in BATTERY_LAMBDAS {
                    out.push(at_least(2, format!("C_FR[{name}] at lambda={l}"), 1e-6, || {
                        Ok((quad_cfr(rho.as_ref(), l, spec)?, 1.0))
                    }));
                }
            }
        }
        Err(e) => out.push(Check::failed(2, "density battery".into(), 1e-6, e)),
    }
    for d in 1..=3 {
        out.push(relative(10, format!("D_1.001 vs 2 pi d e, d={d}"), 1e-2, || {
            Ok((normalization_d(&lam(1.001, d)?), 2.0 * PI * d as f64 * E))
        }));
    }
    for d in [1, 3] {
        out.push(within(10, format!("C_FR[Gaussian] at lambda=1, d={d}"), 1e-8, || {
            Ok((quad_cfr(&Gaussian::new(d, 1.3)?, 1.0, spec)?, 1.0))
        }));
    }
    out
}

const SCALES: [f64; 3] = [0.5, 2.0, 3.0];

fn scaling_for<D: Density + Clone>(name: &str, rho: &D, lambdas: &[f64], spec: &QuadratureSpec) -> Vec<Check> {
    let mut out = Vec::new();
    let d = rho.dim();
    for &l in lambdas {
        let base = quad_report(rho, l, spec);
        for a in SCALES {
            let shift = vec![0.7; d];
            let label = |what: &str| format!("{what} for {name}, lambda={l}, a={a}, b=0.7");
            let scaled = scale_translate(rho.clone(), a, shift).and_then(|s| quad_report(&s, l, spec));
            let pair = || -> Result<(ComplexityReport, ComplexityReport)> {
                match (&base, &scaled) {
                    (Ok(b), Ok(s)) => Ok((b.clone(), s.clone())),
                    (Err(e), _) | (_, Err(e)) => Err(Error::domain(e.to_string())),
                }
            };
            let power = d as f64 * (l - 1.0) + 2.0;
            out.push(relative(5, label("C_FR ratio"), 1e-7, || {
                let (b, s) = pair()?;
                Ok((s.cfr / b.cfr, 1.0))
            }));
            out.push(relative(5, label("F ratio / a^(d(lambda-1)+2)"), 1e-7, || {
                let (b, s) = pair()?;
                Ok((s.fisher_lambda.value / b.fisher_lambda.value / a.powf(power), 1.0))
            }));
            out.push(relative(5, label("N ratio * a^(d(lambda-1)+2)"), 1e-7, || {
                let (b, s) = pair()?;
                Ok((s.renyi_power.value / b.renyi_power.value * a.powf(power), 1.0))
            }));
        }
    }
    out
}

fn scaling(spec: &QuadratureSpec) -> Vec<Check> {
    let lambdas = [1.5, 2.0];
    let mut out = Vec::new();
    match bumps(&[(-2.0, 1.0, 1.0), (0.5, 2.0, 2.5)]) {
        Ok(rho) => out.extend(scaling_for("two trig bumps", &rho, &lambdas, spec)),
        Err(e) => out.push(Check::failed(5, "two trig bumps".into(), 1e-7, e)),
    }
    match hydrogen(2, 1, 0, 1.0) {
        Ok(rho) => out.extend(scaling_for("hydrogen 2p m=0", &rho, &lambdas, spec)),
        Err(e) => out.push(Check::failed(5, "hydrogen 2p m=0".into(), 1e-7, e)),
    }
    out
}

fn replication_for<D: Density + Clone>(name: &str, rho: &D, spec: &QuadratureSpec) -> Vec<Check> {
    let mut out = Vec::new();
    for l in [1.5, 2.0] {
        let base = quad_report(rho, l, spec);
        for n in [2usize, 3] {
            let nf = n as f64;
            let rep = replicate_1d(rho.clone(), n).and_then(|r| quad_report(&r, l, spec));
            let pair = || -> Result<(ComplexityReport, ComplexityReport)> {
                match (&base, &rep) {
                    (Ok(b), Ok(r)) => Ok((b.clone(), r.clone())),
                    (Err(e), _) | (_, Err(e)) => Err(Error::domain(e.to_string())),
                }
            };
            let label = |what: &str| format!("{what} for {name}, lambda={l}, n={n}");
            out.push(relative(6, label("C_FR ratio vs n^2"), 1e-4, || {
                let (b, r) = pair()?;
                Ok((r.cfr / b.cfr, nf * nf))
            }));
            out.push(relative(6, label("F ratio vs n^((3-lambda)/2)"), 1e-5, || {
                let (b, r) = pair()?;
                Ok((r.fisher_lambda.value / b.fisher_lambda.value, nf.powf((3.0 - l) / 2.0)))
            }));
            out.push(relative(6, label("N ratio vs n^((lambda+1)/2)"), 1e-5, || {
                let (b, r) = pair()?;
                Ok((r.renyi_power.value / b.renyi_power.value, nf.powf((l + 1.0) / 2.0)))
            }));
        }
    }
    out
}

fn replication(spec: &QuadratureSpec) -> Vec<Check> {
    let mut out = Vec::new();
    match SineBumps::truncated_cosine(0.0, 2.0) {
        Ok(rho) => out.extend(replication_for("truncated cosine", &rho, spec)),
        Err(e) => out.push(Check::failed(6, "truncated cosine".into(), 1e-4, e)),
    }
    match BetaDensity::new(2.0, 3.0) {
        Ok(rho) => out.extend(replication_for("Beta(2,3)", &rho, spec)),
        Err(e) => out.push(Check::failed(6, "Beta(2,3)".into(), 1e-4, e)),
    }
    out
}

/// Grid sizes of the coarse and fine rearrangements.
const REARRANGE_GRIDS: [usize; 2] = [512, 2048];
/// Agreement required between `R_λ[ρ]` and `R_λ[ρ*]` on the fine grid.
const RENYI_GRID_TOL: f64 = 1e-8;

fn rearrangement_for<D: Density>(name: &str, rho: &D, spec: &QuadratureSpec) -> Vec<Check> {
    let mut out = Vec::new();
    let stars: Vec<_> = REARRANGE_GRIDS
        .iter()
        .map(|&g| rearrange_decreasing_1d(rho, g))
        .collect();
    for l in [1.5, 2.0] {
        let label = |what: &str| format!("{what} for {name}, lambda={l}");
        let fine = || -> Result<&crate::densities::RearrangedDensity> {
            stars[1].as_ref().map_err(|e| Error::domain(e.to_string()))
        };
        out.push(at_least(7, label("C_FR[rho] - C_FR[rho*]"), 0.0, || {
            Ok((quad_cfr(rho, l, spec)? - quad_cfr(fine()?, l, spec)?, 0.0))
        }));
        out.push(at_least(7, label("I_(2,lambda)[rho] - I_(2,lambda)[rho*]"), 0.0, || {
            let a = biparametric_fisher(rho, 2.0, l, spec)?.value;
            let b = biparametric_fisher(fine()?, 2.0, l, spec)?.value;
            Ok((a - b, 0.0))
        }));
        let renyi_gaps = || -> Result<[f64; 2]> {
            let r = renyi_entropy(rho, l, spec)?.value;
            let mut gaps = [0.0; 2];
            for (gap, star) in gaps.iter_mut().zip(&stars) {
                let star = star.as_ref().map_err(|e| Error::domain(e.to_string()))?;
                *gap = (renyi_entropy(star, l, spec)?.value - r).abs();
            }
            Ok(gaps)
        };
        let gaps = renyi_gaps();
        out.push(within(
            7,
            label(&format!("|R[rho*] - R[rho]| on {} cells", REARRANGE_GRIDS[1])),
            RENYI_GRID_TOL,
            || {
                let g = gaps.as_ref().map_err(|e| Error::domain(e.to_string()))?;
                Ok((g[1], 0.0))
            },
        ));
        out.push(at_least(
            7,
            label(&format!(
                "R gap shrinks from {} to {} cells (coarse - fine)",
                REARRANGE_GRIDS[0], REARRANGE_GRIDS[1]
            )),
            0.0,
            || {
                let g = gaps.as_ref().map_err(|e| Error::domain(e.to_string()))?;
                Ok((g[0] - g[1], 0.0))
            },
        ));
    }
    out
}

fn rearrangement(spec: &QuadratureSpec) -> Vec<Check> {
    let mut out = Vec::new();
    match BetaDensity::new(2.0, 5.0) {
        Ok(rho) => out.extend(rearrangement_for("Beta(2,5)", &rho, spec)),
        Err(e) => out.push(Check::failed(7, "Beta(2,5)".into(), 0.0, e)),
    }
    match bumps(&[(-2.0, 1.0, 1.0), (0.5, 2.0, 2.5)]) {
        Ok(rho) => out.extend(rearrangement_for("two trig bumps", &rho, spec)),
        Err(e) => out.push(Check::failed(7, "two trig bumps".into(), 0.0, e)),
    }
    match bumps(&[(-3.0, 0.8, 1.0), (-1.0, 1.5, 3.0), (1.5, 0.5, 0.7)]) {
        Ok(rho) => out.extend(rearrangement_for("three trig bumps", &rho, spec)),
        Err(e) => out.push(Check::failed(7, "three trig bumps".into(), 0.0, e)),
    }
    out
}

/// `sup |ρ − ρ̃|` sampled densely over the base bump and the spike.
fn sup_distance(rho: &SineBumps, tilde: &SineBumps) -> f64 {
    let mut points: Vec<f64> = Vec::new();
    for b in tilde.bumps() {
        let count = 20_000;
        points.extend((0..=count).map(|i| b.lo + b.width * i as f64 / count as f64));
    }
    points
        .into_iter()
        .map(|x| (rho.value(&[x]) - tilde.value(&[x])).abs())
        .fold(0.0, f64::max)
}

fn near_continuity(spec: &QuadratureSpec) -> Vec<Check> {
    let l = 1.5;
    let deltas = [0.2, 0.1, 0.05];
    let mut out = Vec::new();
    let mut values = Vec::new();
    for delta in deltas {
        let pair = near_continuity_pair(delta);
        out.push(at_least(8, format!("delta - sup|rho - rho~| at delta={delta}"), 0.0, || {
            let (rho, tilde) = pair.as_ref().map_err(|e| Error::domain(e.to_string()))?;
            Ok((delta - sup_distance(rho, tilde), 0.0))
        }));
        values.push(
            pair.as_ref()
                .map_err(|e| Error::domain(e.to_string()))
                .and_then(|(_, tilde)| quad_cfr(tilde, l, spec)),
        );
    }
    for i in 1..deltas.len() {
        let label = format!(
            "C_FR[rho~] rises from delta={} to delta={} at lambda={l}",
            deltas[i - 1],
            deltas[i]
        );
        let check = match (&values[i - 1], &values[i]) {
            (Ok(prev), Ok(next)) => Check {
                criterion: 8,
                label,
                value: *next,
                deviation: (prev - next).max(0.0),
                tolerance: 0.0,
                passed: next > prev,
                error: None,
            },
            (Err(e), _) | (_, Err(e)) => Check::failed(8, label, 0.0, Error::domain(e.to_string())),
        };
        out.push(check);
    }
    out
}

fn numeric_cfr(n: u32, l: u32, m: i32, z: f64, lambda: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(cfr_numeric(&QuantumNumbers::new(n, l, m, z)?, &lam(lambda, 3)?, spec)?.cfr)
}

/// Tolerance for identities that hold to rounding.
const MACHINE_TOL: f64 = 64.0 * f64::EPSILON;

fn hydrogenic(spec: &QuadratureSpec) -> Vec<Check> {
    let mut out = Vec::new();
    for l in [1.2, 1.5, 2.0, 3.0] {
        out.push(relative(3, format!("ground state closed vs quadrature at lambda={l}"), 1e-6, || {
            Ok((numeric_cfr(1, 0, 0, 1.0, l, spec)?, cfr_ground_closed(&lam(l, 3)?)?))
        }));
    }
    for l in [1.25, 2.0] {
        for n in 1..=3u32 {
            out.push(relative(3, format!("circular n={n} closed vs quadrature at lambda={l}"), 1e-6, || {
                Ok((
                    numeric_cfr(n, n - 1, n as i32 - 1, 1.0, l, spec)?,
                    cfr_circular_closed(n, &lam(l, 3)?)?,
                ))
            }));
        }
    }
    for n in 1..=3u32 {
        out.push(relative(3, format!("ns state n={n} closed vs quadrature at lambda=2"), 1e-6, || {
            Ok((numeric_cfr(n, 0, 0, 1.0, 2.0, spec)?, cfr_ns_closed(n, &lam(2.0, 3)?)?))
        }));
    }

    for two_lambda in 2..=6u32 {
        out.push(within(4, format!("Phi0(2, 0, {two_lambda}, {{0}}, {{1}}) = 2"), 0.0, || {
            let l = two_lambda as f64 / 2.0;
            let r = two_lambda as usize;
            let req = Phi0Request::uniform(2, 0, r, 0, 1.0, 1.0 / l)?;
            Ok((phi0(&req), 2.0))
        }));
    }
    out.push(within(4, "G(1, 0, 2) = 2/9".into(), 0.0, || Ok((radial_g(1, 0, 2.0)?, 2.0 / 9.0))));
    for l in [1.5, 2.0, 2.5] {
        out.push(relative(4, format!("ns closed form at n=1 equals ground state, lambda={l}"), MACHINE_TOL, || {
            Ok((cfr_ns_closed(1, &lam(l, 3)?)?, cfr_ground_closed(&lam(l, 3)?)?))
        }));
    }

    for (n, l, m) in [(1, 0, 0), (2, 1, 1), (3, 1, 0)] {
        let base = numeric_cfr(n, l, m, 1.0, 1.5, spec);
        for z in [2.0, 5.0] {
            out.push(relative(9, format!("C_FR({n},{l},{m}) at Z={z} over Z=1, lambda=1.5"), 1e-7, || {
                let b = base.as_ref().map_err(|e| Error::domain(e.to_string()))?;
                Ok((numeric_cfr(n, l, m, z, 1.5, spec)? / b, 1.0))
            }));
        }
    }
    out
}
