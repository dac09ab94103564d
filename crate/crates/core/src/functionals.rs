//! Information-theoretic functionals of a [`Density`].
//!
//! Every functional reduces to one-dimensional quadratures through the
//! density's [`Layout`]. Separable 3D densities `R(r)Θ(θ)` use
//! `|∇ρ|² = R'²Θ² + R²Θ'²/r²`, which splits the gradient integrals into
//! products of radial and polar pieces.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::complexity::Method;
use crate::densities::{weighted_gradient, Density, Layout, Profile};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_domain, Abscissa, Domain, Estimate, QuadratureSpec};
use crate::specfun::{gamma, ANCHOR_TOL};

/// Validated order λ of the complexity in dimension `d`.
///
/// Requires `λ > max{(d−1)/d, d/(d+2)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaParam {
    value: f64,
    dim: usize,
}

fn fraction(num: usize, den: usize) -> String {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    if num == 0 {
        return "0".into();
    }
    let g = gcd(num, den);
    if den / g == 1 {
        format!("{}", num / g)
    } else {
        format!("{}/{}", num / g, den / g)
    }
}

impl LambdaParam {
    pub fn new(value: f64, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        if !(value > Self::lower_bound(dim)) || !value.is_finite() {
            return Err(Error::domain(format!(
                "lambda must exceed max{{{}, {}}} in dimension {dim}, got {value}",
                fraction(dim - 1, dim),
                fraction(dim, dim + 2)
            )));
        }
        Ok(Self { value, dim })
    }

    /// `max{(d−1)/d, d/(d+2)}`.
    pub fn lower_bound(dim: usize) -> f64 {
        let d = dim as f64;
        ((d - 1.0) / d).max(d / (d + 2.0))
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `μ = 2 + d(λ − 1)`.
    pub fn mu(&self) -> f64 {
        2.0 + self.dim as f64 * (self.value - 1.0)
    }

    /// λ = 1, where the Rényi quantities reduce to Shannon ones.
    pub fn is_shannon_limit(&self) -> bool {
        self.value == 1.0
    }
}

/// A computed functional with its provenance and error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalValue {
    pub value: f64,
    pub err_estimate: f64,
    pub method: Method,
}

impl FunctionalValue {
    pub(crate) fn quadrature(value: f64, err_estimate: f64) -> Self {
        Self {
            value,
            err_estimate,
            method: Method::Quadrature,
        }
    }
}

/// Relative error estimate above which a non-converged integral is reported as divergent.
const DIVERGENCE_RATIO: f64 = 1e-3;

pub(crate) fn classify(err: Error, quantity: &str) -> Error {
    match err {
        Error::NotConverged {
            estimate,
            err_estimate,
            worst_lo,
            worst_hi,
            ..
        } if !(err_estimate <= DIVERGENCE_RATIO * estimate.abs()) => Error::Divergent {
            quantity: quantity.into(),
            lo: worst_lo,
            hi: worst_hi,
            reason: format!(
                "error estimate {err_estimate:e} does not shrink under refinement (estimate {estimate:e})"
            ),
        },
        Error::NonFinite { x } => Error::Divergent {
            quantity: quantity.into(),
            lo: x,
            hi: x,
            reason: "integrand is not finite".into(),
        },
        other => other,
    }
}

fn quad<F>(f: &F, domain: &Domain, spec: &QuadratureSpec, quantity: &str) -> Result<Estimate>
where
    F: Fn(Abscissa) -> f64,
{
    let first = integrate_domain(f, domain, spec).map_err(|e| classify(e, quantity))?;
    // powered profiles can be far below abs_tol; refine those to rel_tol
    let target = spec.rel_tol * first.value.abs();
    if first.err_estimate <= target || !(target > f64::MIN_POSITIVE) {
        return Ok(first);
    }
    let fine = spec.clone().with_abs_tol(target);
    Ok(integrate_domain(f, domain, &fine).unwrap_or(first))
}

/// `sin θ` at a polar sample, exact near the poles.
#[inline]
pub(crate) fn polar_sin(p: Abscissa) -> f64 {
    if p.offset != 0.0 && (p.anchor - PI).abs() <= ANCHOR_TOL {
        (-p.offset).sin()
    } else {
        p.x.sin()
    }
}

/// Surface area of the unit sphere in `ℝ^d`.
pub(crate) fn sphere_area(dim: usize) -> f64 {
    let h = dim as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h).expect("positive argument")
}

/// `∫ g(v, v') w(x) dx` over one profile.
pub(crate) fn profile_integral(
    profile: &Profile<'_>,
    g: impl Fn(f64, f64) -> f64,
    weight: impl Fn(Abscissa) -> f64,
    spec: &QuadratureSpec,
    quantity: &str,
) -> Result<Estimate> {
    let f = |p: Abscissa| {
        let (v, d) = (profile.eval)(p);
        if v > 0.0 {
            g(v, d) * weight(p)
        } else {
            0.0
        }
    };
    quad(&f, &profile.domain, spec, quantity)
}

fn radial_weight(dim: usize) -> impl Fn(Abscissa) -> f64 {
    let area = sphere_area(dim);
    move |p: Abscissa| area * p.x.powi(dim as i32 - 1)
}

pub(crate) fn unit_weight(_: Abscissa) -> f64 {
    1.0
}

pub(crate) fn r2_weight(p: Abscissa) -> f64 {
    p.x * p.x
}

pub(crate) fn solid_angle_weight(p: Abscissa) -> f64 {
    2.0 * PI * polar_sin(p)
}

fn product(a: Estimate, b: Estimate) -> Estimate {
    Estimate {
        value: a.value * b.value,
        err_estimate: a.err_estimate * b.value.abs() + b.err_estimate * a.value.abs(),
    }
}

fn sum(a: Estimate, b: Estimate) -> Estimate {
    Estimate {
        value: a.value + b.value,
        err_estimate: a.err_estimate + b.err_estimate,
    }
}

/// `∫ ρ^p dx`.
pub fn power_integral<D: Density + ?Sized>(rho: &D, p: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    let q = "power integral";
    let g = move |v: f64, _: f64| v.powf(p);
    match rho.layout() {
        Layout::Line(profile) => profile_integral(&profile, g, unit_weight, spec, q),
        Layout::Radial { dim, profile, .. } => profile_integral(&profile, g, radial_weight(dim), spec, q),
        Layout::Separable { radial, polar } => Ok(product(
            profile_integral(&radial, g, r2_weight, spec, q)?,
            profile_integral(&polar, g, solid_angle_weight, spec, q)?,
        )),
    }
}

/// `∫ ρ^a |∇ρ|² dx`.
pub fn gradient_integral<D: Density + ?Sized>(
    rho: &D,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let q = "gradient integral";
    let g = move |v: f64, d: f64| weighted_gradient(v, a, d, 2.0);
    match rho.layout() {
        Layout::Line(profile) => profile_integral(&profile, g, unit_weight, spec, q),
        Layout::Radial { dim, profile, .. } => profile_integral(&profile, g, radial_weight(dim), spec, q),
        Layout::Separable { radial, polar } => {
            let pow2 = move |v: f64, _: f64| v.powf(a + 2.0);
            let first = product(
                profile_integral(&radial, g, r2_weight, spec, q)?,
                profile_integral(&polar, pow2, solid_angle_weight, spec, q)?,
            );
            let second = product(
                profile_integral(&radial, pow2, unit_weight, spec, q)?,
                profile_integral(&polar, g, solid_angle_weight, spec, q)?,
            );
            Ok(sum(first, second))
        }
    }
}

/// `−∫ ρ ln ρ dx`.
fn entropy_integral<D: Density + ?Sized>(rho: &D, spec: &QuadratureSpec) -> Result<Estimate> {
    let q = "Shannon entropy";
    let g = |v: f64, _: f64| -v * v.ln();
    let mass = |v: f64, _: f64| v;
    match rho.layout() {
        Layout::Line(profile) => profile_integral(&profile, g, unit_weight, spec, q),
        Layout::Radial { dim, profile, .. } => profile_integral(&profile, g, radial_weight(dim), spec, q),
        Layout::Separable { radial, polar } => Ok(sum(
            product(
                profile_integral(&radial, g, r2_weight, spec, q)?,
                profile_integral(&polar, mass, solid_angle_weight, spec, q)?,
            ),
            product(
                profile_integral(&radial, mass, r2_weight, spec, q)?,
                profile_integral(&polar, g, solid_angle_weight, spec, q)?,
            ),
        )),
    }
}

/// Total variance `∫|x − ⟨x⟩|² ρ dx`.
pub fn variance<D: Density + ?Sized>(rho: &D, spec: &QuadratureSpec) -> Result<Estimate> {
    let q = "variance";
    match rho.layout() {
        Layout::Line(profile) => {
            let m = profile_integral(&profile, |v, _| v, |p| p.x, spec, q)?.value;
            profile_integral(&profile, |v, _| v, move |p| (p.x - m) * (p.x - m), spec, q)
        }
        Layout::Radial { dim, profile, .. } => {
            let w = radial_weight(dim);
            profile_integral(&profile, |v, _| v, move |p| w(p) * p.x * p.x, spec, q)
        }
        Layout::Separable { radial, polar } => {
            let mass = |v: f64, _: f64| v;
            let r2 = product(
                profile_integral(&radial, mass, |p| p.x.powi(4), spec, q)?,
                profile_integral(&polar, mass, solid_angle_weight, spec, q)?,
            );
            let z = product(
                profile_integral(&radial, mass, |p| p.x.powi(3), spec, q)?,
                profile_integral(&polar, mass, |p| solid_angle_weight(p) * p.x.cos(), spec, q)?,
            );
            Ok(Estimate {
                value: r2.value - z.value * z.value,
                err_estimate: r2.err_estimate + 2.0 * z.value.abs() * z.err_estimate,
            })
        }
    }
}

fn check_dim<D: Density + ?Sized>(rho: &D, lambda: &LambdaParam) -> Result<()> {
    if rho.dim() != lambda.dim() {
        return Err(Error::domain(format!(
            "lambda was validated for dimension {} but the density has dimension {}",
            lambda.dim(),
            rho.dim()
        )));
    }
    Ok(())
}

/// Shannon entropy `S[ρ] = −∫ρ ln ρ`.
pub fn shannon_entropy<D: Density + ?Sized>(rho: &D, spec: &QuadratureSpec) -> Result<FunctionalValue> {
    let e = entropy_integral(rho, spec)?;
    Ok(FunctionalValue::quadrature(e.value, e.err_estimate))
}

/// Rényi entropy `R_p[ρ] = ln(∫ρ^p)/(1 − p)`; `p = 1` gives the Shannon entropy.
pub fn renyi_entropy<D: Density + ?Sized>(
    rho: &D,
    p: f64,
    spec: &QuadratureSpec,
) -> Result<FunctionalValue> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::domain(format!("Rényi order must be positive, got {p}")));
    }
    if p == 1.0 {
        return shannon_entropy(rho, spec);
    }
    let w = power_integral(rho, p, spec)?;
    if !(w.value > 0.0) {
        return Err(Error::domain("power integral is not positive"));
    }
    Ok(FunctionalValue::quadrature(
        w.value.ln() / (1.0 - p),
        w.err_estimate / (w.value * (1.0 - p).abs()),
    ))
}

/// Entropy power `N_λ = (∫ρ^λ)^{(μ/d)/(1−λ)}`, or `exp(2S/d)` at λ = 1.
pub fn renyi_power<D: Density + ?Sized>(
    rho: &D,
    lambda: &LambdaParam,
    spec: &QuadratureSpec,
) -> Result<FunctionalValue> {
    check_dim(rho, lambda)?;
    let d = lambda.dim() as f64;
    let l = lambda.value();
    if lambda.is_shannon_limit() {
        let s = shannon_entropy(rho, spec)?;
        let v = (2.0 * s.value / d).exp();
        return Ok(FunctionalValue::quadrature(v, v * 2.0 / d * s.err_estimate));
    }
    let w = power_integral(rho, l, spec)?;
    let e = lambda.mu() / d / (1.0 - l);
    let v = w.value.powf(e);
    Ok(FunctionalValue::quadrature(v, (v * e * w.err_estimate / w.value).abs()))
}

/// Standard Fisher information `∫|∇ρ|²/ρ`.
pub fn fisher_standard<D: Density + ?Sized>(rho: &D, spec: &QuadratureSpec) -> Result<FunctionalValue> {
    let g = gradient_integral(rho, -1.0, spec)?;
    Ok(FunctionalValue::quadrature(g.value, g.err_estimate))
}

/// λ-weighted Fisher information `F̃_λ = ∫ρ^{2λ−3}|∇ρ|² / ∫ρ^λ`.
pub fn fisher_lambda<D: Density + ?Sized>(
    rho: &D,
    lambda: &LambdaParam,
    spec: &QuadratureSpec,
) -> Result<FunctionalValue> {
    check_dim(rho, lambda)?;
    let l = lambda.value();
    rho.check_integrable(l)?;
    let num = gradient_integral(rho, 2.0 * l - 3.0, spec)?;
    let den = power_integral(rho, l, spec)?;
    let v = num.value / den.value;
    let err = v.abs() * (num.err_estimate / num.value.abs() + den.err_estimate / den.value.abs());
    Ok(FunctionalValue::quadrature(v, err))
}

/// Biparametric Fisher information `I_{β,q}[ρ] = ∫ρ^{β(q−1)+1} (|∇ρ|/ρ)^β`.
///
/// Requires β > 1 and q > 1 − 1/β. `I_{2,λ}` is the numerator of `F̃_λ`.
pub fn biparametric_fisher<D: Density + ?Sized>(
    rho: &D,
    beta: f64,
    q: f64,
    spec: &QuadratureSpec,
) -> Result<FunctionalValue> {
    if !(beta > 1.0) || !beta.is_finite() {
        return Err(Error::domain(format!("beta must exceed 1, got {beta}")));
    }
    if !(q > 1.0 - 1.0 / beta) || !q.is_finite() {
        return Err(Error::domain(format!("q must exceed 1 - 1/beta, got {q}")));
    }
    let a = beta * (q - 1.0) + 1.0 - beta;
    if beta == 2.0 {
        let g = gradient_integral(rho, a, spec)?;
        return Ok(FunctionalValue::quadrature(g.value, g.err_estimate));
    }
    let name = "biparametric Fisher information";
    let g = move |v: f64, d: f64| weighted_gradient(v, a, d, beta);
    let est = match rho.layout() {
        Layout::Line(profile) => profile_integral(&profile, g, unit_weight, spec, name)?,
        Layout::Radial { dim, profile, .. } => profile_integral(&profile, g, radial_weight(dim), spec, name)?,
        Layout::Separable { radial, polar } => {
            let inner_spec = spec.clone().with_rel_tol(spec.rel_tol * 0.1);
            let outer_spec = spec.clone().with_rel_tol(spec.rel_tol.max(1e-8));
            let outer = |pt: Abscissa| -> f64 {
                let (t, dt) = (polar.eval)(pt);
                let sin_t = polar_sin(pt);
                let inner = |pr: Abscissa| {
                    let (r, dr) = (radial.eval)(pr);
                    let v = r * t;
                    if v <= 0.0 || pr.x == 0.0 {
                        return 0.0;
                    }
                    let grad = (dr * t).hypot(r * dt / pr.x);
                    weighted_gradient(v, a, grad, beta) * pr.x * pr.x
                };
                let val = integrate_domain(&inner, &radial.domain, &inner_spec)
                    .map(|e| e.value)
                    .unwrap_or(f64::NAN);
                2.0 * PI * sin_t * val
            };
            quad(&outer, &polar.domain, &outer_spec, name)?
        }
    };
    Ok(FunctionalValue::quadrature(est.value, est.err_estimate))
}
