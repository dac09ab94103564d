use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::{Density, Layout, Profile, Support};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_domain, Abscissa, Domain, QuadratureSpec};
use crate::specfun::{log_gamma, ANCHOR_TOL};

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= ANCHOR_TOL * b.abs().max(1.0)
}

/// One `sin²` bump `h · sin²(π (x − lo)/w)` on `[lo, lo + w]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub lo: f64,
    pub width: f64,
    pub height: f64,
}

impl Bump {
    pub fn hi(&self) -> f64 {
        self.lo + self.width
    }
}

/// Normalized sum of non-overlapping `sin²` bumps.
///
/// A single bump is the truncated cosine `cos²(π x / w)` on `[−w/2, w/2]`;
/// several bumps give multimodal and asymmetric test densities.
#[derive(Debug, Clone, PartialEq)]
pub struct SineBumps {
    bumps: Vec<Bump>,
    mass: f64,
}

impl SineBumps {
    pub fn new(mut bumps: Vec<Bump>) -> Result<Self> {
        if bumps.is_empty() {
            return Err(Error::domain("at least one bump is required"));
        }
        for b in &bumps {
            let ok = b.lo.is_finite()
                && b.width > 0.0
                && b.width.is_finite()
                && b.height > 0.0
                && b.height.is_finite();
            if !ok {
                return Err(Error::domain(format!("invalid bump {b:?}")));
            }
        }
        bumps.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        if bumps.windows(2).any(|w| w[1].lo < w[0].hi()) {
            return Err(Error::domain("bumps must not overlap"));
        }
        let mass = bumps.iter().map(|b| 0.5 * b.height * b.width).sum();
        Ok(Self { bumps, mass })
    }

    /// `(2/w) cos²(π (x − c)/w)` on `[c − w/2, c + w/2]`.
    pub fn truncated_cosine(center: f64, width: f64) -> Result<Self> {
        Self::new(vec![Bump {
            lo: center - 0.5 * width,
            width,
            height: 1.0,
        }])
    }

    pub fn bumps(&self) -> &[Bump] {
        &self.bumps
    }

    fn locate(&self, x: f64) -> Option<&Bump> {
        let i = self.bumps.partition_point(|b| b.lo <= x);
        let b = self.bumps.get(i.checked_sub(1)?)?;
        (x <= b.hi()).then_some(b)
    }

    fn eval(&self, p: Abscissa) -> (f64, f64) {
        let Some(b) = self.locate(p.x) else {
            return (0.0, 0.0);
        };
        let k = PI / b.width;
        // sin²(k s) with s measured from whichever end the anchor sits on
        let phase = if p.offset != 0.0 && (near(p.anchor, b.lo) || near(p.anchor, b.hi())) {
            k * p.offset
        } else {
            k * (p.x - b.lo)
        };
        let s = phase.sin();
        let scale = b.height / self.mass;
        (scale * s * s, scale * k * (2.0 * phase).sin())
    }
}

impl Density for SineBumps {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval(Abscissa::plain(x[0])).0
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![self.eval(Abscissa::plain(x[0])).1]
    }

    fn support(&self) -> Support {
        Support::Interval {
            lo: self.bumps[0].lo,
            hi: self.bumps[self.bumps.len() - 1].hi(),
        }
    }

    fn layout(&self) -> Layout<'_> {
        let bps = self.bumps.iter().flat_map(|b| [b.lo, b.hi()]).collect();
        let Support::Interval { lo, hi } = self.support() else {
            unreachable!()
        };
        let domain = Domain::new(lo, hi).with_breakpoints(bps);
        Layout::Line(Profile::new(Box::new(move |p| self.eval(p)), domain))
    }

    /// Every bump edge behaves like `s²`, so `ρ^{2λ−3}ρ'² ~ s^{4λ−4}`.
    fn check_integrable(&self, lambda: f64) -> Result<()> {
        if lambda <= 0.75 {
            let Support::Interval { lo, hi } = self.support() else {
                unreachable!()
            };
            return Err(Error::Divergent {
                quantity: "integral of rho^(2 lambda - 3) |grad rho|^2".into(),
                lo,
                hi,
                reason: format!(
                    "the integrand behaves like s^(4 lambda - 4) at a bump edge, \
                     which is not integrable for lambda = {lambda} <= 3/4"
                ),
            });
        }
        Ok(())
    }
}

/// The pair `(ρ, ρ̃_δ)` of nearby densities with very different complexity.
///
/// `ρ = (2/π) sin²x` on `[−π, 0]`; `ρ̃_δ` adds the narrow bump `δ sin²(x/δ⁵)` on
/// `[0, δ⁵π]` and renormalizes by `2/(π(1 + δ⁶))`.
pub fn near_continuity_pair(delta: f64) -> Result<(SineBumps, SineBumps)> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::domain(format!("delta must lie in (0, 1], got {delta}")));
    }
    let base = Bump {
        lo: -PI,
        width: PI,
        height: 1.0,
    };
    let spike = Bump {
        lo: 0.0,
        width: delta.powi(5) * PI,
        height: delta,
    };
    Ok((SineBumps::new(vec![base])?, SineBumps::new(vec![base, spike])?))
}

/// Beta-shaped density `x^a (1 − x)^b / B(a+1, b+1)` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaDensity {
    a: f64,
    b: f64,
    ln_norm: f64,
}

impl BetaDensity {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::domain(format!("exponents must be positive, got a={a}, b={b}")));
        }
        let ln_norm = log_gamma(a + 1.0)? + log_gamma(b + 1.0)? - log_gamma(a + b + 2.0)?;
        Ok(Self { a, b, ln_norm })
    }

    fn eval(&self, p: Abscissa) -> (f64, f64) {
        if !(p.x >= 0.0 && p.x <= 1.0) {
            return (0.0, 0.0);
        }
        let (x, y) = if p.offset != 0.0 && near(p.anchor, 0.0) {
            (p.offset, 1.0 - p.offset)
        } else if p.offset != 0.0 && near(p.anchor, 1.0) {
            (1.0 + p.offset, -p.offset)
        } else {
            (p.x, 1.0 - p.x)
        };
        if x <= 0.0 || y <= 0.0 {
            return (0.0, 0.0);
        }
        let base = (-self.ln_norm).exp() * x.powf(self.a - 1.0) * y.powf(self.b - 1.0);
        (base * x * y, base * (self.a * y - self.b * x))
    }
}

impl Density for BetaDensity {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval(Abscissa::plain(x[0])).0
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![self.eval(Abscissa::plain(x[0])).1]
    }

    fn support(&self) -> Support {
        Support::Interval { lo: 0.0, hi: 1.0 }
    }

    fn layout(&self) -> Layout<'_> {
        Layout::Line(Profile::new(Box::new(move |p| self.eval(p)), Domain::new(0.0, 1.0)))
    }

    /// Near an end with exponent `e` the integrand behaves like `x^{e(2λ−1)−2}`.
    fn check_integrable(&self, lambda: f64) -> Result<()> {
        for (e, at) in [(self.a, 0.0), (self.b, 1.0)] {
            if !(e * (2.0 * lambda - 1.0) > 1.0) {
                return Err(Error::Divergent {
                    quantity: "integral of rho^(2 lambda - 3) |grad rho|^2".into(),
                    lo: at,
                    hi: at,
                    reason: format!(
                        "the integrand behaves like x^({e} (2 lambda - 1) - 2) at {at}, \
                         which is not integrable for lambda = {lambda}"
                    ),
                });
            }
        }
        Ok(())
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One-dimensional density given by closures for the value and derivative.
#[derive(Clone)]
pub struct FnDensity1d {
    value: RealFn,
    deriv: RealFn,
    domain: Domain,
    scale: f64,
}

impl fmt::Debug for FnDensity1d {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnDensity1d")
            .field("domain", &self.domain)
            .field("scale", &self.scale)
            .finish_non_exhaustive()
    }
}

impl FnDensity1d {
    /// The closures must describe a normalized density on `[lo, hi]`.
    pub fn new(
        lo: f64,
        hi: f64,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(lo < hi) || lo.is_nan() || hi.is_nan() {
            return Err(Error::domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Self {
            value: Arc::new(value),
            deriv: Arc::new(deriv),
            domain: Domain::new(lo, hi),
            scale: 1.0,
        })
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.domain = self.domain.with_breakpoints(breakpoints);
        self
    }

    pub fn with_tail_scale(mut self, scale: f64) -> Self {
        self.domain = self.domain.with_tail_scale(scale);
        self
    }

    /// Rescale so that the density integrates to one.
    pub fn normalized(mut self, spec: &QuadratureSpec) -> Result<Self> {
        self.scale = 1.0;
        let f = |p: Abscissa| (self.value)(p.x);
        let mass = integrate_domain(&f, &self.domain, spec)?.value;
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::domain(format!("cannot normalize a function of mass {mass}")));
        }
        self.scale = 1.0 / mass;
        Ok(self)
    }

    fn eval(&self, x: f64) -> (f64, f64) {
        if x < self.domain.lo || x > self.domain.hi {
            return (0.0, 0.0);
        }
        (self.scale * (self.value)(x), self.scale * (self.deriv)(x))
    }
}

impl Density for FnDensity1d {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x[0]).0
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![self.eval(x[0]).1]
    }

    fn support(&self) -> Support {
        Support::Interval {
            lo: self.domain.lo,
            hi: self.domain.hi,
        }
    }

    fn layout(&self) -> Layout<'_> {
        Layout::Line(Profile::new(Box::new(move |p: Abscissa| self.eval(p.x)), self.domain.clone()))
    }
}
