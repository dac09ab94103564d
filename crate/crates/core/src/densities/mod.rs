//! Probability densities and the constructors used throughout the crate.
//!
//! A [`Density`] can be evaluated pointwise, but the functionals never
//! integrate in `d` dimensions. Instead each density describes itself
//! through a [`Layout`]: a 1D line profile, an isotropic radial profile, or a
//! separable radial × polar pair (three dimensions, φ-independent). All
//! integrals then reduce to one-dimensional quadratures.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{Abscissa, Domain};

mod gaussian;
mod one_dim;
mod rearrange;
mod transform;

pub use gaussian::{Gaussian, GeneralizedGaussian};
pub use one_dim::{near_continuity_pair, BetaDensity, Bump, FnDensity1d, SineBumps};
pub use rearrange::{rearrange_decreasing_1d, RearrangedDensity};
pub use transform::{replicate_1d, scale_translate, Replicated1d, ScaledDensity};

/// Profile evaluator: value and first derivative at a sample point.
pub type ProfileFn<'a> = Box<dyn Fn(Abscissa) -> (f64, f64) + Send + Sync + 'a>;

/// A one-variable profile on its integration domain.
pub struct Profile<'a> {
    pub eval: ProfileFn<'a>,
    pub domain: Domain,
}

impl<'a> Profile<'a> {
    pub fn new(eval: ProfileFn<'a>, domain: Domain) -> Self {
        Self { eval, domain }
    }

    pub fn at(&self, x: f64) -> (f64, f64) {
        (self.eval)(Abscissa::plain(x))
    }
}

impl fmt::Debug for Profile<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Profile").field("domain", &self.domain).finish_non_exhaustive()
    }
}

/// How the functionals should integrate a density.
#[derive(Debug)]
pub enum Layout<'a> {
    /// One-dimensional density `ρ(x)`.
    Line(Profile<'a>),
    /// `ρ(x) = f(|x − center|)` in `dim` dimensions; the profile variable is the radius.
    Radial {
        dim: usize,
        center: Vec<f64>,
        profile: Profile<'a>,
    },
    /// Three-dimensional `ρ = R(r) Θ(θ)`, independent of φ.
    Separable { radial: Profile<'a>, polar: Profile<'a> },
}

impl<'a> Layout<'a> {
    /// Re-express a one-dimensional layout as a line profile.
    pub fn into_line(self) -> Result<Profile<'a>> {
        match self {
            Layout::Line(p) => Ok(p),
            Layout::Radial { dim: 1, center, profile } => {
                let c = center[0];
                let Profile { eval, domain } = profile;
                let mut bps = vec![c];
                for &b in &domain.breakpoints {
                    bps.push(c - b);
                    bps.push(c + b);
                }
                if domain.hi.is_finite() {
                    bps.push(c - domain.hi);
                    bps.push(c + domain.hi);
                }
                let line = Domain::new(c - domain.hi, c + domain.hi)
                    .with_breakpoints(bps)
                    .with_tail_scale(domain.tail_scale);
                let f = move |p: Abscissa| {
                    let d = p.x - c;
                    let (r, anchor, offset) = if p.anchor >= c {
                        (d.abs(), (p.anchor - c).abs(), p.offset)
                    } else {
                        (d.abs(), (c - p.anchor).abs(), -p.offset)
                    };
                    let (v, dv) = eval(Abscissa {
                        x: r,
                        anchor,
                        offset,
                    });
                    (v, if d < 0.0 { -dv } else { dv })
                };
                Ok(Profile::new(Box::new(f), line))
            }
            _ => Err(Error::unsupported("layout is not one-dimensional")),
        }
    }
}

/// Region where the density may be non-zero.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    /// One-dimensional interval; either end may be infinite.
    Interval { lo: f64, hi: f64 },
    /// Closed ball.
    Ball { center: Vec<f64>, radius: f64 },
    /// All of `ℝ^d`.
    Whole,
}

impl Support {
    pub fn is_bounded(&self) -> bool {
        match self {
            Support::Interval { lo, hi } => lo.is_finite() && hi.is_finite(),
            Support::Ball { radius, .. } => radius.is_finite(),
            Support::Whole => false,
        }
    }
}

/// Closed-form values of the two complexity factors at one λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticParts {
    pub fisher_lambda: f64,
    pub renyi_power: f64,
}

/// A normalized probability density on `ℝ^d`.
pub trait Density: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, x: &[f64]) -> Vec<f64>;

    fn support(&self) -> Support;

    fn layout(&self) -> Layout<'_>;

    /// `F̃_λ` and `N_λ` in closed form, when known.
    fn analytic(&self, _lambda: f64) -> Option<Result<AnalyticParts>> {
        None
    }

    /// Rejects λ values for which `∫ρ^{2λ−3}|∇ρ|²` is known to diverge.
    fn check_integrable(&self, _lambda: f64) -> Result<()> {
        Ok(())
    }
}

macro_rules! forward_density {
    ($($ty:ty),*) => {$(
        impl<D: Density + ?Sized> Density for $ty {
            fn dim(&self) -> usize { (**self).dim() }
            fn value(&self, x: &[f64]) -> f64 { (**self).value(x) }
            fn gradient(&self, x: &[f64]) -> Vec<f64> { (**self).gradient(x) }
            fn support(&self) -> Support { (**self).support() }
            fn layout(&self) -> Layout<'_> { (**self).layout() }
            fn analytic(&self, lambda: f64) -> Option<Result<AnalyticParts>> { (**self).analytic(lambda) }
            fn check_integrable(&self, lambda: f64) -> Result<()> { (**self).check_integrable(lambda) }
        }
    )*};
}

forward_density!(&D, Box<D>, Arc<D>);

/// `v^a |g|^β`, grouped so that underflow in `g` cannot meet overflow in `v^a`.
#[inline]
pub(crate) fn weighted_gradient(v: f64, a: f64, g: f64, beta: f64) -> f64 {
    if v > 0.0 {
        (v.powf(a / beta) * g.abs()).powf(beta)
    } else {
        0.0
    }
}
