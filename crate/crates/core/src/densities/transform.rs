use std::f64::consts::PI;

use super::{AnalyticParts, Density, Layout, Profile, Support};
use crate::error::{Error, Result};
use crate::quadrature::{Abscissa, Domain};
use crate::specfun::ANCHOR_TOL;

/// `ρ_{a,b}(x) = |a|^d ρ(a (x − b))`.
#[derive(Debug, Clone)]
pub struct ScaledDensity<D> {
    inner: D,
    a: f64,
    b: Vec<f64>,
    jac: f64,
}

/// Scale by `a ≠ 0` and translate by `b`; the result is again normalized.
pub fn scale_translate<D: Density>(inner: D, a: f64, b: Vec<f64>) -> Result<ScaledDensity<D>> {
    if !(a != 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("scale factor must be finite and non-zero, got {a}")));
    }
    if b.len() != inner.dim() || b.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain(format!(
            "translation must have {} finite coordinates",
            inner.dim()
        )));
    }
    let jac = a.abs().powi(inner.dim() as i32);
    Ok(ScaledDensity { inner, a, b, jac })
}

impl<D: Density> ScaledDensity<D> {
    pub fn inner(&self) -> &D {
        &self.inner
    }

    fn pull(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.b).map(|(xi, bi)| self.a * (xi - bi)).collect()
    }

    /// Image of an inner-coordinate point.
    fn push(&self, y: f64, i: usize) -> f64 {
        y / self.a + self.b[i]
    }
}

fn finite_knots(domain: &Domain) -> Vec<f64> {
    let mut k = vec![domain.lo, domain.hi];
    k.extend_from_slice(&domain.breakpoints);
    k.retain(|v| v.is_finite());
    k
}

/// Inner sample for a mapped abscissa, with the anchor snapped back onto the inner knot it came from.
fn snapped(knots: &[f64], x: f64, anchor: f64, offset: f64) -> Abscissa {
    if offset != 0.0 {
        if let Some(&k) = knots.iter().find(|&&k| (k - anchor).abs() <= ANCHOR_TOL * k.abs().max(1.0)) {
            return Abscissa {
                x: k + offset,
                anchor: k,
                offset,
            };
        }
    }
    Abscissa { x, anchor, offset }
}

fn map_domain(domain: &Domain, f: impl Fn(f64) -> f64, tail: f64) -> Domain {
    let (p, q) = (f(domain.lo), f(domain.hi));
    let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
    Domain::new(lo, hi)
        .with_breakpoints(domain.breakpoints.iter().map(|&v| f(v)).collect())
        .with_tail_scale(tail)
}

impl<D: Density> Density for ScaledDensity<D> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.jac * self.inner.value(&self.pull(x))
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let g = self.inner.gradient(&self.pull(x));
        g.into_iter().map(|v| self.a * self.jac * v).collect()
    }

    fn support(&self) -> Support {
        match self.inner.support() {
            Support::Interval { lo, hi } => {
                let (p, q) = (self.push(lo, 0), self.push(hi, 0));
                Support::Interval {
                    lo: p.min(q),
                    hi: p.max(q),
                }
            }
            Support::Ball { center, radius } => Support::Ball {
                center: center.iter().enumerate().map(|(i, &c)| self.push(c, i)).collect(),
                radius: radius / self.a.abs(),
            },
            Support::Whole => Support::Whole,
        }
    }

    fn layout(&self) -> Layout<'_> {
        let a = self.a;
        let abs_a = a.abs();
        let jac = self.jac;
        match self.inner.layout() {
            Layout::Line(Profile { eval, domain }) => {
                let b = self.b[0];
                let mapped = map_domain(&domain, |y| y / a + b, domain.tail_scale / abs_a);
                let knots = finite_knots(&domain);
                let f = move |p: Abscissa| {
                    let (v, dv) = eval(snapped(&knots, a * (p.x - b), a * (p.anchor - b), a * p.offset));
                    (jac * v, a * jac * dv)
                };
                Layout::Line(Profile::new(Box::new(f), mapped))
            }
            Layout::Radial {
                dim,
                center,
                profile: Profile { eval, domain },
            } => {
                let center = center.iter().enumerate().map(|(i, &c)| self.push(c, i)).collect();
                let mapped = map_domain(&domain, |r| r / abs_a, domain.tail_scale / abs_a);
                let knots = finite_knots(&domain);
                let f = move |p: Abscissa| {
                    let (v, dv) = eval(snapped(&knots, abs_a * p.x, abs_a * p.anchor, abs_a * p.offset));
                    (jac * v, abs_a * jac * dv)
                };
                Layout::Radial {
                    dim,
                    center,
                    profile: Profile::new(Box::new(f), mapped),
                }
            }
            Layout::Separable { radial, polar } => {
                let Profile { eval: reval, domain: rdom } = radial;
                let rmapped = map_domain(&rdom, |r| r / abs_a, rdom.tail_scale / abs_a);
                let rknots = finite_knots(&rdom);
                let rf = move |p: Abscissa| {
                    let (v, dv) = reval(snapped(&rknots, abs_a * p.x, abs_a * p.anchor, abs_a * p.offset));
                    (jac * v, abs_a * jac * dv)
                };
                let polar = if a > 0.0 {
                    polar
                } else {
                    // x ↦ −x sends θ to π − θ
                    let Profile { eval: peval, domain: pdom } = polar;
                    let pmapped = map_domain(&pdom, |t| PI - t, pdom.tail_scale);
                    let pknots = finite_knots(&pdom);
                    let pf = move |p: Abscissa| {
                        let (v, dv) = peval(snapped(&pknots, PI - p.x, PI - p.anchor, -p.offset));
                        (v, -dv)
                    };
                    Profile::new(Box::new(pf), pmapped)
                };
                Layout::Separable {
                    radial: Profile::new(Box::new(rf), rmapped),
                    polar,
                }
            }
        }
    }

    fn analytic(&self, lambda: f64) -> Option<Result<AnalyticParts>> {
        let e = self.dim() as f64 * (lambda - 1.0) + 2.0;
        let s = self.a.abs().powf(e);
        self.inner.analytic(lambda).map(|r| {
            r.map(|p| AnalyticParts {
                fisher_lambda: p.fisher_lambda * s,
                renyi_power: p.renyi_power / s,
            })
        })
    }

    fn check_integrable(&self, lambda: f64) -> Result<()> {
        self.inner.check_integrable(lambda)
    }
}

/// `n` disjoint copies of a compactly supported 1D density, each squeezed by √n.
///
/// Copy `m` (0-based) is centred at `b_m = 2 m w/√n`, where `w` is the length
/// of the inner support, so consecutive copies never overlap.
#[derive(Debug, Clone)]
pub struct Replicated1d<D> {
    inner: D,
    copies: usize,
    lo: f64,
    hi: f64,
    scale: f64,
    shift: f64,
}

pub fn replicate_1d<D: Density>(inner: D, copies: usize) -> Result<Replicated1d<D>> {
    if inner.dim() != 1 {
        return Err(Error::domain("replication is defined for one-dimensional densities"));
    }
    if copies == 0 {
        return Err(Error::domain("at least one copy is required"));
    }
    let Support::Interval { lo, hi } = inner.support() else {
        return Err(Error::domain("replication needs an interval support"));
    };
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::domain("replication needs a bounded support"));
    }
    let scale = (copies as f64).sqrt();
    Ok(Replicated1d {
        inner,
        copies,
        lo,
        hi,
        scale,
        shift: 2.0 * (hi - lo) / scale,
    })
}

impl<D: Density> Replicated1d<D> {
    pub fn copies(&self) -> usize {
        self.copies
    }

    fn offset_of(&self, m: usize) -> f64 {
        m as f64 * self.shift
    }

    /// The only copy whose support can contain `x`.
    fn nearest_copy(&self, x: f64) -> usize {
        let rel = (x - self.lo / self.scale) / self.shift;
        (rel.max(0.0).floor() as usize).min(self.copies - 1)
    }

    /// Copy whose support contains `x`, if any.
    fn copy_at(&self, x: f64) -> Option<usize> {
        let m = self.nearest_copy(x);
        let y = self.scale * (x - self.offset_of(m));
        (y >= self.lo && y <= self.hi).then_some(m)
    }
}

impl<D: Density> Density for Replicated1d<D> {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, x: &[f64]) -> f64 {
        match self.copy_at(x[0]) {
            Some(m) => self.inner.value(&[self.scale * (x[0] - self.offset_of(m))]) / self.scale,
            None => 0.0,
        }
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match self.copy_at(x[0]) {
            Some(m) => self.inner.gradient(&[self.scale * (x[0] - self.offset_of(m))]),
            None => vec![0.0],
        }
    }

    fn support(&self) -> Support {
        Support::Interval {
            lo: self.lo / self.scale,
            hi: self.offset_of(self.copies - 1) + self.hi / self.scale,
        }
    }

    fn layout(&self) -> Layout<'_> {
        let inner = self
            .inner
            .layout()
            .into_line()
            .expect("one-dimensional density has a line layout");
        let mut bps = Vec::new();
        for m in 0..self.copies {
            let c = self.offset_of(m);
            bps.push(c + self.lo / self.scale);
            bps.push(c + self.hi / self.scale);
            bps.extend(inner.domain.breakpoints.iter().map(|&y| c + y / self.scale));
        }
        let Support::Interval { lo, hi } = self.support() else {
            unreachable!()
        };
        let domain = Domain::new(lo, hi).with_breakpoints(bps);
        let knots = finite_knots(&inner.domain);
        let eval = inner.eval;
        let f = move |p: Abscissa| {
            let m = self.nearest_copy(p.x);
            let c = self.offset_of(m);
            let q = snapped(
                &knots,
                self.scale * (p.x - c),
                self.scale * (p.anchor - c),
                self.scale * p.offset,
            );
            if q.x >= self.lo && q.x <= self.hi {
                let (v, dv) = eval(q);
                (v / self.scale, dv)
            } else {
                (0.0, 0.0)
            }
        };
        Layout::Line(Profile::new(Box::new(f), domain))
    }

    fn check_integrable(&self, lambda: f64) -> Result<()> {
        self.inner.check_integrable(lambda)
    }
}
