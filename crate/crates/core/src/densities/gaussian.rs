use std::f64::consts::PI;

use super::{AnalyticParts, Density, Layout, Profile, Support};
use crate::error::{Error, Result};
use crate::functionals::LambdaParam;
use crate::quadrature::{Abscissa, Domain};
use crate::specfun::{log_gamma, ANCHOR_TOL};

fn radius(x: &[f64], center: &[f64]) -> f64 {
    x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt()
}

fn check_center(dim: usize, center: &[f64]) -> Result<()> {
    if dim == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    if center.len() != dim {
        return Err(Error::domain(format!(
            "center has {} coordinates, expected {dim}",
            center.len()
        )));
    }
    if center.iter().any(|c| !c.is_finite()) {
        return Err(Error::domain("center must be finite"));
    }
    Ok(())
}

/// Isotropic normal density `N(center, σ² I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    dim: usize,
    sigma: f64,
    center: Vec<f64>,
    norm: f64,
}

impl Gaussian {
    pub fn new(dim: usize, sigma: f64) -> Result<Self> {
        Self::with_center(vec![0.0; dim], sigma)
    }

    pub fn with_center(center: Vec<f64>, sigma: f64) -> Result<Self> {
        let dim = center.len();
        check_center(dim, &center)?;
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
        }
        let norm = (2.0 * PI * sigma * sigma).powf(-(dim as f64) / 2.0);
        Ok(Self {
            dim,
            sigma,
            center,
            norm,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    fn profile(&self, r: f64) -> (f64, f64) {
        let s2 = self.sigma * self.sigma;
        let v = self.norm * (-0.5 * r * r / s2).exp();
        (v, -r / s2 * v)
    }
}

impl Density for Gaussian {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.profile(radius(x, &self.center)).0
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let v = self.value(x);
        let s2 = self.sigma * self.sigma;
        x.iter().zip(&self.center).map(|(a, c)| -(a - c) / s2 * v).collect()
    }

    fn support(&self) -> Support {
        if self.dim == 1 {
            Support::Interval {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            }
        } else {
            Support::Whole
        }
    }

    fn layout(&self) -> Layout<'_> {
        let domain = Domain::new(0.0, f64::INFINITY).with_tail_scale(2.0 * self.sigma);
        Layout::Radial {
            dim: self.dim,
            center: self.center.clone(),
            profile: Profile::new(Box::new(move |p: Abscissa| self.profile(p.x)), domain),
        }
    }

    fn analytic(&self, lambda: f64) -> Option<Result<AnalyticParts>> {
        if !(lambda > 0.5) {
            return None;
        }
        let d = self.dim as f64;
        let s2 = self.sigma * self.sigma;
        if lambda == 1.0 {
            return Some(Ok(AnalyticParts {
                fisher_lambda: d / s2,
                renyi_power: 2.0 * PI * std::f64::consts::E * s2,
            }));
        }
        // ∫ρ^λ and ∫ρ^{2λ-1} r²/σ⁴ for the normal density
        let two_pi_s2 = 2.0 * PI * s2;
        let power = two_pi_s2.powf(d * (1.0 - lambda) / 2.0) * lambda.powf(-d / 2.0);
        let grad =
            d / s2 * two_pi_s2.powf(d * (1.0 - lambda)) * (2.0 * lambda - 1.0).powf(-d / 2.0 - 1.0);
        let fisher = grad / power;
        let mu = 2.0 + d * (lambda - 1.0);
        let renyi_power = power.powf(mu / d / (1.0 - lambda));
        Some(Ok(AnalyticParts {
            fisher_lambda: fisher,
            renyi_power,
        }))
    }
}

/// The generalized Gaussian `B_λ` that attains `C_FR = 1`:
/// `(C_λ − r²)_+^{1/(λ−1)}` for λ > 1 and `(C_λ + r²)^{1/(λ−1)}` for λ < 1, normalized through `C_λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedGaussian {
    lambda: LambdaParam,
    center: Vec<f64>,
    /// normalization constant `A_λ`
    a: f64,
    /// `C_λ`
    c: f64,
    /// exponent `1/(λ−1)`
    k: f64,
}

impl GeneralizedGaussian {
    pub fn new(lambda: LambdaParam) -> Result<Self> {
        Self::with_center(lambda, vec![0.0; lambda.dim()])
    }

    pub fn with_center(lambda: LambdaParam, center: Vec<f64>) -> Result<Self> {
        check_center(lambda.dim(), &center)?;
        let l = lambda.value();
        if l == 1.0 {
            return Err(Error::domain(
                "the generalized Gaussian is defined for lambda != 1 (use Gaussian at lambda = 1)",
            ));
        }
        let d = lambda.dim() as f64;
        let half_d = d / 2.0;
        let ln_a = if l > 1.0 {
            let e = l / (l - 1.0);
            half_d * PI.ln() + log_gamma(e)? - log_gamma(e + half_d)?
        } else {
            let e = 1.0 / (1.0 - l);
            half_d * PI.ln() + log_gamma(e - half_d)? - log_gamma(e)?
        };
        let c = (-2.0 * (l - 1.0) / (d * (l - 1.0) + 2.0) * ln_a).exp();
        Ok(Self {
            lambda,
            center,
            a: ln_a.exp(),
            c,
            k: 1.0 / (l - 1.0),
        })
    }

    pub fn lambda(&self) -> LambdaParam {
        self.lambda
    }

    pub fn c_const(&self) -> f64 {
        self.c
    }

    pub fn a_const(&self) -> f64 {
        self.a
    }

    /// Radius of the support; infinite for λ < 1.
    pub fn support_radius(&self) -> f64 {
        if self.lambda.value() > 1.0 {
            self.c.sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// `C ∓ r²`, with the λ > 1 case computed from the distance to the rim when available.
    fn base(&self, p: Abscissa) -> f64 {
        let r = p.x;
        if self.lambda.value() > 1.0 {
            let rim = self.c.sqrt();
            if (p.anchor - rim).abs() <= ANCHOR_TOL * rim.max(1.0) && p.offset != 0.0 {
                -p.offset * (rim + r)
            } else {
                (rim - r) * (rim + r)
            }
        } else {
            self.c + r * r
        }
    }

    fn profile(&self, p: Abscissa) -> (f64, f64) {
        let b = self.base(p);
        if b <= 0.0 {
            return (0.0, 0.0);
        }
        let v = b.powf(self.k);
        let sign = if self.lambda.value() > 1.0 { -1.0 } else { 1.0 };
        // d/dr (C ∓ r²)^k = ∓2kr (C ∓ r²)^{k−1}
        let dv = sign * 2.0 * self.k * p.x * b.powf(self.k - 1.0);
        (v, dv)
    }
}

impl Density for GeneralizedGaussian {
    fn dim(&self) -> usize {
        self.lambda.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.profile(Abscissa::plain(radius(x, &self.center))).0
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let r = radius(x, &self.center);
        if r == 0.0 {
            return vec![0.0; x.len()];
        }
        let dv = self.profile(Abscissa::plain(r)).1;
        x.iter().zip(&self.center).map(|(a, c)| dv * (a - c) / r).collect()
    }

    fn support(&self) -> Support {
        let radius = self.support_radius();
        if self.dim() == 1 {
            let c = self.center[0];
            Support::Interval {
                lo: c - radius,
                hi: c + radius,
            }
        } else if radius.is_finite() {
            Support::Ball {
                center: self.center.clone(),
                radius,
            }
        } else {
            Support::Whole
        }
    }

    fn layout(&self) -> Layout<'_> {
        let domain = Domain::new(0.0, self.support_radius()).with_tail_scale(self.c.sqrt().max(1.0));
        Layout::Radial {
            dim: self.dim(),
            center: self.center.clone(),
            profile: Profile::new(Box::new(move |p| self.profile(p)), domain),
        }
    }

    fn analytic(&self, lambda: f64) -> Option<Result<AnalyticParts>> {
        if lambda != self.lambda.value() {
            return None;
        }
        Some(self.own_parts())
    }
}

impl GeneralizedGaussian {
    /// Closed-form `F̃_λ` and `N_λ` at the density's own λ.
    fn own_parts(&self) -> Result<AnalyticParts> {
        let l = self.lambda.value();
        let d = self.dim() as f64;
        let hd = d / 2.0;
        let ln_c = self.c.ln();
        let ln_pi = hd * PI.ln();
        let (ln_power, ln_grad) = if l > 1.0 {
            let k = self.k;
            // ∫(C − r²)^s = π^{d/2} Γ(s+1)/Γ(s+1+d/2) C^{s+d/2}
            let s = k * l;
            let ln_power = ln_pi + log_gamma(s + 1.0)? - log_gamma(s + 1.0 + hd)? + (s + hd) * ln_c;
            // ∫r² (C − r²)^k = π^{d/2} (d/2) Γ(k+1)/Γ(k+2+d/2) C^{k+1+d/2}
            let ln_q = ln_pi + hd.ln() + log_gamma(k + 1.0)? - log_gamma(k + 2.0 + hd)?
                + (k + 1.0 + hd) * ln_c;
            (ln_power, (4.0 * k * k).ln() + ln_q)
        } else {
            let s = 1.0 / (1.0 - l);
            // ∫(C + r²)^{−a} = π^{d/2} Γ(a−d/2)/Γ(a) C^{d/2−a}
            let a = s * l;
            let ln_power = ln_pi + log_gamma(a - hd)? - log_gamma(a)? + (hd - a) * ln_c;
            // ∫r² (C + r²)^{−s} = π^{d/2} (d/2) Γ(s−1−d/2)/Γ(s) C^{d/2+1−s}
            let ln_q = ln_pi + hd.ln() + log_gamma(s - 1.0 - hd)? - log_gamma(s)?
                + (hd + 1.0 - s) * ln_c;
            (ln_power, (4.0 * s * s).ln() + ln_q)
        };
        let mu = self.lambda.mu();
        Ok(AnalyticParts {
            fisher_lambda: (ln_grad - ln_power).exp(),
            renyi_power: (ln_power * mu / d / (1.0 - l)).exp(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::test_support::gradient_matches_fd;
    use crate::quadrature::{integrate_domain, QuadratureSpec};

    fn mass<D: Density>(rho: &D) -> f64 {
        let Layout::Radial { dim, profile, .. } = rho.layout() else {
            panic!("radial layout expected");
        };
        let d = dim as f64;
        let surface = 2.0 * PI.powf(d / 2.0) / crate::specfun::gamma(d / 2.0).unwrap();
        let f = |p: Abscissa| surface * p.x.powi(dim as i32 - 1) * (profile.eval)(p).0;
        integrate_domain(&f, &profile.domain, &QuadratureSpec::default()).unwrap().value
    }

    #[test]
    fn gaussian_is_normalized() {
        for d in 1..=4 {
            let g = Gaussian::new(d, 0.7).unwrap();
            assert!((mass(&g) - 1.0).abs() < 1e-10, "d = {d}");
        }
    }

    #[test]
    fn generalized_gaussian_is_normalized() {
        for &(l, d) in &[(1.5, 1), (2.0, 1), (0.8, 1), (2.0, 3), (1.25, 3), (0.9, 2), (3.0, 2)] {
            let b = GeneralizedGaussian::new(LambdaParam::new(l, d).unwrap()).unwrap();
            assert!((mass(&b) - 1.0).abs() < 1e-9, "lambda = {l}, d = {d}: {}", mass(&b));
        }
    }

    #[test]
    fn generalized_gaussian_rejects_shannon_point() {
        let l = LambdaParam::new(1.0, 2).unwrap();
        assert!(matches!(GeneralizedGaussian::new(l), Err(Error::Domain(_))));
    }

    #[test]
    fn compact_support_for_lambda_above_one() {
        let b = GeneralizedGaussian::new(LambdaParam::new(2.0, 1).unwrap()).unwrap();
        let r = b.support_radius();
        assert!(r.is_finite());
        assert_eq!(b.value(&[r * 1.0001]), 0.0);
        assert!(b.value(&[r * 0.999]) > 0.0);
        let heavy = GeneralizedGaussian::new(LambdaParam::new(0.8, 1).unwrap()).unwrap();
        assert!(heavy.support_radius().is_infinite());
    }

    #[test]
    fn gradients_match_differences() {
        let g = Gaussian::with_center(vec![0.3, -1.0], 1.3).unwrap();
        assert!(gradient_matches_fd(&g, &[0.9, 0.2], 1e-6));
        let b = GeneralizedGaussian::new(LambdaParam::new(1.25, 3).unwrap()).unwrap();
        assert!(gradient_matches_fd(&b, &[0.3, 0.2, -0.4], 1e-6));
    }
}
