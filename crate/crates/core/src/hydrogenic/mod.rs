//! Hydrogenic densities `ρ_{n,l,m}(r, θ) = R_{n,l}(r) Θ_{l,m}(θ)` and their complexity.
//!
//! Two evaluation paths are provided: quadrature of the six radial/angular
//! pieces for any state ([`cfr_numeric`]), and closed forms for the ground,
//! `ns` and circular states.

use serde::{Deserialize, Serialize};

use crate::complexity::{ComplexityReport, Method};
use crate::densities::{AnalyticParts, Density, Layout, Profile, Support};
use crate::error::{Error, Result};
use crate::functionals::{FunctionalValue, LambdaParam};
use crate::quadrature::{Abscissa, Domain};
use crate::specfun::{laguerre, AngularDensity, OrthonormalLaguerre, ANCHOR_TOL};

mod closed;
mod numeric;
mod phi0;

pub use closed::{
    cfr_circular_closed, cfr_ground_closed, cfr_ns_closed, circular_pieces, radial_g,
    radial_integrals_general, RadialIntegrals,
};
pub use numeric::{cfr_numeric, numeric_pieces};
pub use phi0::{phi0, phi0_lattice, Phi0Request};

/// Quantum numbers `(n, l, m)` and nuclear charge `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumNumbers {
    n: u32,
    l: u32,
    m: i32,
    z: f64,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32, m: i32, z: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n must be at least 1"));
        }
        if l >= n {
            return Err(Error::domain(format!("l must lie in [0, n-1], got n={n}, l={l}")));
        }
        if m.unsigned_abs() > l {
            return Err(Error::domain(format!("|m| must not exceed l, got l={l}, m={m}")));
        }
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::domain(format!("Z must be positive, got {z}")));
        }
        Ok(Self { n, l, m, z })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// `E_n = −Z²/(2n²)` in hartree.
    pub fn energy(&self) -> f64 {
        -self.z * self.z / (2.0 * (self.n as f64).powi(2))
    }

    /// Number of radial nodes `n − l − 1`.
    pub fn radial_nodes(&self) -> u32 {
        self.n - self.l - 1
    }

    /// Number of polar nodes `l − |m|`.
    pub fn polar_nodes(&self) -> u32 {
        self.l - self.m.unsigned_abs()
    }

    pub fn is_circular(&self) -> bool {
        self.l + 1 == self.n && self.polar_nodes() == 0
    }
}

/// The six integrals whose combination gives `C_FR` of a hydrogenic state.
///
/// Radial pieces are `∫R^{2λ−3}R'² r² dr`, `∫R^{2λ−1} dr`, `∫R^λ r² dr`;
/// angular pieces are `∫Θ^{2λ−1} dΩ`, `∫Θ^{2λ−3}Θ'² dΩ`, `∫Θ^λ dΩ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HydrogenicPieces {
    pub i1a_rad: f64,
    pub i1b_rad: f64,
    pub i2_rad: f64,
    pub i1a_ang: f64,
    pub i1b_ang: f64,
    pub i2_ang: f64,
}

impl HydrogenicPieces {
    /// `∫ρ^{2λ−3}|∇ρ|²`.
    pub fn gradient_integral(&self) -> f64 {
        self.i1a_rad * self.i1a_ang + self.i1b_rad * self.i1b_ang
    }

    /// `∫ρ^λ`.
    pub fn power_integral(&self) -> f64 {
        self.i2_rad * self.i2_ang
    }

    pub fn parts(&self, lambda: f64) -> AnalyticParts {
        let mu = 2.0 + 3.0 * (lambda - 1.0);
        let w = self.power_integral();
        AnalyticParts {
            fisher_lambda: self.gradient_integral() / w,
            renyi_power: w.powf(mu / 3.0 / (1.0 - lambda)),
        }
    }

    pub fn cfr(&self, lambda: &LambdaParam) -> f64 {
        let p = self.parts(lambda.value());
        p.fisher_lambda * p.renyi_power / crate::complexity::normalization_d(lambda)
    }

    pub(crate) fn report(&self, lambda: LambdaParam, method: Method, errs: (f64, f64)) -> ComplexityReport {
        let p = self.parts(lambda.value());
        let fv = |value, err_estimate| FunctionalValue {
            value,
            err_estimate,
            method,
        };
        ComplexityReport::from_parts(lambda, fv(p.fisher_lambda, errs.0), fv(p.renyi_power, errs.1), method)
    }
}

/// Normalized hydrogenic probability density.
#[derive(Debug, Clone, PartialEq)]
pub struct HydrogenicDensity {
    qn: QuantumNumbers,
    laguerre: OrthonormalLaguerre,
    /// zeros of the Laguerre factor in `r̃ = 2Zr/n`
    roots: Vec<f64>,
    angular: AngularDensity,
    /// `4Z³/n⁴ · norm²`
    radial_scale: f64,
    /// leading factor `(−1)^k/k!` of the Laguerre product form
    lead: f64,
}

impl HydrogenicDensity {
    pub fn new(qn: QuantumNumbers) -> Self {
        let k = qn.radial_nodes() as i64;
        let alpha = 2.0 * qn.l as f64 + 1.0;
        let laguerre = OrthonormalLaguerre::new(k, alpha).expect("alpha > -1");
        let roots = laguerre.zeros();
        let angular = AngularDensity::new(qn.l, qn.m).expect("validated quantum numbers");
        let norm = laguerre.norm();
        let nf = qn.n as f64;
        let radial_scale = 4.0 * qn.z.powi(3) / nf.powi(4) * norm * norm;
        let mut lead = 1.0;
        for i in 1..=k {
            lead /= -(i as f64);
        }
        Self {
            qn,
            laguerre,
            roots,
            angular,
            radial_scale,
            lead,
        }
    }

    pub fn quantum_numbers(&self) -> &QuantumNumbers {
        &self.qn
    }

    pub fn angular(&self) -> &AngularDensity {
        &self.angular
    }

    /// `dr̃/dr = 2Z/n`.
    fn stretch(&self) -> f64 {
        2.0 * self.qn.z / self.qn.n as f64
    }

    /// Radial nodes in `r`.
    pub fn radial_node_radii(&self) -> Vec<f64> {
        self.roots.iter().map(|x| x / self.stretch()).collect()
    }

    /// Raw Laguerre value from its product form, exact in the offset near a root.
    fn laguerre_product(&self, x: f64, anchor_x: Option<(usize, f64)>) -> f64 {
        let mut acc = self.lead;
        for (i, &root) in self.roots.iter().enumerate() {
            acc *= match anchor_x {
                Some((j, dx)) if j == i => dx,
                _ => x - root,
            };
        }
        acc
    }

    /// `R(r)` and `dR/dr` at a sample point on the radial axis.
    fn radial_eval(&self, p: Abscissa) -> (f64, f64) {
        let s = self.stretch();
        let x = s * p.x;
        if x < 0.0 {
            return (0.0, 0.0);
        }
        let anchor = if p.offset != 0.0 {
            let ax = s * p.anchor;
            self.roots
                .iter()
                .position(|&root| (root - ax).abs() <= ANCHOR_TOL * root.max(1.0))
                .map(|j| (j, s * p.offset))
        } else {
            None
        };
        let l = self.qn.l as i32;
        let lag = self.laguerre_product(x, anchor);
        let k = self.laguerre.degree();
        let dlag = -laguerre(k - 1, self.laguerre.alpha() + 1.0, x);
        let e = (-x).exp();
        let value = self.radial_scale * x.powi(2 * l) * e * lag * lag;
        // d/dx [x^{2l} e^{−x} L²] = x^{2l−1} e^{−x} L [(2l − x) L + 2x L']
        let dx = if l == 0 {
            e * lag * (-lag + 2.0 * dlag)
        } else {
            x.powi(2 * l - 1) * e * lag * ((2.0 * l as f64 - x) * lag + 2.0 * x * dlag)
        };
        (value, self.radial_scale * s * dx)
    }

    pub(crate) fn radial_profile(&self) -> Profile<'_> {
        let nf = self.qn.n as f64;
        let domain = Domain::new(0.0, f64::INFINITY)
            .with_breakpoints(self.radial_node_radii())
            .with_tail_scale(nf * nf / self.qn.z);
        Profile::new(Box::new(move |p| self.radial_eval(p)), domain)
    }

    pub(crate) fn polar_profile(&self) -> Profile<'_> {
        let domain = Domain::new(0.0, std::f64::consts::PI).with_breakpoints(self.angular.nodes().to_vec());
        Profile::new(
            Box::new(move |p: Abscissa| self.angular.eval_anchored(p.x, p.anchor, p.offset)),
            domain,
        )
    }

    /// Closed-form pieces when one of the closed forms applies.
    pub fn closed_pieces(&self, lambda: f64) -> Result<HydrogenicPieces> {
        if lambda == 1.0 {
            return Err(Error::unsupported("closed forms are defined for lambda != 1"));
        }
        let qn = &self.qn;
        if qn.is_circular() {
            return circular_pieces(qn.n, lambda, qn.z);
        }
        if qn.l == 0 {
            let lam = LambdaParam::new(lambda, 3)?;
            let r = radial_integrals_general(qn, &lam)?;
            let (i1a_ang, i1b_ang, i2_ang) = closed::s_angular(lambda);
            return Ok(HydrogenicPieces {
                i1a_rad: r.i1a,
                i1b_rad: r.i1b,
                i2_rad: r.i2,
                i1a_ang,
                i1b_ang,
                i2_ang,
            });
        }
        Err(Error::unsupported(format!(
            "no closed form for (n, l, m) = ({}, {}, {})",
            qn.n, qn.l, qn.m
        )))
    }
}

impl Density for HydrogenicDensity {
    fn dim(&self) -> usize {
        3
    }

    fn value(&self, x: &[f64]) -> f64 {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let theta = if r == 0.0 { 0.0 } else { (x[2] / r).clamp(-1.0, 1.0).acos() };
        self.radial_eval(Abscissa::plain(r)).0 * self.angular.eval_anchored(theta, theta, 0.0).0
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if r == 0.0 {
            return vec![0.0; 3];
        }
        let theta = (x[2] / r).clamp(-1.0, 1.0).acos();
        let phi = x[1].atan2(x[0]);
        let (rv, rd) = self.radial_eval(Abscissa::plain(r));
        let (tv, td) = self.angular.eval_anchored(theta, theta, 0.0);
        let g_r = rd * tv;
        let g_t = rv * td / r;
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        vec![
            g_r * st * cp + g_t * ct * cp,
            g_r * st * sp + g_t * ct * sp,
            g_r * ct - g_t * st,
        ]
    }

    fn support(&self) -> Support {
        Support::Whole
    }

    fn layout(&self) -> Layout<'_> {
        Layout::Separable {
            radial: self.radial_profile(),
            polar: self.polar_profile(),
        }
    }

    fn analytic(&self, lambda: f64) -> Option<Result<AnalyticParts>> {
        match self.closed_pieces(lambda) {
            Err(Error::Unsupported(_)) => None,
            other => Some(other.map(|p| p.parts(lambda))),
        }
    }

    /// Near a simple node `ρ^{2λ−3}|∇ρ|²` behaves like `t^{4λ−4}`.
    fn check_integrable(&self, lambda: f64) -> Result<()> {
        let nodal = self.qn.radial_nodes() > 0 || self.qn.polar_nodes() > 0;
        if nodal && lambda <= 0.75 {
            let radii = self.radial_node_radii();
            let (lo, hi) = if radii.is_empty() {
                (self.angular.nodes()[0], *self.angular.nodes().last().unwrap())
            } else {
                (radii[0], radii[radii.len() - 1])
            };
            return Err(Error::Divergent {
                quantity: "integral of rho^(2 lambda - 3) |grad rho|^2".into(),
                lo,
                hi,
                reason: format!(
                    "the integrand behaves like t^(4 lambda - 4) near a node of the ({}, {}, {}) state, \
                     which is not integrable for lambda = {lambda} <= 3/4",
                    self.qn.n, self.qn.l, self.qn.m
                ),
            });
        }
        Ok(())
    }
}
