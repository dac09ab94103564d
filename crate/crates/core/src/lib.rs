//! One-parameter Fisher–Rényi complexity.
//!
//! The complexity of a `d`-dimensional probability density `ρ` is
//!
//! ```text
//! C_FR^(λ)[ρ] = D_λ⁻¹ · F̃_λ[ρ] · N_λ[ρ],   λ > max{(d−1)/d, d/(d+2)}
//! ```
//!
//! where `F̃_λ` is the λ-weighted Fisher information, `N_λ` the λ-Rényi entropy
//! power and `D_λ` the constant that makes the generalized Gaussians the
//! minimizers with `C_FR = 1`.
//!
//! Modules:
//!
//! | module | contents |
//! |--------|----------|
//! | [`specfun`] | log-Gamma, Pochhammer, binomials, Laguerre/Gegenbauer, `Θ_{l,m}` |
//! | [`quadrature`] | adaptive Gauss–Kronrod on finite and infinite domains |
//! | [`densities`] | the [`Density`] trait and the density constructors |
//! | [`functionals`] | Rényi/Shannon entropies, entropy power, Fisher-type informations |
//! | [`complexity`] | `D_λ`, `C_FR`, Cramér–Rao and Fisher–Shannon complexities |
//! | [`hydrogenic`] | hydrogenic densities, closed forms and the quadrature pipeline |
//! | [`verify`] | machine checks of the analytic properties |

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod complexity;
pub mod densities;
pub mod error;
pub mod functionals;
pub mod hydrogenic;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use complexity::{
    cfr_complexity, cramer_rao, fisher_shannon, normalization_d, ComplexityReport, Method,
    MethodChoice,
};
pub use densities::{Density, GeneralizedGaussian, Layout, Support};
pub use error::{Error, Result};
pub use functionals::{FunctionalValue, LambdaParam};
pub use hydrogenic::{HydrogenicDensity, QuantumNumbers};
pub use quadrature::QuadratureSpec;
