use std::f64::consts::{LN_2, PI};

use super::phi0::{phi0, Phi0Request};
use super::{HydrogenicPieces, QuantumNumbers};
use crate::complexity::normalization_d;
use crate::error::{Error, Result};
use crate::functionals::LambdaParam;
use crate::specfun::ln_gamma_pos;

/// The three radial integrals `∫R^{2λ−3}R'² r² dr`, `∫R^{2λ−1} dr`, `∫R^λ r² dr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialIntegrals {
    pub i1a: f64,
    pub i1b: f64,
    pub i2: f64,
}

fn require_three_dims(lambda: &LambdaParam) -> Result<()> {
    if lambda.dim() != 3 {
        return Err(Error::domain(format!(
            "hydrogenic closed forms need lambda validated for d = 3, got d = {}",
            lambda.dim()
        )));
    }
    Ok(())
}

fn require_not_one(l: f64) -> Result<()> {
    if l == 1.0 {
        return Err(Error::domain("closed forms are defined for lambda != 1"));
    }
    Ok(())
}

/// `2λ` as an integer when λ > 1 is a half-integer.
fn half_integer_count(l: f64) -> Result<usize> {
    let two = 2.0 * l;
    if !(l > 1.0) || two.fract() != 0.0 || two > 64.0 {
        return Err(Error::unsupported(format!(
            "the Laguerre-product expansion needs lambda > 1 with 2*lambda an integer (at most 64), got {l}"
        )));
    }
    Ok(two as usize)
}

fn check_radial_expansion(radial_degree: u32, l: f64) -> Result<usize> {
    let two = half_integer_count(l)?;
    if two % 2 == 1 && radial_degree > 0 {
        return Err(Error::unsupported(format!(
            "|L|^{{2 lambda}} is not a polynomial for odd 2*lambda when the state has radial nodes (lambda = {l})"
        )));
    }
    Ok(two)
}

fn phi_uniform(mu: f64, r: usize, degree: i64, alpha: f64, t: f64) -> Result<Phi0Request> {
    Phi0Request::uniform(mu.round() as u32, 0, r, degree, alpha, t)
}

/// `G(n, l, λ)`: the six-term Φ₀ combination behind `∫R^{2λ−3}R'² r² dr`.
pub fn radial_g(n: u32, l: u32, lambda: f64) -> Result<f64> {
    let k = n as i64 - l as i64 - 1;
    if k < 0 {
        return Err(Error::domain(format!("need l < n, got n={n}, l={l}")));
    }
    half_integer_count(lambda)?;
    let q = 2.0 * lambda - 1.0;
    let r = (2.0 * q) as usize;
    let a = 2.0 * l as f64 + 1.0;
    let lf = l as f64;
    let mu0 = 2.0 * lf * q;
    let t = 1.0 / q;
    let p = |mu: f64, tail: usize| -> Result<f64> {
        let req = phi_uniform(mu, r, k, a, t)?.with_tail(tail, k - 1, a + 1.0)?;
        Ok(phi0(&req))
    };
    let q2 = q * q;
    Ok(4.0 * lf * lf * p(mu0, 0)? + p(mu0 + 2.0, 0)? / q2 - 4.0 * lf / q * p(mu0 + 1.0, 0)?
        + 4.0 * p(mu0 + 2.0, 2)? / q2
        - 8.0 * lf / q * p(mu0 + 1.0, 1)?
        + 4.0 * p(mu0 + 2.0, 1)? / q2)
}

/// Closed-form radial integrals through the Laguerre-product expansion.
///
/// Requires λ > 1 with 2λ an integer; for odd 2λ the state must have no
/// radial nodes. Other cases return [`Error::Unsupported`].
pub fn radial_integrals_general(qn: &QuantumNumbers, lambda: &LambdaParam) -> Result<RadialIntegrals> {
    let lam = lambda.value();
    let (n, l, z) = (qn.n(), qn.l(), qn.z());
    let k = (n - l - 1) as i64;
    half_integer_count(lam)?;
    let q = 2.0 * lam - 1.0;
    let r = (2.0 * q) as usize;
    let a = 2.0 * l as f64 + 1.0;
    let (nf, lf) = (n as f64, l as f64);
    let ln_gratio = ln_gamma_pos(nf - lf) - ln_gamma_pos(nf + lf + 1.0);
    let ln_base = (4.0 * lam - 3.0) * LN_2 + (6.0 * lam - 4.0) * z.ln() - (8.0 * lam - 5.0) * nf.ln()
        + q * ln_gratio
        - (2.0 * lf * q + 1.0) * q.ln();
    let base = ln_base.exp();
    let g = radial_g(n, l, lam)?;
    let i1b = base * phi0(&phi_uniform(2.0 * lf * q, r, k, a, 1.0 / q)?);

    let two_lambda = check_radial_expansion(k as u32, lam)?;
    let ln_pre2 = (2.0 * lam - 3.0) * LN_2 + 3.0 * (lam - 1.0) * z.ln() - (4.0 * lam - 3.0) * nf.ln()
        + lam * ln_gratio
        - (2.0 * lf * lam + 3.0) * lam.ln();
    let phi2 = phi0(&phi_uniform(2.0 * (lf * lam + 1.0), two_lambda, k, a, 1.0 / lam)?);
    Ok(RadialIntegrals {
        i1a: base * g,
        i1b,
        i2: ln_pre2.exp() * phi2,
    })
}

/// `C_FR` of the ground state: `D_λ⁻¹ · 4π^{2/3} · λ^{2/(λ−1)+6} · (2λ−1)^{−3}`.
pub fn cfr_ground_closed(lambda: &LambdaParam) -> Result<f64> {
    require_three_dims(lambda)?;
    let l = lambda.value();
    require_not_one(l)?;
    let ln_c = 4f64.ln() + 2.0 / 3.0 * PI.ln() + (2.0 / (l - 1.0) + 6.0) * l.ln()
        - 3.0 * (2.0 * l - 1.0).ln();
    Ok(ln_c.exp() / normalization_d(lambda))
}

/// `C_FR` of the `ns` states from the Laguerre-product expansion.
///
/// Needs λ > 1 with 2λ an integer, and λ an integer when `n > 1`.
pub fn cfr_ns_closed(n: u32, lambda: &LambdaParam) -> Result<f64> {
    require_three_dims(lambda)?;
    if n == 0 {
        return Err(Error::domain("principal quantum number must be at least 1"));
    }
    let l = lambda.value();
    let two_lambda = check_radial_expansion(n - 1, l)?;
    let nf = n as f64;
    let phi = phi0(&Phi0Request::uniform(2, 0, two_lambda, n as i64 - 1, 1.0, 1.0 / l)?);
    let g = radial_g(n, 0, l)?;
    let ex = 2.0 * (1.0 / (3.0 * (1.0 - l)) - 1.0);
    let ln_c = (3.0 + 2.0 / (3.0 * (l - 1.0))) * LN_2
        + 2.0 / 3.0 * PI.ln()
        + 2.0 / 3.0 * (2.0 / (l - 1.0) + 5.0) * nf.ln()
        + (2.0 / (l - 1.0) + 6.0) * l.ln()
        - (2.0 * l - 1.0).ln()
        + ex * phi.ln()
        + g.ln();
    Ok(ln_c.exp() / normalization_d(lambda))
}

fn check_circular(n: u32, l: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("principal quantum number must be at least 1"));
    }
    require_not_one(l)?;
    if !(l > 0.5) || !l.is_finite() {
        return Err(Error::domain(format!("circular closed form needs lambda > 1/2, got {l}")));
    }
    if n >= 2 {
        let m = (n - 1) as f64;
        let nf = n as f64;
        let checks = [
            (3.0 - 2.0 * nf + 4.0 * l * m, "3 - 2n + 4 lambda (n-1) > 0"),
            (2.0 - nf + 2.0 * l * m, "2 - n + 2 lambda (n-1) > 0"),
            ((2.0 * l - 1.0) * m, "(2 lambda - 1)(n-1) > 0"),
        ];
        for (v, what) in checks {
            if !(v > 0.0) {
                return Err(Error::domain(format!("circular closed form needs {what} (n={n}, lambda={l})")));
            }
        }
    }
    Ok(())
}

/// `C_FR` of the circular state `l = |m| = n − 1`, evaluated in log-Gamma space.
pub fn cfr_circular_closed(n: u32, lambda: &LambdaParam) -> Result<f64> {
    require_three_dims(lambda)?;
    let l = lambda.value();
    check_circular(n, l)?;
    let nf = n as f64;
    let m = nf - 1.0;
    let lg = ln_gamma_pos;
    let ln_c = LN_2 * (19.0 / 3.0 - 4.0 * l + 2.0 / (3.0 * (l - 1.0)) + nf * (4.0 * l - 2.0))
        + 0.5 * PI.ln()
        - (2.0 / (3.0 * (1.0 - l)) - 5.0 / 3.0) * nf.ln()
        + 2.0 * (3.0 * l - 2.0) * (2.0 * l * m + 3.0) / (3.0 * (l - 1.0)) * l.ln()
        + (4.0 * l * (1.0 - nf) + 2.0 * nf - 5.0) * (2.0 * l - 1.0).ln()
        + (2.0 / (3.0 * (l - 1.0)) + 5.0 / 3.0) * (lg(nf) + lg(2.0 * nf))
        + 2.0 * lg(2.0 - nf + 2.0 * l * m)
        - (3.0 - 5.0 * l) / (3.0 * (1.0 - l)) * lg(nf + 0.5)
        + 2.0 * (1.0 / (3.0 * (l - 1.0)) + 1.0)
            * (lg(1.5 + l * m) - lg(1.0 + l * m) - lg(3.0 + 2.0 * l * m));
    Ok(ln_c.exp() / normalization_d(lambda))
}

/// The six radial and angular pieces of a circular state in closed form.
pub fn circular_pieces(n: u32, lambda: f64, z: f64) -> Result<HydrogenicPieces> {
    check_circular(n, lambda)?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain(format!("nuclear charge must be positive, got {z}")));
    }
    let l = lambda;
    let nf = n as f64;
    let m = nf - 1.0;
    let lg = ln_gamma_pos;
    let ln_pi = PI.ln();
    let ln_z = z.ln();
    let ln_n = nf.ln();
    let ln_q = (2.0 * l - 1.0).ln();
    let g_rad = lg(3.0 - 2.0 * nf + 4.0 * l * m) - (2.0 * l - 1.0) * lg(2.0 * nf);
    let i1a_rad = (2.0 * (2.0 * l - 1.0) * LN_2 + 2.0 * (3.0 * l - 2.0) * ln_z - (8.0 * l - 5.0) * ln_n
        + (2.0 * l * m - nf + 2.0).ln()
        + (4.0 * l * (1.0 - nf) + 2.0 * nf - 5.0) * ln_q
        + g_rad)
        .exp();
    let i1b_rad = ((4.0 * l - 3.0) * LN_2 + 2.0 * (3.0 * l - 2.0) * ln_z - (8.0 * l - 5.0) * ln_n
        + (4.0 * l * (1.0 - nf) + 2.0 * nf - 3.0) * ln_q
        + g_rad)
        .exp();
    let i2_rad = ((2.0 * l - 3.0) * LN_2 + 3.0 * (l - 1.0) * ln_z - (4.0 * l - 3.0) * ln_n
        + (-2.0 * l * m - 3.0) * l.ln()
        + lg(2.0 * m * l + 3.0)
        - l * lg(2.0 * nf))
        .exp();
    let ln_ang = lg(nf + 0.5) - lg(nf);
    let i1a_ang = (2.0 * (1.0 - l) * LN_2 + 3.0 * (1.0 - l) * ln_pi + (2.0 * l - 1.0) * ln_ang
        + lg(2.0 - nf + 2.0 * l * m)
        - lg(2.5 - nf + 2.0 * l * m))
        .exp();
    let i1b_ang = if n == 1 {
        0.0
    } else {
        ((3.0 - 2.0 * l) * LN_2 + 3.0 * (1.0 - l) * ln_pi + 2.0 * m.ln() + (2.0 * l - 1.0) * ln_ang
            + lg((2.0 * l - 1.0) * m)
            - lg(2.0 * l * m - nf + 2.5))
            .exp()
    };
    let i2_ang = ((1.0 - l) * LN_2 + 1.5 * (1.0 - l) * ln_pi + l * ln_ang + lg(1.0 + l * m)
        - lg(1.5 + l * m))
        .exp();
    Ok(HydrogenicPieces {
        i1a_rad,
        i1b_rad,
        i2_rad,
        i1a_ang,
        i1b_ang,
        i2_ang,
    })
}

/// Angular pieces of an `s` state, where `Θ = 1/(4π)`.
pub(crate) fn s_angular(lambda: f64) -> (f64, f64, f64) {
    let four_pi = 4.0 * PI;
    (four_pi.powf(2.0 - 2.0 * lambda), 0.0, four_pi.powf(1.0 - lambda))
}
