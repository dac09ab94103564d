use crate::error::{Error, Result};
use crate::specfun::{binomial_general, pochhammer};

/// Arguments of the terminating linearization sum
///
/// ```text
/// Φ₀ = (β+1)_μ ∏ C(m_i+α_i, m_i) · Σ_{j} (β+μ+1)_J ∏ (−m_i)_{j_i} t_i^{j_i} / ((α_i+1)_{j_i} j_i!)
/// ```
///
/// with `J = Σ j_i` and each `j_i` running over `0..=m_i`. A degree of −1
/// stands for an absent polynomial and makes the whole value 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Phi0Request {
    pub mu: u32,
    pub beta: u32,
    pub degrees: Vec<i64>,
    pub alphas: Vec<f64>,
    pub scales: Vec<f64>,
}

impl Phi0Request {
    pub fn new(mu: u32, beta: u32, degrees: Vec<i64>, alphas: Vec<f64>, scales: Vec<f64>) -> Result<Self> {
        let r = degrees.len();
        if r == 0 {
            return Err(Error::domain("at least one polynomial factor is required"));
        }
        if alphas.len() != r || scales.len() != r {
            return Err(Error::domain(format!(
                "degree, parameter and scale lists must have equal length ({}, {}, {})",
                r,
                alphas.len(),
                scales.len()
            )));
        }
        if let Some(m) = degrees.iter().find(|&&m| m < -1) {
            return Err(Error::domain(format!("polynomial degrees must be at least -1, got {m}")));
        }
        if alphas.iter().chain(&scales).any(|v| !v.is_finite()) {
            return Err(Error::domain("parameters and scales must be finite"));
        }
        Ok(Self {
            mu,
            beta,
            degrees,
            alphas,
            scales,
        })
    }

    /// `r` identical factors.
    pub fn uniform(mu: u32, beta: u32, r: usize, degree: i64, alpha: f64, scale: f64) -> Result<Self> {
        Self::new(mu, beta, vec![degree; r], vec![alpha; r], vec![scale; r])
    }

    /// Replace the last `count` factors by `(degree, alpha)`, keeping their scales.
    pub fn with_tail(mut self, count: usize, degree: i64, alpha: f64) -> Result<Self> {
        let r = self.degrees.len();
        if count > r {
            return Err(Error::domain(format!("cannot replace {count} of {r} factors")));
        }
        for i in r - count..r {
            self.degrees[i] = degree;
            self.alphas[i] = alpha;
        }
        Self::new(self.mu, self.beta, self.degrees, self.alphas, self.scales)
    }

    fn prefactor(&self) -> f64 {
        let mut p = pochhammer(self.beta as f64 + 1.0, self.mu);
        for (&m, &a) in self.degrees.iter().zip(&self.alphas) {
            p *= binomial_general(m as f64 + a, m);
        }
        p
    }

    /// Single-factor coefficients `(−m)_j t^j / ((α+1)_j j!)`, `j = 0..=m`.
    fn factor_series(m: i64, alpha: f64, t: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(m as usize + 1);
        let mut c = 1.0;
        out.push(c);
        for j in 0..m {
            let jf = j as f64;
            c *= (jf - m as f64) * t / ((alpha + 1.0 + jf) * (jf + 1.0));
            out.push(c);
        }
        out
    }
}

/// Evaluate Φ₀ by grouping the lattice by total degree `J`.
///
/// The product of the per-factor series is formed as a polynomial in `J`,
/// so the cost is `O((Σ m_i)²)` instead of `∏(m_i + 1)`.
pub fn phi0(req: &Phi0Request) -> f64 {
    let pre = req.prefactor();
    if pre == 0.0 || req.degrees.iter().any(|&m| m < 0) {
        return 0.0;
    }
    let mut poly = vec![1.0];
    for ((&m, &a), &t) in req.degrees.iter().zip(&req.alphas).zip(&req.scales) {
        let s = Phi0Request::factor_series(m, a, t);
        let mut next = vec![0.0; poly.len() + s.len() - 1];
        for (i, &p) in poly.iter().enumerate() {
            for (j, &q) in s.iter().enumerate() {
                next[i + j] += p * q;
            }
        }
        poly = next;
    }
    let c = (req.beta + req.mu) as f64 + 1.0;
    let mut rising = 1.0;
    let mut total = 0.0;
    for (j, &p) in poly.iter().enumerate() {
        total += rising * p;
        rising *= c + j as f64;
    }
    pre * total
}

/// Evaluate Φ₀ by walking the full multi-index lattice in lexicographic order.
pub fn phi0_lattice(req: &Phi0Request) -> f64 {
    let pre = req.prefactor();
    if pre == 0.0 || req.degrees.iter().any(|&m| m < 0) {
        return 0.0;
    }
    let series: Vec<Vec<f64>> = req
        .degrees
        .iter()
        .zip(&req.alphas)
        .zip(&req.scales)
        .map(|((&m, &a), &t)| Phi0Request::factor_series(m, a, t))
        .collect();
    let c = (req.beta + req.mu) as f64 + 1.0;
    let r = series.len();
    let mut idx = vec![0usize; r];
    let mut total = 0.0;
    loop {
        let big_j: usize = idx.iter().sum();
        let mut term = pochhammer(c, big_j as u32);
        for (s, &j) in series.iter().zip(&idx) {
            term *= s[j];
        }
        total += term;
        // odometer increment
        let mut k = r;
        loop {
            if k == 0 {
                return pre * total;
            }
            k -= 1;
            if idx[k] + 1 < series[k].len() {
                idx[k] += 1;
                break;
            }
            idx[k] = 0;
        }
    }
}
