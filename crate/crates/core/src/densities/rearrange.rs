use std::io::{self, Write};

use super::{Density, Layout, Profile, Support};
use crate::error::{Error, Result};
use crate::quadrature::{Abscissa, Domain};

/// Symmetric decreasing rearrangement `ρ*` stored as a monotone cubic Hermite
/// interpolant over `[0, L/2]`, centred at the origin.
///
/// Knots are a uniform grid plus the radii of the critical levels of `ρ`
/// (its interior local extrema), where `ρ*` has a corner; each knot carries
/// separate left and right slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct RearrangedDensity {
    half_width: f64,
    knots: Vec<f64>,
    values: Vec<f64>,
    /// slope on the cell ending at each knot
    left: Vec<f64>,
    /// slope on the cell starting at each knot
    right: Vec<f64>,
}

/// A maximal interval on which the source density is monotone.
#[derive(Debug, Clone, Copy)]
struct Branch {
    p: f64,
    q: f64,
    vp: f64,
    vq: f64,
}

struct Source<'a> {
    profile: Profile<'a>,
    branches: Vec<Branch>,
}

impl Source<'_> {
    fn eval(&self, x: f64) -> (f64, f64) {
        let (v, d) = self.profile.at(x);
        (v.max(0.0), d)
    }

    /// Point of `branch` where the density crosses level `t`, assuming `t`
    /// lies strictly between the end values.
    fn crossing(&self, b: &Branch, t: f64) -> f64 {
        let increasing = b.vq > b.vp;
        // keep ρ(lo) on the "low" side of t and ρ(hi) on the other
        let (mut lo, mut hi) = (b.p, b.q);
        let mut x = if increasing {
            b.p + (t - b.vp) / (b.vq - b.vp) * (b.q - b.p)
        } else {
            b.p + (b.vp - t) / (b.vp - b.vq) * (b.q - b.p)
        };
        for _ in 0..100 {
            let (v, d) = self.eval(x);
            let below = v < t;
            if below == increasing {
                lo = x;
            } else {
                hi = x;
            }
            if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1e-300) {
                break;
            }
            if v == t {
                return x;
            }
            let newton = x - (v - t) / d;
            if d != 0.0 && newton > lo && newton < hi {
                if (newton - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
                    return newton;
                }
                x = newton;
            } else {
                x = 0.5 * (lo + hi);
            }
        }
        x
    }

    /// Measure of `{ρ > t}` and `Σ 1/|ρ'|` over the crossings.
    fn distribution(&self, t: f64) -> (f64, f64) {
        let mut measure = 0.0;
        let mut inv_slope = 0.0;
        for b in &self.branches {
            let (top, bottom) = (b.vp.max(b.vq), b.vp.min(b.vq));
            if t >= top {
                continue;
            }
            if t < bottom {
                measure += b.q - b.p;
                continue;
            }
            let x = self.crossing(b, t);
            measure += if b.vq > b.vp { b.q - x } else { x - b.p };
            let d = self.eval(x).1.abs();
            inv_slope += if d > 0.0 { 1.0 / d } else { f64::INFINITY };
        }
        (measure, inv_slope)
    }
}

fn monotone_branches(profile: &Profile<'_>, samples: usize) -> Vec<Branch> {
    let d = &profile.domain;
    let mut knots = vec![d.lo];
    knots.extend_from_slice(&d.breakpoints);
    knots.push(d.hi);
    let per = (samples / (knots.len() - 1)).max(64);
    let deriv = |x: f64| profile.at(x).1;
    let mut cuts = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        cuts.push(a);
        let xs: Vec<f64> = (1..per).map(|i| a + (b - a) * i as f64 / per as f64).collect();
        for pair in xs.windows(2) {
            let (x0, x1) = (pair[0], pair[1]);
            let (d0, d1) = (deriv(x0), deriv(x1));
            if d0 == 0.0 {
                cuts.push(x0);
            } else if d0.signum() != d1.signum() && d1 != 0.0 {
                let (mut lo, mut hi, mut dlo) = (x0, x1, d0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if !(mid > lo && mid < hi) {
                        break;
                    }
                    let dm = deriv(mid);
                    if dm.signum() == dlo.signum() && dm != 0.0 {
                        lo = mid;
                        dlo = dm;
                    } else {
                        hi = mid;
                    }
                }
                cuts.push(0.5 * (lo + hi));
            }
        }
    }
    cuts.push(d.hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut branches: Vec<Branch> = Vec::new();
    for w in cuts.windows(2).filter(|w| w[1] > w[0]) {
        let b = Branch {
            p: w[0],
            q: w[1],
            vp: profile.at(w[0]).0.max(0.0),
            vq: profile.at(w[1]).0.max(0.0),
        };
        // runs of zero-density cells collapse into one branch
        match branches.last_mut() {
            Some(last) if last.vp == 0.0 && last.vq == 0.0 && b.vp == 0.0 && b.vq == 0.0 => last.q = b.q,
            _ => branches.push(b),
        }
    }
    branches
}

/// `−2 / Σ 1/|ρ'(x_i)|`, the slope of `ρ*` at a level with the given crossings.
fn rearranged_slope(inv_slope: f64) -> f64 {
    if inv_slope.is_infinite() {
        0.0
    } else if inv_slope > 0.0 {
        -2.0 / inv_slope
    } else {
        0.0
    }
}

/// Symmetric decreasing rearrangement of a compactly supported 1D density.
///
/// `grid_size` is the number of grid cells on the half line; the level at
/// each grid node solves `|{ρ > t}| = 2s` and the slope there is
/// `−2/Σ 1/|ρ'(x_i)|` over the crossing points.
pub fn rearrange_decreasing_1d<D: Density>(rho: &D, grid_size: usize) -> Result<RearrangedDensity> {
    if rho.dim() != 1 {
        return Err(Error::domain("rearrangement is implemented for one-dimensional densities"));
    }
    if !rho.support().is_bounded() {
        return Err(Error::domain("rearrangement requires a bounded support"));
    }
    if grid_size < 16 {
        return Err(Error::domain("grid_size must be at least 16"));
    }
    let profile = rho.layout().into_line()?;
    let branches = monotone_branches(&profile, 8 * grid_size.max(512));
    let src = Source { profile, branches };

    let peak = src
        .branches
        .iter()
        .map(|b| b.vp.max(b.vq))
        .fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::domain("density vanishes identically"));
    }
    // the smallest positive level measures {ρ > 0} without counting rounding residue
    let floor = f64::MIN_POSITIVE;
    let (total, inv_edge) = src.distribution(floor);
    let half_width = 0.5 * total;
    let step = half_width / grid_size as f64;

    // levels of interior extrema, where the crossing count changes
    let mut critical: Vec<f64> = src
        .branches
        .iter()
        .flat_map(|b| [b.vp, b.vq])
        .filter(|&v| v > CRITICAL_FLOOR * peak && v < peak * (1.0 - CRITICAL_FLOOR))
        .collect();
    critical.sort_by(|a, b| b.total_cmp(a));
    critical.dedup_by(|a, b| (*a - *b).abs() <= CRITICAL_FLOOR * peak);

    let mut nodes: Vec<Node> = (0..=grid_size)
        .map(|j| Node::Grid(if j == grid_size { half_width } else { j as f64 * step }))
        .collect();
    for &t in &critical {
        let s = 0.5 * src.distribution(t).0;
        if s > 0.0 && s < half_width {
            nodes.push(Node::Critical(s, t));
        }
    }
    nodes.sort_by(|a, b| a.radius().total_cmp(&b.radius()));
    // a critical knot replaces grid knots that crowd it
    let min_gap = 1e-3 * step;
    let mut merged: Vec<Node> = Vec::with_capacity(nodes.len());
    for node in nodes {
        match merged.last() {
            Some(last) if node.radius() - last.radius() < min_gap => {
                let last_is_end = matches!(last, Node::Grid(r) if *r == 0.0);
                let node_is_end = matches!(node, Node::Grid(r) if r == half_width);
                if node_is_end || (matches!(node, Node::Critical(..)) && !last_is_end) {
                    merged.pop();
                    merged.push(node);
                }
            }
            _ => merged.push(node),
        }
    }

    let count = merged.len();
    let mut knots = Vec::with_capacity(count);
    let mut values = vec![0.0; count];
    let mut left = vec![0.0; count];
    let mut right = vec![0.0; count];
    values[0] = peak;
    right[0] = rearranged_slope(src.distribution(peak * (1.0 - 1e-14)).1);
    knots.push(0.0);
    let mut upper = peak;
    for (j, node) in merged.iter().enumerate().skip(1) {
        let s = node.radius();
        knots.push(s);
        if j == count - 1 {
            left[j] = rearranged_slope(inv_edge);
            break;
        }
        match *node {
            Node::Critical(_, t) => {
                values[j] = t;
                left[j] = rearranged_slope(src.distribution(t * (1.0 + CRITICAL_SIDE)).1);
                right[j] = rearranged_slope(src.distribution(t * (1.0 - CRITICAL_SIDE)).1);
            }
            Node::Grid(_) => {
                let h = s - knots[j - 1];
                let (t, inv) = solve_level(&src, 2.0 * s, upper, (upper + right[j - 1] * h).clamp(0.0, upper));
                values[j] = t;
                left[j] = rearranged_slope(inv);
                right[j] = left[j];
            }
        }
        upper = values[j];
    }

    limit_monotone(&knots, &values, &mut left, &mut right);
    let mut out = RearrangedDensity {
        half_width,
        knots,
        values,
        left,
        right,
    };
    let mass = out.hermite_mass();
    for v in out
        .values
        .iter_mut()
        .chain(out.left.iter_mut())
        .chain(out.right.iter_mut())
    {
        *v /= mass;
    }
    Ok(out)
}

/// Critical levels closer than this (relative to the peak) are merged.
const CRITICAL_FLOOR: f64 = 1e-12;
/// Relative level offset used for one-sided slopes at a critical level.
const CRITICAL_SIDE: f64 = 1e-13;

#[derive(Debug, Clone, Copy)]
enum Node {
    Grid(f64),
    /// radius and level of a critical level
    Critical(f64, f64),
}

impl Node {
    fn radius(&self) -> f64 {
        match *self {
            Node::Grid(s) | Node::Critical(s, _) => s,
        }
    }
}

/// Level `t ∈ (0, upper)` with `|{ρ > t}| = target`, and `Σ 1/|ρ'|` there.
fn solve_level(src: &Source<'_>, target: f64, upper: f64, guess: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (0.0, upper);
    let mut t = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    let mut inv = 0.0;
    for _ in 0..200 {
        let (m, s) = src.distribution(t);
        inv = s;
        if m > target {
            lo = t;
        } else {
            hi = t;
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi || m == target {
            break;
        }
        // μ decreases in t with μ' = −Σ 1/|ρ'|
        let newton = if s.is_finite() && s > 0.0 { t + (m - target) / s } else { f64::NAN };
        if newton > lo && newton < hi {
            let done = (newton - t).abs() <= 4.0 * f64::EPSILON * t;
            t = newton;
            if done {
                inv = src.distribution(t).1;
                break;
            }
        } else {
            t = 0.5 * (lo + hi);
        }
    }
    (t, inv)
}

/// Fritsch–Carlson limiter applied cell by cell to a non-increasing sequence.
fn limit_monotone(knots: &[f64], values: &[f64], left: &mut [f64], right: &mut [f64]) {
    for j in 0..values.len() - 1 {
        let delta = (values[j + 1] - values[j]) / (knots[j + 1] - knots[j]);
        if delta == 0.0 {
            right[j] = 0.0;
            left[j + 1] = 0.0;
            continue;
        }
        let a = (right[j] / delta).max(0.0);
        let b = (left[j + 1] / delta).max(0.0);
        let r = a.hypot(b);
        let shrink = if r > 3.0 { 3.0 / r } else { 1.0 };
        right[j] = shrink * a * delta;
        left[j + 1] = shrink * b * delta;
    }
}

impl RearrangedDensity {
    /// Half the length of the support.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Number of interpolation cells on the half line.
    pub fn grid_size(&self) -> usize {
        self.values.len() - 1
    }

    /// Knots `s_j` on the half line with `ρ*(s_j)`.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.knots.iter().copied().zip(self.values.iter().copied())
    }

    fn hermite_mass(&self) -> f64 {
        let half: f64 = (0..self.grid_size())
            .map(|j| {
                let h = self.knots[j + 1] - self.knots[j];
                0.5 * h * (self.values[j] + self.values[j + 1]) + h * h * (self.right[j] - self.left[j + 1]) / 12.0
            })
            .sum();
        2.0 * half
    }

    /// Profile value and derivative at distance `s ≥ 0` from the centre.
    fn radial(&self, s: f64) -> (f64, f64) {
        if s >= self.half_width {
            return (0.0, 0.0);
        }
        let j = self.knots.partition_point(|&k| k <= s).clamp(1, self.grid_size()) - 1;
        let h = self.knots[j + 1] - self.knots[j];
        let t = (s - self.knots[j]) / h;
        let (v0, v1) = (self.values[j], self.values[j + 1]);
        let (d0, d1) = (self.right[j] * h, self.left[j + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * v0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * v1
            + (t3 - t2) * d1;
        let dv = (6.0 * t2 - 6.0 * t) * v0
            + (3.0 * t2 - 4.0 * t + 1.0) * d0
            + (-6.0 * t2 + 6.0 * t) * v1
            + (3.0 * t2 - 2.0 * t) * d1;
        (v.max(0.0), dv / h)
    }

    fn eval(&self, x: f64) -> (f64, f64) {
        let (v, d) = self.radial(x.abs());
        (v, if x < 0.0 { -d } else { d })
    }

    /// Write the grid as `x,rho` CSV rows over the whole support.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,rho")?;
        let nodes: Vec<(f64, f64)> = self.nodes().collect();
        for &(s, v) in nodes.iter().rev() {
            if s > 0.0 {
                writeln!(out, "{:.12e},{:.12e}", -s, v)?;
            }
        }
        for &(s, v) in &nodes {
            writeln!(out, "{:.12e},{:.12e}", s, v)?;
        }
        Ok(())
    }
}

impl Density for RearrangedDensity {
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
            lo: -self.half_width,
            hi: self.half_width,
        }
    }

    fn layout(&self) -> Layout<'_> {
        let knots = self.knots.iter().flat_map(|&s| [-s, s]).collect();
        let domain = Domain::new(-self.half_width, self.half_width).with_breakpoints(knots);
        Layout::Line(Profile::new(Box::new(move |p: Abscissa| self.eval(p.x)), domain))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::{BetaDensity, Bump, SineBumps};
    use crate::quadrature::{integrate_domain, QuadratureSpec};

    fn power_integral<D: Density>(rho: &D, p: f64) -> f64 {
        let profile = rho.layout().into_line().unwrap();
        let f = |a: Abscissa| (profile.eval)(a).0.max(0.0).powf(p);
        integrate_domain(&f, &profile.domain, &QuadratureSpec::default()).unwrap().value
    }

    #[test]
    fn symmetric_bump_is_its_own_rearrangement() {
        let rho = SineBumps::truncated_cosine(0.0, 2.0).unwrap();
        let star = rearrange_decreasing_1d(&rho, 256).unwrap();
        assert!((star.half_width() - 1.0).abs() < 1e-12);
        for &x in &[0.0, 0.3, -0.7, 0.95] {
            assert!((star.value(&[x]) - rho.value(&[x])).abs() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn rearrangement_is_symmetric_decreasing_and_normalized() {
        let rho = SineBumps::new(vec![
            Bump { lo: -2.0, width: 1.0, height: 1.0 },
            Bump { lo: 0.5, width: 2.0, height: 2.5 },
        ])
        .unwrap();
        let star = rearrange_decreasing_1d(&rho, 512).unwrap();
        assert!((power_integral(&star, 1.0) - 1.0).abs() < 1e-12);
        assert!((star.half_width() - 1.5).abs() < 1e-10);
        let vals: Vec<f64> = star.nodes().map(|(_, v)| v).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(star.value(&[0.4]), star.value(&[-0.4]));
    }

    #[test]
    fn equimeasurable_power_integrals() {
        let rho = BetaDensity::new(2.0, 5.0).unwrap();
        let star = rearrange_decreasing_1d(&rho, 1024).unwrap();
        for &p in &[1.5, 2.0, 3.0] {
            let a = power_integral(&rho, p);
            let b = power_integral(&star, p);
            assert!(((a - b) / a).abs() < 1e-7, "p = {p}: {a} vs {b}");
        }
    }

    #[test]
    fn csv_has_header_and_symmetric_rows() {
        let rho = SineBumps::truncated_cosine(0.0, 2.0).unwrap();
        let star = rearrange_decreasing_1d(&rho, 16).unwrap();
        let mut buf = Vec::new();
        star.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,rho");
        assert_eq!(lines.len(), 1 + 2 * 16 + 1);
    }

    #[test]
    fn rejects_unbounded_support() {
        let g = crate::densities::Gaussian::new(1, 1.0).unwrap();
        assert!(rearrange_decreasing_1d(&g, 64).is_err());
    }
}
