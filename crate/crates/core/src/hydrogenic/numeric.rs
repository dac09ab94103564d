use super::{HydrogenicDensity, HydrogenicPieces, QuantumNumbers};
use crate::complexity::{ComplexityReport, Method};
use crate::densities::{weighted_gradient, Density};
use crate::error::{Error, Result};
use crate::functionals::{profile_integral, r2_weight, solid_angle_weight, unit_weight, LambdaParam};
use crate::quadrature::QuadratureSpec;

fn require_three_dims(lambda: &LambdaParam) -> Result<()> {
    if lambda.dim() != 3 {
        return Err(Error::domain(format!(
            "hydrogenic densities need lambda validated for d = 3, got d = {}",
            lambda.dim()
        )));
    }
    Ok(())
}

/// The six pieces by adaptive quadrature, with their summed error estimates.
fn pieces_with_errors(
    h: &HydrogenicDensity,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<(HydrogenicPieces, [f64; 6])> {
    let radial = h.radial_profile();
    let polar = h.polar_profile();
    let a = 2.0 * lambda - 3.0;
    let grad = move |v: f64, d: f64| weighted_gradient(v, a, d, 2.0);
    let pow = |p: f64| move |v: f64, _: f64| v.powf(p);

    let i1a_rad = profile_integral(&radial, grad, r2_weight, spec, "radial piece int R^(2l-3) R'^2 r^2 dr")?;
    let i1b_rad = profile_integral(&radial, pow(a + 2.0), unit_weight, spec, "radial piece int R^(2l-1) dr")?;
    let i2_rad = profile_integral(&radial, pow(lambda), r2_weight, spec, "radial piece int R^l r^2 dr")?;
    let i1a_ang = profile_integral(&polar, pow(a + 2.0), solid_angle_weight, spec, "angular piece int Theta^(2l-1) dOmega")?;
    let i1b_ang = if h.qn.l() == 0 {
        // Θ is constant
        crate::quadrature::Estimate { value: 0.0, err_estimate: 0.0 }
    } else {
        profile_integral(&polar, grad, solid_angle_weight, spec, "angular piece int Theta^(2l-3) Theta'^2 dOmega")?
    };
    let i2_ang = profile_integral(&polar, pow(lambda), solid_angle_weight, spec, "angular piece int Theta^l dOmega")?;
    let pieces = HydrogenicPieces {
        i1a_rad: i1a_rad.value,
        i1b_rad: i1b_rad.value,
        i2_rad: i2_rad.value,
        i1a_ang: i1a_ang.value,
        i1b_ang: i1b_ang.value,
        i2_ang: i2_ang.value,
    };
    let errs = [
        i1a_rad.err_estimate,
        i1b_rad.err_estimate,
        i2_rad.err_estimate,
        i1a_ang.err_estimate,
        i1b_ang.err_estimate,
        i2_ang.err_estimate,
    ];
    Ok((pieces, errs))
}

/// All six pieces of `(n, l, m)` by quadrature.
pub fn numeric_pieces(qn: &QuantumNumbers, lambda: &LambdaParam, spec: &QuadratureSpec) -> Result<HydrogenicPieces> {
    require_three_dims(lambda)?;
    let h = HydrogenicDensity::new(*qn);
    h.check_integrable(lambda.value())?;
    Ok(pieces_with_errors(&h, lambda.value(), spec)?.0)
}

/// `C_FR` of a hydrogenic state from quadrature of its separable pieces.
pub fn cfr_numeric(qn: &QuantumNumbers, lambda: &LambdaParam, spec: &QuadratureSpec) -> Result<ComplexityReport> {
    require_three_dims(lambda)?;
    let h = HydrogenicDensity::new(*qn);
    h.check_integrable(lambda.value())?;
    let (p, e) = pieces_with_errors(&h, lambda.value(), spec)?;
    let l = lambda.value();
    let grad = p.gradient_integral();
    let rel_power = e[2] / p.i2_rad.abs() + e[5] / p.i2_ang.abs();
    let grad_err = e[0] * p.i1a_ang + e[3] * p.i1a_rad + e[1] * p.i1b_ang + e[4] * p.i1b_rad;
    let parts = p.parts(l);
    let f_err = parts.fisher_lambda * (grad_err / grad.abs() + rel_power);
    let exponent = if lambda.is_shannon_limit() { 0.0 } else { lambda.mu() / 3.0 / (1.0 - l) };
    let n_err = parts.renyi_power * (exponent.abs() * rel_power);
    Ok(p.report(*lambda, Method::Quadrature, (f_err, n_err)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hydrogenic::{cfr_circular_closed, cfr_ground_closed, cfr_ns_closed, circular_pieces};

    fn lam(l: f64) -> LambdaParam {
        LambdaParam::new(l, 3).unwrap()
    }

    fn qn(n: u32, l: u32, m: i32, z: f64) -> QuantumNumbers {
        QuantumNumbers::new(n, l, m, z).unwrap()
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn ground_state_matches_closed_form() {
        for &l in &[0.8, 1.2, 1.5, 2.0, 3.0] {
            let c = cfr_numeric(&qn(1, 0, 0, 1.0), &lam(l), &spec()).unwrap().cfr;
            let want = cfr_ground_closed(&lam(l)).unwrap();
            assert!((c / want - 1.0).abs() < 1e-8, "lambda = {l}: {c} vs {want}");
        }
    }

    #[test]
    fn ns_states_match_closed_form() {
        for n in 2..=3 {
            let c = cfr_numeric(&qn(n, 0, 0, 1.0), &lam(2.0), &spec()).unwrap().cfr;
            let want = cfr_ns_closed(n, &lam(2.0)).unwrap();
            assert!((c / want - 1.0).abs() < 1e-7, "n = {n}: {c} vs {want}");
        }
    }

    #[test]
    fn circular_pieces_match_one_by_one() {
        let l = 2.0;
        let closed = circular_pieces(3, l, 1.0).unwrap();
        let numeric = numeric_pieces(&qn(3, 2, 2, 1.0), &lam(l), &spec()).unwrap();
        let pairs = [
            (numeric.i1a_rad, closed.i1a_rad),
            (numeric.i1b_rad, closed.i1b_rad),
            (numeric.i2_rad, closed.i2_rad),
            (numeric.i1a_ang, closed.i1a_ang),
            (numeric.i1b_ang, closed.i1b_ang),
            (numeric.i2_ang, closed.i2_ang),
        ];
        for (i, (a, b)) in pairs.into_iter().enumerate() {
            assert!((a / b - 1.0).abs() < 1e-7, "piece {i}: {a} vs {b}");
        }
        let c = cfr_numeric(&qn(3, 2, -2, 1.0), &lam(l), &spec()).unwrap().cfr;
        assert!((c / cfr_circular_closed(3, &lam(l)).unwrap() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn tiny_radial_pieces_keep_relative_accuracy() {
        // radial Fisher pieces fall far below the default abs_tol here
        for &l in &[3.0, 4.0] {
            let closed = circular_pieces(3, l, 1.0).unwrap();
            assert!(closed.i1a_rad < 1e-12);
            let numeric = numeric_pieces(&qn(3, 2, 2, 1.0), &lam(l), &spec()).unwrap();
            assert!((numeric.i1a_rad / closed.i1a_rad - 1.0).abs() < 1e-9, "lambda = {l}");
            assert!((numeric.i1b_rad / closed.i1b_rad - 1.0).abs() < 1e-9, "lambda = {l}");
            let c = cfr_numeric(&qn(3, 2, 2, 1.0), &lam(l), &spec()).unwrap().cfr;
            assert!((c / cfr_circular_closed(3, &lam(l)).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn z_invariance_of_a_nodal_state() {
        let base = cfr_numeric(&qn(3, 1, 0, 1.0), &lam(1.25), &spec()).unwrap().cfr;
        for &z in &[2.0, 5.0] {
            let c = cfr_numeric(&qn(3, 1, 0, z), &lam(1.25), &spec()).unwrap().cfr;
            assert!((c / base - 1.0).abs() < 1e-7, "Z = {z}");
        }
    }

    #[test]
    fn radial_power_scales_with_z() {
        let l = 1.7;
        let a = numeric_pieces(&qn(2, 1, 0, 1.0), &lam(l), &spec()).unwrap().i2_rad;
        let b = numeric_pieces(&qn(2, 1, 0, 3.0), &lam(l), &spec()).unwrap().i2_rad;
        assert!((b / a / 3f64.powf(3.0 * (l - 1.0)) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn angular_identity_between_pieces() {
        for l in 0..=3u32 {
            for m in -(l as i32)..=(l as i32) {
                let q = qn(l + 1, l, m, 1.0);
                for &lv in &[1.3, 2.0] {
                    let a = numeric_pieces(&q, &lam(lv), &spec()).unwrap().i1a_ang;
                    let b = numeric_pieces(&q, &lam(2.0 * lv - 1.0), &spec()).unwrap().i2_ang;
                    assert!((a / b - 1.0).abs() < 1e-10, "l = {l}, m = {m}");
                }
            }
        }
    }

    #[test]
    fn nodal_state_below_three_quarters_diverges() {
        let err = cfr_numeric(&qn(2, 0, 0, 1.0), &lam(0.7), &spec()).unwrap_err();
        assert!(matches!(err, Error::Divergent { .. }));
        assert!(cfr_numeric(&qn(1, 0, 0, 1.0), &LambdaParam::new(2.0, 1).unwrap(), &spec()).is_err());
    }
}
