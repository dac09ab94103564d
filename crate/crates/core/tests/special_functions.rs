use std::f64::consts::PI;

use cfr_core::quadrature::{integrate_interval, integrate_semi_infinite, QuadratureSpec};
use cfr_core::specfun::{gamma, AngularDensity, OrthonormalLaguerre};

#[test]
fn laguerre_orthonormality() {
    let spec = QuadratureSpec::default();
    for &alpha in &[0.0, 1.0, 3.0, 5.0] {
        for n in 0..=6 {
            let p = OrthonormalLaguerre::new(n, alpha).unwrap();
            for m in 0..=n {
                let q = OrthonormalLaguerre::new(m, alpha).unwrap();
                let f = |x: f64| p.eval(x).unwrap().0 * q.eval(x).unwrap().0 * p.weight(x);
                let v = integrate_semi_infinite(f, &spec).unwrap().value;
                let want = if n == m { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-8, "alpha={alpha} n={n} m={m}: {v}");
            }
        }
    }
}

#[test]
fn angular_profiles_are_normalized() {
    let spec = QuadratureSpec::default();
    for l in 0..=4u32 {
        for m in -(l as i32)..=l as i32 {
            let t = AngularDensity::new(l, m).unwrap();
            let f = |th: f64| 2.0 * PI * t.eval(th).unwrap().0 * th.sin();
            let v = integrate_interval(f, 0.0, PI, &spec.clone().with_breakpoints(t.nodes().to_vec()))
                .unwrap()
                .value;
            assert!((v - 1.0).abs() < 1e-8, "l={l} m={m}: {v}");
        }
    }
}

#[test]
fn sine_power_integral_beta_form() {
    let spec = QuadratureSpec::default().with_rel_tol(1e-13);
    for n in 1..=6u32 {
        for &lambda in &[0.8, 1.0, 1.5, 2.0, 3.7] {
            let p = 2.0 * (n as f64 - 1.0) * lambda + 1.0;
            let v = integrate_interval(|t: f64| t.sin().powf(p), 0.0, PI, &spec).unwrap().value;
            let k = (n as f64 - 1.0) * lambda;
            let want = PI.sqrt() * gamma(k + 1.0).unwrap() / gamma(k + 1.5).unwrap();
            assert!((v / want - 1.0).abs() < 1e-10, "n={n} lambda={lambda}: {v} vs {want}");
        }
    }
}

#[test]
fn inverse_square_root_on_unit_interval() {
    let v = integrate_interval(|x: f64| x.powf(-0.5), 0.0, 1.0, &QuadratureSpec::default())
        .unwrap()
        .value;
    assert!((v - 2.0).abs() < 1e-10);
}
