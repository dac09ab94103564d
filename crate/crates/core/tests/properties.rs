use cfr_core::densities::{scale_translate, Bump, Gaussian, SineBumps};
use cfr_core::{
    cfr_complexity, Density, HydrogenicDensity, LambdaParam, MethodChoice, QuadratureSpec,
    QuantumNumbers,
};
use proptest::prelude::*;

fn fd_gap<D: Density>(rho: &D, x: &[f64]) -> f64 {
    let g = rho.gradient(x);
    let scale = g.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
    (0..x.len())
        .map(|i| {
            let h = 1e-5 * x[i].abs().max(1.0);
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            // fourth-order central difference
            let mut xpp = x.to_vec();
            let mut xmm = x.to_vec();
            xpp[i] += 2.0 * h;
            xmm[i] -= 2.0 * h;
            let fd = (8.0 * (rho.value(&xp) - rho.value(&xm)) - (rho.value(&xpp) - rho.value(&xmm)))
                / (12.0 * h);
            (fd - g[i]).abs() / scale
        })
        .fold(0.0, f64::max)
}

fn cfr<D: Density>(rho: &D, lambda: f64) -> f64 {
    let l = LambdaParam::new(lambda, rho.dim()).unwrap();
    cfr_complexity(rho, &l, MethodChoice::Quadrature, &QuadratureSpec::default())
        .unwrap()
        .cfr
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn hydrogenic_gradient_matches_differences(
        (n, l, m) in (1u32..=4).prop_flat_map(|n| (Just(n), 0..n)).prop_flat_map(|(n, l)| (Just(n), Just(l), -(l as i32)..=l as i32)),
        x in prop::array::uniform3(-6.0f64..6.0),
    ) {
        prop_assume!(x.iter().map(|v| v * v).sum::<f64>() > 0.01);
        let h = HydrogenicDensity::new(QuantumNumbers::new(n, l, m, 1.0).unwrap());
        let gap = fd_gap(&h, &x);
        prop_assert!(gap < 1e-6, "({n},{l},{m}) at {x:?}: {gap:e}");
    }

    #[test]
    fn gaussian_gradient_matches_differences(
        x in prop::array::uniform3(-3.0f64..3.0),
        sigma in 0.5f64..2.0,
    ) {
        let g = Gaussian::new(3, sigma).unwrap();
        prop_assert!(fd_gap(&g, &x) < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn complexity_is_scale_and_translation_invariant(
        a in prop_oneof![0.2f64..5.0, -5.0f64..-0.2],
        b in -10.0f64..10.0,
        lambda in 0.8f64..3.0,
    ) {
        let rho = SineBumps::new(vec![
            Bump { lo: -2.0, width: 1.0, height: 1.0 },
            Bump { lo: 0.5, width: 2.0, height: 2.5 },
        ]).unwrap();
        let base = cfr(&rho, lambda);
        let moved = cfr(&scale_translate(rho, a, vec![b]).unwrap(), lambda);
        prop_assert!((moved / base - 1.0).abs() < 1e-8, "{moved} vs {base}");
    }

    #[test]
    fn random_bumps_respect_the_lower_bound(
        bumps in prop::collection::vec((0.2f64..2.0, 0.1f64..3.0, 0.0f64..1.0), 1..4),
        lambda in 0.8f64..3.0,
    ) {
        let mut lo = 0.0;
        let list = bumps
            .into_iter()
            .map(|(width, height, gap)| {
                let b = Bump { lo, width, height };
                lo += width + gap;
                b
            })
            .collect();
        let rho = SineBumps::new(list).unwrap();
        prop_assert!(cfr(&rho, lambda) >= 1.0 - 1e-10);
    }
}

#[test]
fn ground_state_density_pointwise() {
    let h = HydrogenicDensity::new(QuantumNumbers::new(1, 0, 0, 1.0).unwrap());
    for &r in &[0.0f64, 0.3, 1.0, 2.5, 7.0] {
        let want = (-2.0 * r).exp() / std::f64::consts::PI;
        let got = h.value(&[0.0, r * 0.6, r * 0.8]);
        assert!((got / want - 1.0).abs() < 1e-13, "r={r}: {got} vs {want}");
    }
}
