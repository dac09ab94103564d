//! Fixed workloads shared by the criterion benchmarks in `benches/`.

use cfr_core::densities::{BetaDensity, Bump, SineBumps};
use cfr_core::hydrogenic::Phi0Request;
use cfr_core::{Density, GeneralizedGaussian, LambdaParam, QuantumNumbers};

/// One-dimensional densities with named labels.
pub fn line_densities() -> Vec<(&'static str, Box<dyn Density>)> {
    let b15 = GeneralizedGaussian::new(LambdaParam::new(1.5, 1).expect("admissible")).expect("valid");
    vec![
        ("truncated_cosine", Box::new(SineBumps::truncated_cosine(0.0, 2.0).expect("valid"))),
        (
            "two_bumps",
            Box::new(
                SineBumps::new(vec![
                    Bump { lo: -2.0, width: 1.0, height: 1.0 },
                    Bump { lo: 0.5, width: 2.0, height: 2.5 },
                ])
                .expect("valid"),
            ),
        ),
        ("beta_2_3", Box::new(BetaDensity::new(2.0, 3.0).expect("valid"))),
        ("generalized_gaussian_1.5", Box::new(b15)),
    ]
}

/// Hydrogenic states, from the ground state to nodal and circular ones.
pub fn states() -> Vec<(&'static str, QuantumNumbers)> {
    [("1s", 1, 0, 0), ("2p1", 2, 1, 1), ("3p0", 3, 1, 0), ("4f3", 4, 3, 3), ("5d1", 5, 2, 1)]
        .into_iter()
        .map(|(name, n, l, m)| (name, QuantumNumbers::new(n, l, m, 1.0).expect("valid")))
        .collect()
}

/// A linearization sum with `r` identical degree-`m` factors.
pub fn phi0_request(r: usize, m: i64) -> Phi0Request {
    Phi0Request::uniform(2, 1, r, m, 3.0, 0.5).expect("valid")
}

pub fn lambda3(value: f64) -> LambdaParam {
    LambdaParam::new(value, 3).expect("admissible")
}
