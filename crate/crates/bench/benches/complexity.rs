use cfr_bench::{lambda3, line_densities, phi0_request, states};
use cfr_core::densities::{rearrange_decreasing_1d, Bump, SineBumps};
use cfr_core::hydrogenic::{cfr_circular_closed, cfr_ground_closed, cfr_numeric, phi0, phi0_lattice};
use cfr_core::specfun::{laguerre, AngularDensity};
use cfr_core::{cfr_complexity, LambdaParam, MethodChoice, QuadratureSpec};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn special_functions(c: &mut Criterion) {
    let mut g = c.benchmark_group("specfun");
    g.bench_function("laguerre_20", |b| b.iter(|| laguerre(20, 3.0, black_box(7.5))));
    let theta = AngularDensity::new(6, 2).unwrap();
    g.bench_function("angular_6_2", |b| b.iter(|| theta.eval(black_box(1.1)).unwrap()));
    g.finish();
}

fn linearization(c: &mut Criterion) {
    let mut g = c.benchmark_group("phi0");
    for r in [3usize, 5] {
        let req = phi0_request(r, 4);
        g.bench_with_input(BenchmarkId::new("grouped", r), &req, |b, q| b.iter(|| phi0(q)));
        g.bench_with_input(BenchmarkId::new("lattice", r), &req, |b, q| b.iter(|| phi0_lattice(q)));
    }
    g.finish();
}

fn hydrogenic(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let mut g = c.benchmark_group("hydrogenic");
    let l = lambda3(2.0);
    g.bench_function("ground_closed", |b| b.iter(|| cfr_ground_closed(black_box(&l)).unwrap()));
    g.bench_function("circular_closed_n4", |b| b.iter(|| cfr_circular_closed(4, black_box(&l)).unwrap()));
    for (name, qn) in states() {
        g.bench_with_input(BenchmarkId::new("quadrature", name), &qn, |b, q| {
            b.iter(|| cfr_numeric(q, &l, &spec).unwrap())
        });
    }
    g.finish();
}

fn line(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let l = LambdaParam::new(1.5, 1).unwrap();
    let mut g = c.benchmark_group("line_quadrature");
    for (name, rho) in line_densities() {
        g.bench_function(name, |b| {
            b.iter(|| cfr_complexity(&rho, &l, MethodChoice::Quadrature, &spec).unwrap())
        });
    }
    g.finish();
}

fn rearrangement(c: &mut Criterion) {
    let rho = SineBumps::new(vec![
        Bump { lo: -2.0, width: 1.0, height: 1.0 },
        Bump { lo: 0.5, width: 2.0, height: 2.5 },
    ])
    .unwrap();
    let mut g = c.benchmark_group("rearrange");
    g.sample_size(20);
    for cells in [512usize, 2048] {
        g.bench_with_input(BenchmarkId::from_parameter(cells), &cells, |b, &n| {
            b.iter(|| rearrange_decreasing_1d(&rho, n).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, special_functions, linearization, hydrogenic, line, rearrangement);
criterion_main!(benches);
