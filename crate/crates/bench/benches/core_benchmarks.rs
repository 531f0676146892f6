//! Criterion benchmarks for the hot paths: root finding, disc evaluation,
//! oracle evaluation, and one envelope restart.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use green_core::envelope::{optimize_envelope, EnvelopeOptions};
use green_core::models::ModelId;
use green_core::roots::roots_in_disc;
use green_core::{disc, sampling, AnalyticDisc, UniPoly};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> UniPoly {
    UniPoly::new(
        (0..=degree)
            .map(|_| sampling::complex_gaussian(rng))
            .collect(),
    )
}

fn bench_roots(c: &mut Criterion) {
    let mut group = c.benchmark_group("roots_in_disc");
    for degree in [8usize, 24, 48] {
        let mut rng = ChaCha8Rng::seed_from_u64(degree as u64);
        let q = random_poly(&mut rng, degree);
        group.bench_with_input(BenchmarkId::new("random", degree), &q, |b, q| {
            b.iter(|| roots_in_disc(q, 1.0).unwrap());
        });
    }
    // A clustered case: (t - 0.4)^3 (t + 0.3)^2 times a random factor.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut q = UniPoly::one();
    for _ in 0..3 {
        q = q.mul(&UniPoly::new(vec![re(-0.4), re(1.0)]));
    }
    for _ in 0..2 {
        q = q.mul(&UniPoly::new(vec![re(0.3), re(1.0)]));
    }
    q = q.mul(&random_poly(&mut rng, 6));
    group.bench_function("multiple_roots_deg11", |b| {
        b.iter(|| roots_in_disc(&q, 1.0).unwrap());
    });
    group.finish();
}

fn bench_disc_eval(c: &mut Criterion) {
    let a = ModelId::IntroPair.ideal();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let coeffs: Vec<Vec<Complex64>> = (0..2)
        .map(|_| {
            (0..4)
                .map(|_| sampling::complex_gaussian(&mut rng) * 0.1)
                .collect()
        })
        .collect();
    let f = AnalyticDisc::new(vec![re(0.4), re(0.3)], coeffs).unwrap();
    c.bench_function("evaluate_disc_deg4", |b| {
        b.iter(|| disc::evaluate_disc(&f, &a).unwrap());
    });
}

fn bench_oracle(c: &mut Criterion) {
    let m = ModelId::PolyThreeAxes;
    let z = [re(0.4), re(0.35), re(0.2)];
    c.bench_function("oracle_three_axes", |b| {
        b.iter(|| m.oracle_eval(&z).unwrap());
    });
}

fn bench_envelope_restart(c: &mut Criterion) {
    let a = ModelId::IntroPair.ideal();
    let x = [re(0.4), re(0.3)];
    let opts = EnvelopeOptions {
        degree: 4,
        restarts: 1,
        budget: 50,
        seed: 11,
        use_templates: false,
    };
    c.bench_function("envelope_single_restart", |b| {
        b.iter(|| optimize_envelope(&a, &x, &opts).unwrap());
    });
}

criterion_group!(
    benches,
    bench_roots,
    bench_disc_eval,
    bench_oracle,
    bench_envelope_restart
);
criterion_main!(benches);
