//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p green-cli --test acceptance -- --nocapture` to see
//! the per-criterion lines and timings.

use green_core::envelope::{optimize_envelope, EnvelopeOptions};
use green_core::green1d::{green_1d_eval, poisson_jensen_check, WeightedZeroSet};
use green_core::models::{product_green, pullback_equality_check, ModelId};
use green_core::verify::{
    check_log_bound, check_negative, check_psh_lines, lelong_radial, FunctionHandle,
};
use green_core::{
    disc, sampling, AnalyticDisc, DomainKind, GreenValue, GridSpec, IdealSpec, ProbeSpec,
    ProperMapSpec, VanishingOrder,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::Command;
use std::time::Instant;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn report(criterion: &str, pass: bool, detail: String) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("{criterion}: {status} ({detail})");
    assert!(pass, "{criterion} failed: {detail}");
}

fn all_models() -> Vec<ModelId> {
    vec![
        ModelId::IntroPair,
        ModelId::PolyPowers { nu: vec![2, 3], dim: 2 },
        ModelId::PolyZ1SqZ1Z2 { dim: 2 },
        ModelId::PolyThreeAxes,
        ModelId::BallCoords { p: 1, dim: 2 },
        ModelId::BallZ1SqZ2 { dim: 2 },
    ]
}

/// Criterion 1: every closed-form model certifies as a member of its
/// defining class (negative, plurisubharmonic, uniformly log-bounded) in
/// under 60 seconds.
#[test]
fn criterion_1_oracle_membership() {
    let start = Instant::now();
    let mut detail = String::new();
    let mut pass = true;
    for (i, model) in all_models().into_iter().enumerate() {
        let u = model.handle();
        let a = model.ideal();
        let seed = 100 + i as u64;
        let neg = check_negative(&u, 500, seed).expect("negativity check runs");
        let psh =
            check_psh_lines(&u, 200, 256, &[0.05, 0.1, 0.2], 1e-7, seed).expect("psh check runs");
        let anchors = model.zero_set_anchors();
        assert_eq!(anchors.len(), 4);
        let logb = check_log_bound(&u, &a, &anchors, &[1e-1, 1e-2, 1e-3, 1e-4], 300, seed)
            .expect("log bound runs");
        let ok = neg.pass && psh.pass && logb.pass;
        pass &= ok;
        detail.push_str(&format!(
            "{}: {}{}{} ",
            model.tag(),
            if neg.pass { "N" } else { "n!" },
            if psh.pass { "P" } else { "p!" },
            if logb.pass { "L" } else { "l!" },
        ));
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 60.0;
    report(
        "criterion 1 (oracle membership)",
        pass,
        format!("{detail}runtime {elapsed:.1}s < 60s"),
    );
}

fn tightness_cases() -> Vec<(ModelId, Vec<Vec<Complex64>>)> {
    vec![
        (
            ModelId::PolyPowers { nu: vec![1, 1], dim: 2 },
            vec![
                vec![re(0.4), re(0.3)],
                vec![re(0.25), re(0.4)],
                vec![re(0.35), re(0.35)],
                vec![re(0.2), re(0.15)],
                vec![re(0.45), re(0.1)],
            ],
        ),
        (
            ModelId::PolyZ1SqZ1Z2 { dim: 2 },
            vec![
                vec![re(0.4), re(0.3)],
                vec![re(0.35), re(0.2)],
                vec![re(0.3), re(0.3)],
                vec![re(0.25), re(0.1)],
                vec![re(0.45), re(0.25)],
            ],
        ),
        (
            ModelId::PolyThreeAxes,
            vec![
                vec![re(0.4), re(0.4), re(0.2)],
                vec![re(0.3), re(0.3), re(0.1)],
                vec![re(0.35), re(0.35), re(0.3)],
                vec![re(0.25), re(0.25), re(0.2)],
                vec![re(0.2), re(0.2), re(0.05)],
            ],
        ),
        (
            ModelId::BallZ1SqZ2 { dim: 2 },
            vec![
                vec![re(0.2), re(0.03)],
                vec![re(0.15), re(0.05)],
                vec![re(0.25), re(0.02)],
                vec![re(0.18), re(0.04)],
                vec![re(0.22), re(0.06)],
            ],
        ),
    ]
}

/// Criterion 2: with structural templates the envelope matches the oracle to
/// 1e-6; with pure random restarts (degree <= 4, 200 x 500, fixed seed) it
/// stays within 0.1. Total runtime under 10 minutes.
#[test]
fn criterion_2_envelope_tightness() {
    let start = Instant::now();
    let mut max_gap_template = 0.0f64;
    let mut max_gap_free = 0.0f64;
    for (model, points) in tightness_cases() {
        let a = model.ideal();
        for x in &points {
            let oracle = model
                .oracle_eval(x)
                .expect("interior point")
                .finite()
                .expect("off the zero set");
            let with_templates = EnvelopeOptions {
                degree: 4,
                restarts: 8,
                budget: 60,
                seed: 7,
                use_templates: true,
            };
            let est = optimize_envelope(&a, x, &with_templates).expect("envelope runs");
            let v = est.value.finite().expect("finite bound");
            max_gap_template = max_gap_template.max((v - oracle).abs());

            let template_free = EnvelopeOptions {
                degree: 4,
                restarts: 200,
                budget: 500,
                seed: 7,
                use_templates: false,
            };
            let est = optimize_envelope(&a, x, &template_free).expect("envelope runs");
            let v = est.value.finite().expect("finite bound");
            max_gap_free = max_gap_free.max((v - oracle).abs());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = max_gap_template <= 1e-6 && max_gap_free <= 0.1 && elapsed < 600.0;
    report(
        "criterion 2 (envelope tightness)",
        pass,
        format!(
            "template gap {max_gap_template:.2e} <= 1e-6, free gap {max_gap_free:.4} <= 0.1, runtime {elapsed:.0}s < 600s"
        ),
    );
}

/// A random disc through a random interior center, scaled into the domain.
fn random_contained_disc(
    rng: &mut ChaCha8Rng,
    a: &IdealSpec,
    degree: usize,
) -> AnalyticDisc {
    let domain = a.domain();
    let center = sampling::interior_point(rng, &domain, 0.15);
    let mut coeffs: Vec<Vec<Complex64>> = Vec::with_capacity(domain.dim);
    let headroom: Vec<f64> = match domain.kind {
        DomainKind::Polydisc => center.iter().map(|c| 1.0 - 2e-3 - c.norm()).collect(),
        DomainKind::Ball => {
            let r = center.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            vec![(1.0 - 2e-3 - r) / (domain.dim as f64).sqrt(); domain.dim]
        }
    };
    for h in headroom {
        let raw: Vec<Complex64> = (0..degree).map(|_| sampling::complex_gaussian(rng)).collect();
        let total: f64 = raw.iter().map(|c| c.norm()).sum();
        let s = if total > 0.0 { h.max(0.0) * rng.gen_range(0.2..0.95) / total } else { 0.0 };
        coeffs.push(raw.into_iter().map(|c| c * s).collect());
    }
    AnalyticDisc::new(center, coeffs).expect("finite disc")
}

/// Criterion 3: no contained disc ever evaluates below the oracle by more
/// than 1e-8 (500 random discs per model).
#[test]
fn criterion_3_upper_bound_certificate() {
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    let mut checked = 0usize;
    for (i, model) in all_models().into_iter().enumerate() {
        let a = model.ideal();
        let mut rng = ChaCha8Rng::seed_from_u64(400 + i as u64);
        let mut done = 0usize;
        while done < 500 {
            let f = random_contained_disc(&mut rng, &a, 3);
            let oracle = match model.oracle_eval(f.center()).expect("interior") {
                GreenValue::Finite(v) => v,
                GreenValue::MinusInf => continue, // center on the zero set
            };
            let est = match disc::evaluate_disc(&f, &a) {
                Ok(e) => e,
                Err(_) => continue, // scaled draw fell outside the slack
            };
            done += 1;
            checked += 1;
            match est.value {
                GreenValue::Finite(v) => {
                    worst = worst.min(v - oracle);
                    if v < oracle - 1e-8 {
                        violations += 1;
                    }
                }
                GreenValue::MinusInf => violations += 1,
            }
        }
    }
    report(
        "criterion 3 (upper-bound certificate)",
        violations == 0,
        format!("{checked} discs, 0 expected violations, got {violations}, min(value - oracle) {worst:.3e}"),
    );
}

/// Criterion 4: exact one-dimensional identities.
#[test]
fn criterion_4_one_dimensional_exactness() {
    // Poisson-Jensen on 500 random Blaschke data sets.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut max_pj = 0.0f64;
    for _ in 0..500 {
        let k = rng.gen_range(1..=10);
        let entries: Vec<(Complex64, f64)> = (0..k)
            .map(|_| {
                let mut a = sampling::uniform_disc(&mut rng, 0.95);
                if a.norm() < 1e-3 {
                    a += re(0.2);
                }
                (a, rng.gen_range(1..4) as f64)
            })
            .collect();
        let b = WeightedZeroSet::new(entries).expect("valid data");
        let pj = poisson_jensen_check(&b).expect("integer weights");
        max_pj = max_pj.max(pj.lhs.abs_diff(pj.rhs));
    }

    // Kernel sums recomputed independently.
    let mut max_sum = 0.0f64;
    for _ in 0..200 {
        let k = rng.gen_range(1..=8);
        let entries: Vec<(Complex64, f64)> = (0..k)
            .map(|_| (sampling::uniform_disc(&mut rng, 0.9), rng.gen_range(0.5..3.0)))
            .collect();
        let set = WeightedZeroSet::new(entries).expect("valid data");
        let z = sampling::uniform_disc(&mut rng, 0.9);
        if set.entries().iter().any(|(a, _)| (a - z).norm() < 1e-6) {
            continue;
        }
        let v = green_1d_eval(&set, z).expect("interior").finite().expect("finite");
        let direct: f64 = set
            .entries()
            .iter()
            .map(|&(a, nu)| {
                nu * ((z - a).norm().ln() - (Complex64::new(1.0, 0.0) - a.conj() * z).norm().ln())
            })
            .sum();
        max_sum = max_sum.max((v - direct).abs());
    }
    let pass = max_pj <= 1e-10 && max_sum <= 1e-12;
    report(
        "criterion 4 (1-D exactness)",
        pass,
        format!("poisson-jensen max {max_pj:.2e} <= 1e-10, kernel-sum max {max_sum:.2e} <= 1e-12"),
    );
}

/// Criterion 5: the product property reproduces model oracles.
#[test]
fn criterion_5_product_property() {
    // Product of 1-D factors vs the coordinate-powers oracle on a 20x20 grid.
    let nu = [2u32, 3u32];
    let factors: Vec<FunctionHandle> = nu
        .iter()
        .map(|&v| {
            let set = WeightedZeroSet::new([(re(0.0), v as f64)]).expect("pole");
            FunctionHandle::from_zero_set(set, format!("{v}log|z|"))
        })
        .collect();
    let prod = product_green(&factors[0], &factors[1]);
    let model = ModelId::PolyPowers { nu: nu.to_vec(), dim: 2 };
    let grid = GridSpec::square(0.05, 0.9, 20, 2);
    let mut max_diff = 0.0f64;
    for z in grid.points() {
        let lhs = prod.eval(&z);
        let rhs = model.oracle_eval(&z).expect("interior");
        max_diff = max_diff.max(lhs.abs_diff(rhs));
    }

    // Mixed product: a 1-D factor times the intro-pair model against the max
    // composition, on a 3-D grid.
    let set = WeightedZeroSet::new([(re(0.0), 2.0)]).expect("pole");
    let factor = FunctionHandle::from_zero_set(set, "2log|z|");
    let intro = ModelId::IntroPair.handle();
    let mixed = product_green(&factor, &intro);
    let grid3 = GridSpec::square(0.05, 0.9, 10, 3);
    let mut max_mixed = 0.0f64;
    for z in grid3.points() {
        let lhs = mixed.eval(&z);
        let rhs = GreenValue::Finite(2.0 * z[0].norm().ln())
            .max(ModelId::IntroPair.oracle_eval(&z[1..]).expect("interior"));
        max_mixed = max_mixed.max(lhs.abs_diff(rhs));
    }
    let pass = max_diff <= 1e-12 && max_mixed <= 1e-12;
    report(
        "criterion 5 (product property)",
        pass,
        format!("factor product max {max_diff:.2e}, mixed product max {max_mixed:.2e}, both <= 1e-12"),
    );
}

/// Criterion 6: the pullback identity under coordinate power maps.
#[test]
fn criterion_6_pullback_equality() {
    let a = ModelId::PolyPowers { nu: vec![1, 1], dim: 2 }.ideal();
    let grid = GridSpec::square(0.05, 0.9, 20, 2);
    let mut pass = true;
    let mut detail = String::new();
    for exps in [vec![2u32, 1], vec![3, 2], vec![1, 1]] {
        let phi = ProperMapSpec::new(exps.clone()).expect("positive exponents");
        let r = pullback_equality_check(&a, &phi, &grid).expect("models match");
        pass &= r.pass;
        detail.push_str(&format!("phi={exps:?}: {:.2e} ", r.max_diff));
    }
    report(
        "criterion 6 (pullback equality)",
        pass,
        format!("{detail}all <= 1e-12"),
    );
}

/// Criterion 7: radial Lelong numbers at the origin and exact nu_tilde.
#[test]
fn criterion_7_lelong_numbers() {
    let radii = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let axes = ModelId::PolyThreeAxes;
    let r3 = lelong_radial(
        &axes.handle(),
        &[re(0.0), re(0.0), re(0.0)],
        &radii,
        4096,
        71,
    )
    .expect("lelong runs");
    let intro = ModelId::IntroPair;
    let r1 = lelong_radial(&intro.handle(), &[re(0.0), re(0.0)], &radii, 4096, 72)
        .expect("lelong runs");

    let nu3 = axes.ideal().nu_tilde(&[re(0.0), re(0.0), re(0.0)]).expect("interior");
    let nu1 = intro.ideal().nu_tilde(&[re(0.0), re(0.0)]).expect("interior");

    let pass = (r3.final_slope - 2.0).abs() <= 0.05
        && (r1.final_slope - 1.0).abs() <= 0.05
        && nu3 == VanishingOrder::Finite(2)
        && nu1 == VanishingOrder::Finite(1);
    report(
        "criterion 7 (Lelong numbers)",
        pass,
        format!(
            "three-axes slope {:.4} (want 2 +/- 0.05), intro slope {:.4} (want 1 +/- 0.05), nu_tilde {nu3:?}/{nu1:?}",
            r3.final_slope, r1.final_slope
        ),
    );
}

/// Criterion 8: randomized generator reduction certifies equivalence.
#[test]
fn criterion_8_generator_reduction() {
    use green_core::MultiPoly;
    let one = re(1.0);
    // (z1^2 z2, z1^2 z3, z1 z2 z3) on the tridisc.
    let cubic = IdealSpec::new(
        green_core::DomainSpec::polydisc(3),
        vec![
            MultiPoly::monomial(3, one, vec![2, 1, 0]).unwrap(),
            MultiPoly::monomial(3, one, vec![2, 0, 1]).unwrap(),
            MultiPoly::monomial(3, one, vec![1, 1, 1]).unwrap(),
        ],
    )
    .unwrap();
    // (z1, z2, z1 + z2) on the bidisc.
    let linear = IdealSpec::new(
        green_core::DomainSpec::polydisc(2),
        vec![
            MultiPoly::var(2, 0),
            MultiPoly::var(2, 1),
            MultiPoly::var(2, 0).add(&MultiPoly::var(2, 1)).unwrap(),
        ],
    )
    .unwrap();

    let mut pass = true;
    let mut worst_cubic = 0.0f64;
    let mut worst_linear = 0.0f64;
    for seed in 1..=5u64 {
        let (_, r) = cubic
            .reduce_generators(3, 8, seed, &ProbeSpec::default())
            .expect("reduction runs");
        pass &= r.success && r.max_log_diff <= 3.0;
        worst_cubic = worst_cubic.max(r.max_log_diff);

        let (_, r) = linear
            .reduce_generators(2, 8, seed, &ProbeSpec::default())
            .expect("reduction runs");
        pass &= r.success && r.max_log_diff <= 1.0;
        worst_linear = worst_linear.max(r.max_log_diff);
    }
    report(
        "criterion 8 (generator reduction)",
        pass,
        format!("cubic max log-diff {worst_cubic:.3} <= 3.0, linear max {worst_linear:.3} <= 1.0, 5 seeds each"),
    );
}

/// Criterion 9: boundary behavior of the ball models.
#[test]
fn criterion_9_boundary_behavior() {
    // The two-generator ball formula vanishes on the boundary sphere.
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    let mut max_boundary = 0.0f64;
    for dim in [2usize, 3] {
        let model = ModelId::BallZ1SqZ2 { dim };
        for _ in 0..100 {
            // |z1|^2 = a, |z2|^2 = b, |z''|^2 = 1 - a - b, pulled a hair
            // inside so the domain contract holds.
            let a: f64 = rng.gen_range(0.01..0.8);
            let b: f64 = rng.gen_range(0.01..(0.99 - a));
            let shrink = 1.0 - 1e-13;
            let mut z = vec![
                Complex64::from_polar(a.sqrt() * shrink, rng.gen_range(0.0..std::f64::consts::TAU)),
                Complex64::from_polar(b.sqrt() * shrink, rng.gen_range(0.0..std::f64::consts::TAU)),
            ];
            if dim == 3 {
                let t = (1.0 - a - b).max(0.0);
                z.push(Complex64::from_polar(t.sqrt() * shrink, rng.gen_range(0.0..std::f64::consts::TAU)));
            } else {
                // On the 2-ball the boundary needs a + b = 1.
                let scale = ((1.0 - 1e-13) / (a + b)).sqrt();
                z[0] *= scale;
                z[1] *= scale;
            }
            let v = model.oracle_eval(&z).expect("interior").finite().expect("finite");
            max_boundary = max_boundary.max(v.abs());
        }
    }

    // Coordinate-subspace ball model decays to zero along rays.
    let model4 = ModelId::BallCoords { p: 1, dim: 2 };
    let mut max_decay = 0.0f64;
    for _ in 0..100 {
        let dir = sampling::unit_sphere(&mut rng, 2);
        if dir[1].norm_sqr() > 0.9 || dir[0].norm() < 0.05 {
            continue; // stay away from the singular set on the boundary
        }
        let t = 1.0 - 1e-6;
        let z: Vec<Complex64> = dir.iter().map(|d| d * t).collect();
        let v = model4.oracle_eval(&z).expect("interior").finite().expect("finite");
        max_decay = max_decay.max(v.abs());
    }
    let pass = max_boundary <= 1e-10 && max_decay < 1e-4;
    report(
        "criterion 9 (boundary behavior)",
        pass,
        format!("boundary identity max {max_boundary:.2e} <= 1e-10, ray decay max {max_decay:.2e} < 1e-4"),
    );
}

/// Criterion 10: grid and envelope runs are byte-identical given the seed.
#[test]
fn criterion_10_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_green");
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let tmp = std::env::temp_dir();

    // Envelope-backed grid on an ideal with no closed form.
    let nonmodel = root.join("examples_ideals/nonmodel.json");
    let g1 = tmp.join("green_det_grid_1.csv");
    let g2 = tmp.join("green_det_grid_2.csv");
    for out in [&g1, &g2] {
        let status = Command::new(bin)
            .args([
                "grid",
                nonmodel.to_str().unwrap(),
                "--spec",
                "0.2:0.4:2,0.2:0.4:2",
                "--out",
                out.to_str().unwrap(),
                "--seed",
                "11",
                "--restarts",
                "6",
                "--budget",
                "60",
            ])
            .status()
            .expect("spawn green grid");
        assert!(status.success());
    }
    let grid_same = std::fs::read(&g1).unwrap() == std::fs::read(&g2).unwrap();

    // Envelope command stdout.
    let intro = root.join("examples_ideals/intro_pair.json");
    let run = || {
        Command::new(bin)
            .args([
                "envelope",
                intro.to_str().unwrap(),
                "--point",
                "0.5,0.5",
                "--seed",
                "9",
                "--restarts",
                "8",
                "--budget",
                "80",
            ])
            .output()
            .expect("spawn green envelope")
    };
    let o1 = run();
    let o2 = run();
    let env_same = o1.stdout == o2.stdout && o1.status.success();

    report(
        "criterion 10 (determinism)",
        grid_same && env_same,
        format!("grid byte-identical: {grid_same}, envelope byte-identical: {env_same}"),
    );
}
