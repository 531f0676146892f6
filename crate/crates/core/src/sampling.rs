//! Seeded samplers for domains, spheres, and coefficient draws.

use crate::ideal::{DomainKind, DomainSpec};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A standard complex Gaussian (unit variance per real part).
pub fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    // Box-Muller.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    Complex64::new(r * theta.cos(), r * theta.sin())
}

/// Uniform point in the unit disc of radius `r`.
pub fn uniform_disc(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    let rho = r * rng.gen_range(0.0f64..1.0).sqrt();
    let theta = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    Complex64::from_polar(rho, theta)
}

/// Uniform point in the open unit ball of `C^n`, scaled by `r`.
pub fn uniform_ball(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vec<Complex64> {
    let dir = unit_sphere(rng, n);
    let rho = r * rng.gen_range(0.0f64..1.0).powf(1.0 / (2.0 * n as f64));
    dir.into_iter().map(|d| d * rho).collect()
}

/// Uniform direction on the unit sphere of `C^n` (normalized Gaussian).
pub fn unit_sphere(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// Uniform interior point of the domain, kept `margin` away from the boundary.
pub fn interior_point(rng: &mut ChaCha8Rng, domain: &DomainSpec, margin: f64) -> Vec<Complex64> {
    let r = 1.0 - margin;
    match domain.kind {
        DomainKind::Polydisc => (0..domain.dim).map(|_| uniform_disc(rng, r)).collect(),
        DomainKind::Ball => uniform_ball(rng, domain.dim, r),
    }
}

/// Point at exact Euclidean distance `r` from `center` in a uniform random
/// direction.
pub fn sphere_point(
    rng: &mut ChaCha8Rng,
    center: &[Complex64],
    r: f64,
) -> Vec<Complex64> {
    let dir = unit_sphere(rng, center.len());
    center
        .iter()
        .zip(dir.iter())
        .map(|(c, d)| c + d * r)
        .collect()
}
