//! Numerical membership checks for the defining class and Lelong numbers.
//!
//! A candidate Green function must be non-positive, plurisubharmonic, and
//! dominated by `log|psi| + C` with a locally uniform constant. Each property
//! becomes a seeded sampling check; the radial Lelong number is estimated
//! from slopes of sphere suprema against `log r`, where differencing
//! consecutive radii cancels the `O(1)` offset that the raw quotient
//! `sup / log r` retains.

use crate::error::{CoreError, Result};
use crate::green1d::{self, WeightedZeroSet};
use crate::ideal::{DomainKind, DomainSpec, IdealSpec};
use crate::sampling;
use crate::value::GreenValue;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Negativity tolerance: candidates may not exceed this at any sample.
pub const NEGATIVITY_TOL: f64 = 1e-12;

/// Anchors for the log-bound check must satisfy `|psi| <` this.
pub const ANCHOR_TOL: f64 = 1e-10;

/// The log-bound constant must move less than this across the two smallest
/// radii to count as stable.
pub const LOG_BOUND_STABILITY: f64 = 0.5;

type Evaluator = Arc<dyn Fn(&[Complex64]) -> GreenValue + Send + Sync>;

/// A candidate function: a deterministic evaluator on an open domain.
#[derive(Clone)]
pub struct FunctionHandle {
    domain: DomainSpec,
    label: String,
    evaluator: Evaluator,
}

impl std::fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("domain", &self.domain)
            .field("label", &self.label)
            .finish()
    }
}

impl FunctionHandle {
    pub fn new<F>(domain: DomainSpec, label: impl Into<String>, f: F) -> FunctionHandle
    where
        F: Fn(&[Complex64]) -> GreenValue + Send + Sync + 'static,
    {
        FunctionHandle {
            domain,
            label: label.into(),
            evaluator: Arc::new(f),
        }
    }

    pub fn from_arc(domain: DomainSpec, label: impl Into<String>, f: Evaluator) -> FunctionHandle {
        FunctionHandle {
            domain,
            label: label.into(),
            evaluator: f,
        }
    }

    /// The exact one-dimensional Green function of a weighted zero set.
    pub fn from_zero_set(set: WeightedZeroSet, label: impl Into<String>) -> FunctionHandle {
        FunctionHandle::new(DomainSpec::polydisc(1), label, move |z| {
            green1d::green_1d_eval(&set, z[0]).expect("interior evaluation")
        })
    }

    pub fn domain(&self) -> DomainSpec {
        self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn evaluator(&self) -> Evaluator {
        self.evaluator.clone()
    }

    pub fn eval(&self, z: &[Complex64]) -> GreenValue {
        (self.evaluator)(z)
    }

    /// A scaled copy `c * u`.
    pub fn scaled(&self, c: f64) -> FunctionHandle {
        let inner = self.evaluator.clone();
        FunctionHandle::new(self.domain, format!("{} * {c}", self.label), move |z| {
            inner(z).scale(c)
        })
    }
}

/// Outcome of the negativity check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NegativityReport {
    pub pass: bool,
    pub max_value: f64,
    pub samples: usize,
}

/// Sample interior points and verify `u <= NEGATIVITY_TOL` everywhere.
pub fn check_negative(u: &FunctionHandle, samples: usize, seed: u64) -> Result<NegativityReport> {
    if samples < 100 {
        return Err(CoreError::Contract(format!(
            "negativity check needs at least 100 samples, got {samples}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_value = f64::NEG_INFINITY;
    for _ in 0..samples {
        let z = sampling::interior_point(&mut rng, &u.domain, 1e-4);
        if let GreenValue::Finite(v) = u.eval(&z) {
            max_value = max_value.max(v);
        }
    }
    Ok(NegativityReport {
        pass: max_value <= NEGATIVITY_TOL,
        max_value,
        samples,
    })
}

/// A sub-mean-value violation found on a sampled circle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PshViolation {
    pub center_value: f64,
    pub circle_average: f64,
    pub radius: f64,
    pub excess: f64,
}

/// Outcome of the line-restriction plurisubharmonicity check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PshReport {
    pub pass: bool,
    pub lines: usize,
    pub circles_checked: usize,
    pub circles_skipped: usize,
    pub max_excess: f64,
    pub violations: Vec<PshViolation>,
}

/// Check the sub-mean-value inequality of `u` along random complex lines:
/// `u(c) <= (circle average at radius r) + tol` for each requested radius,
/// auto-shrunk to stay inside the domain. Circles hitting a `-inf` sample
/// are skipped as non-informative (singular hits have measure zero).
pub fn check_psh_lines(
    u: &FunctionHandle,
    lines: usize,
    circle_points: usize,
    radii: &[f64],
    tol: f64,
    seed: u64,
) -> Result<PshReport> {
    if circle_points < 16 {
        return Err(CoreError::Contract(
            "psh check needs at least 16 circle points".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0usize;
    let mut skipped = 0usize;
    let mut max_excess = 0.0f64;
    let mut violations = Vec::new();

    for _ in 0..lines {
        let center = sampling::interior_point(&mut rng, &u.domain, 0.05);
        let dir = sampling::unit_sphere(&mut rng, u.domain.dim);
        let center_value = match u.eval(&center) {
            GreenValue::Finite(v) => v,
            GreenValue::MinusInf => continue, // trivially sub-mean
        };
        // Largest parameter radius keeping the whole circle inside.
        let max_r = match u.domain.kind {
            DomainKind::Polydisc => center
                .iter()
                .zip(dir.iter())
                .map(|(c, v)| {
                    if v.norm() < 1e-12 {
                        f64::INFINITY
                    } else {
                        (1.0 - c.norm()) / v.norm()
                    }
                })
                .fold(f64::INFINITY, f64::min),
            DomainKind::Ball => {
                1.0 - center.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
            }
        };
        for &r in radii {
            let r_eff = r.min(0.9 * max_r);
            if r_eff < 1e-8 {
                skipped += 1;
                continue;
            }
            let mut sum = 0.0f64;
            let mut singular = false;
            for k in 0..circle_points {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / circle_points as f64;
                let rot = Complex64::from_polar(r_eff, theta);
                let z: Vec<Complex64> = center
                    .iter()
                    .zip(dir.iter())
                    .map(|(c, v)| c + rot * v)
                    .collect();
                match u.eval(&z) {
                    GreenValue::Finite(v) => sum += v,
                    GreenValue::MinusInf => {
                        singular = true;
                        break;
                    }
                }
            }
            if singular {
                skipped += 1;
                continue;
            }
            checked += 1;
            let average = sum / circle_points as f64;
            let excess = center_value - average - tol;
            if excess > 0.0 {
                max_excess = max_excess.max(excess);
                violations.push(PshViolation {
                    center_value,
                    circle_average: average,
                    radius: r_eff,
                    excess,
                });
            }
        }
    }
    Ok(PshReport {
        pass: violations.is_empty(),
        lines,
        circles_checked: checked,
        circles_skipped: skipped,
        max_excess,
        violations,
    })
}

/// Outcome of the uniform log-bound check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogBoundReport {
    pub pass: bool,
    /// Estimated uniform constant: `max (u - log|psi|)` over all annuli.
    pub c_estimate: f64,
    /// Per-radius maxima, largest radius first.
    pub per_radius: Vec<(f64, f64)>,
    pub samples_used: usize,
}

/// Estimate the constant in `u <= log|psi| + C` on annuli shrinking toward
/// anchor points of the zero set; pass when the constant is finite and
/// stable across the two smallest radii.
pub fn check_log_bound(
    u: &FunctionHandle,
    a: &IdealSpec,
    anchors: &[Vec<Complex64>],
    radii: &[f64],
    samples: usize,
    seed: u64,
) -> Result<LogBoundReport> {
    if anchors.is_empty() || radii.len() < 2 {
        return Err(CoreError::Contract(
            "log-bound check needs anchors and at least two radii".into(),
        ));
    }
    for anchor in anchors {
        let norm = a.generator_norm(anchor)?;
        if norm >= ANCHOR_TOL {
            return Err(CoreError::Contract(format!(
                "anchor is not on the zero set: |psi| = {norm:.3e}"
            )));
        }
    }
    let mut radii_sorted = radii.to_vec();
    radii_sorted.sort_by(|x, y| y.total_cmp(x));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_radius = Vec::with_capacity(radii_sorted.len());
    let mut used_total = 0usize;
    for &r in &radii_sorted {
        let mut c_r = f64::NEG_INFINITY;
        for anchor in anchors {
            for _ in 0..samples {
                let z = sampling::sphere_point(&mut rng, anchor, r);
                if u.domain.boundary_gap(&z) <= 0.0 {
                    continue;
                }
                let psi = a.generator_norm(&z)?;
                if psi == 0.0 {
                    continue;
                }
                if let GreenValue::Finite(v) = u.eval(&z) {
                    c_r = c_r.max(v - psi.ln());
                    used_total += 1;
                }
            }
        }
        per_radius.push((r, c_r));
    }
    if used_total == 0 {
        return Err(CoreError::Inconclusive(
            "no valid annulus samples for the log bound".into(),
        ));
    }
    let n = per_radius.len();
    let last = per_radius[n - 1].1;
    let prev = per_radius[n - 2].1;
    let stable = last.is_finite() && prev.is_finite() && (last - prev).abs() < LOG_BOUND_STABILITY;
    let c_estimate = per_radius
        .iter()
        .map(|&(_, c)| c)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(LogBoundReport {
        pass: stable && c_estimate.is_finite(),
        c_estimate,
        per_radius,
        samples_used: used_total,
    })
}

/// Radial Lelong-number estimate at a point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LelongReport {
    /// The base point, as (re, im) pairs.
    pub point: Vec<(f64, f64)>,
    /// Strictly decreasing radii.
    pub radii: Vec<f64>,
    /// Sphere suprema of `u` at each radius (`-inf` when every sample is
    /// singular).
    pub sup_values: Vec<f64>,
    /// Slopes of `sup` against `log r`: the leading entry is the raw quotient
    /// at the largest radius, later entries are difference quotients between
    /// consecutive radii.
    pub slope_estimates: Vec<f64>,
    /// The last slope, the Lelong-number estimate (`+inf` when `u` is
    /// identically `-inf` near the point).
    pub final_slope: f64,
    /// Whether the last two slopes agree to 0.05.
    pub stable: bool,
}

/// Estimate the Lelong number `lim sup_{|x-a|<=r} u / log r` by sampling
/// sphere suprema at decreasing radii. The same direction sample is reused
/// at every radius, so the sup deficit cancels in the difference quotients.
pub fn lelong_radial(
    u: &FunctionHandle,
    a: &[Complex64],
    radii: &[f64],
    sphere_samples: usize,
    seed: u64,
) -> Result<LelongReport> {
    u.domain.check_interior(a)?;
    if radii.len() < 2 {
        return Err(CoreError::Contract(
            "lelong_radial needs at least two radii".into(),
        ));
    }
    for w in radii.windows(2) {
        if w[1] >= w[0] {
            return Err(CoreError::Contract("radii must strictly decrease".into()));
        }
    }
    if *radii.last().unwrap() < 1e-6 {
        return Err(CoreError::Contract(
            "smallest lelong radius must stay >= 1e-6".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs: Vec<Vec<Complex64>> = (0..sphere_samples.max(64))
        .map(|_| sampling::unit_sphere(&mut rng, u.domain.dim))
        .collect();

    let mut sup_values = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut sup = f64::NEG_INFINITY;
        for dir in &dirs {
            let z: Vec<Complex64> = a.iter().zip(dir.iter()).map(|(c, d)| c + d * r).collect();
            if u.domain.boundary_gap(&z) <= 0.0 {
                continue;
            }
            if let GreenValue::Finite(v) = u.eval(&z) {
                sup = sup.max(v);
            }
        }
        sup_values.push(sup);
    }

    let identically_singular = sup_values.iter().all(|s| *s == f64::NEG_INFINITY);
    let mut slopes = Vec::with_capacity(radii.len());
    if identically_singular {
        slopes.push(f64::INFINITY);
    } else {
        slopes.push(sup_values[0] / radii[0].ln());
        for k in 1..radii.len() {
            let dlog = radii[k].ln() - radii[k - 1].ln();
            slopes.push((sup_values[k] - sup_values[k - 1]) / dlog);
        }
    }
    let final_slope = *slopes.last().unwrap();
    let stable = slopes.len() >= 2 && {
        let prev = slopes[slopes.len() - 2];
        (final_slope - prev).abs() <= 0.05 || (final_slope == prev)
    };
    Ok(LelongReport {
        point: a.iter().map(|c| (c.re, c.im)).collect(),
        radii: radii.to_vec(),
        sup_values,
        slope_estimates: slopes,
        final_slope,
        stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelId;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn log_z1_handle() -> FunctionHandle {
        FunctionHandle::new(DomainSpec::polydisc(2), "log|z1|", |z| {
            if z[0].norm_sqr() == 0.0 {
                GreenValue::MinusInf
            } else {
                GreenValue::Finite(z[0].norm().ln())
            }
        })
    }

    #[test]
    fn negativity_passes_on_oracle() {
        let u = ModelId::IntroPair.handle();
        let r = check_negative(&u, 500, 1).unwrap();
        assert!(r.pass, "max value {}", r.max_value);
    }

    #[test]
    fn negativity_fails_on_positive_constant() {
        let u = FunctionHandle::new(DomainSpec::polydisc(2), "+0.1", |_| {
            GreenValue::Finite(0.1)
        });
        let r = check_negative(&u, 200, 2).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn negativity_passes_on_coordinate_log() {
        let r = check_negative(&log_z1_handle(), 300, 3).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn psh_passes_on_pluriharmonic_log() {
        let r = check_psh_lines(&log_z1_handle(), 100, 256, &[0.05, 0.1, 0.2], 1e-7, 4).unwrap();
        assert!(r.pass, "violations: {:?}", r.violations.first());
    }

    #[test]
    fn psh_fails_on_superharmonic_square() {
        // u = -|z|^2 has circle averages strictly below the center value.
        let u = FunctionHandle::new(DomainSpec::polydisc(2), "-|z|^2", |z| {
            GreenValue::Finite(-z.iter().map(|c| c.norm_sqr()).sum::<f64>())
        });
        let r = check_psh_lines(&u, 50, 256, &[0.05, 0.1], 1e-7, 5).unwrap();
        assert!(!r.pass);
        assert!(r.max_excess > 0.0);
    }

    #[test]
    fn psh_passes_on_three_axes_oracle() {
        let u = ModelId::PolyThreeAxes.handle();
        let r = check_psh_lines(&u, 100, 256, &[0.05, 0.1, 0.2], 1e-7, 6).unwrap();
        assert!(r.pass, "violations: {:?}", r.violations.first());
    }

    #[test]
    fn log_bound_holds_for_intro_oracle() {
        let m = ModelId::IntroPair;
        let u = m.handle();
        let a = m.ideal();
        let anchors = vec![vec![re(0.0), re(0.0)]];
        let radii = [1e-1, 1e-2, 1e-3, 1e-4];
        let r = check_log_bound(&u, &a, &anchors, &radii, 400, 7).unwrap();
        assert!(r.pass, "report: {r:?}");
        // max(2a, b) vs (1/2)log(|z1|^4 + |z2|^2): within [-(log 2)/2, 0].
        assert!(r.c_estimate <= 1e-6, "C = {}", r.c_estimate);
        assert!(r.c_estimate >= -0.5 * 2.0f64.ln() - 1e-6);

        // Halving the candidate weakens the pole to square-root type, so the
        // difference against log|psi| drifts and the check must fail.
        let half = u.scaled(0.5);
        let r2 = check_log_bound(&half, &a, &anchors, &radii, 400, 7).unwrap();
        assert!(!r2.pass, "report: {r2:?}");
    }

    #[test]
    fn log_bound_fails_for_square_root_singularity() {
        // u = (1/2) log|psi| drifts away from log|psi| near the zero set.
        let m = ModelId::IntroPair;
        let a = m.ideal();
        let ideal = a.clone();
        let u = FunctionHandle::new(DomainSpec::polydisc(2), "half-log-psi", move |z| {
            let n = ideal.generator_norm(z).expect("dim ok");
            if n == 0.0 {
                GreenValue::MinusInf
            } else {
                GreenValue::Finite(0.5 * n.ln())
            }
        });
        let anchors = vec![vec![re(0.0), re(0.0)]];
        let radii = [1e-1, 1e-2, 1e-3, 1e-4];
        let r = check_log_bound(&u, &a, &anchors, &radii, 400, 8).unwrap();
        assert!(!r.pass, "report: {r:?}");
    }

    #[test]
    fn log_bound_rejects_off_set_anchor() {
        let m = ModelId::IntroPair;
        let u = m.handle();
        let a = m.ideal();
        let anchors = vec![vec![re(0.2), re(0.3)]];
        assert!(check_log_bound(&u, &a, &anchors, &[1e-1, 1e-2], 50, 9).is_err());
    }

    #[test]
    fn lelong_of_single_log_pole_is_one_exactly() {
        let set = WeightedZeroSet::new([(re(0.0), 1.0)]).unwrap();
        let u = FunctionHandle::from_zero_set(set, "log|z|");
        let radii = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
        let r = lelong_radial(&u, &[re(0.0)], &radii, 128, 10).unwrap();
        // G_D(z, 0) = log|z| exactly, so every slope is exactly 1.
        for s in &r.slope_estimates {
            assert!((s - 1.0).abs() < 1e-9, "slope {s}");
        }
        assert!((r.final_slope - 1.0).abs() < 1e-9);
        assert!(r.stable);
    }

    #[test]
    fn lelong_matches_nu_tilde_on_oracles() {
        let intro = ModelId::IntroPair;
        let radii = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
        let r = lelong_radial(&intro.handle(), &[re(0.0), re(0.0)], &radii, 4096, 11).unwrap();
        assert!((r.final_slope - 1.0).abs() < 0.05, "intro slope {}", r.final_slope);

        let axes = ModelId::PolyThreeAxes;
        let r = lelong_radial(
            &axes.handle(),
            &[re(0.0), re(0.0), re(0.0)],
            &radii,
            4096,
            12,
        )
        .unwrap();
        assert!((r.final_slope - 2.0).abs() < 0.05, "axes slope {}", r.final_slope);
    }

    #[test]
    fn lelong_scaling_covariance() {
        let u = ModelId::IntroPair.handle();
        let radii = [1e-2, 1e-3, 1e-4, 1e-5];
        let base = lelong_radial(&u, &[re(0.0), re(0.0)], &radii, 2048, 13)
            .unwrap()
            .final_slope;
        for c in [0.5, 2.0] {
            let scaled = lelong_radial(&u.scaled(c), &[re(0.0), re(0.0)], &radii, 2048, 13)
                .unwrap()
                .final_slope;
            assert!((scaled - c * base).abs() < 0.01, "c = {c}: {scaled} vs {base}");
        }
    }

    #[test]
    fn lelong_of_identically_singular_function_is_plus_inf() {
        let u = FunctionHandle::new(DomainSpec::polydisc(1), "-inf", |_| GreenValue::MinusInf);
        let r = lelong_radial(&u, &[re(0.0)], &[1e-2, 1e-3], 64, 14).unwrap();
        assert_eq!(r.final_slope, f64::INFINITY);
    }
}
