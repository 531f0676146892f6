//! Envelope optimization over closed analytic discs.
//!
//! The Green function is the infimum of the disc functional over contained
//! discs through the point. The optimizer searches three families:
//!
//! 1. random polynomial discs scaled into the domain,
//! 2. random "profile" discs carrying an exact common zero at a Möbius-type
//!    factor, refined by simplex descent over the factor parameters,
//! 3. structural starts: the diagonal disc and, when the ideal matches a
//!    closed-form model, its extremal-disc template.
//!
//! The objective is piecewise (multiplicity terms are integers), so all
//! refinement is derivative-free. Every returned value is a certified upper
//! bound backed by a witness disc.

use crate::disc::{
    evaluate_disc, evaluate_disc_closed, AnalyticDisc, GreenEstimate,
};
use crate::error::Result;
use crate::ideal::{DomainKind, IdealSpec};
use crate::models::{match_model, ModelId};
use crate::poly::UniPoly;
use crate::sampling;
use crate::simplex::nelder_mead;
use crate::value::GreenValue;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cell::{Cell, RefCell};

/// Relative headroom left by structural templates; keeps the sampled margin
/// strictly positive without disturbing the value beyond ~1e-8.
const TEMPLATE_MARGIN: f64 = 1e-9;

/// Truncation target for the template Möbius factor tail.
const TEMPLATE_TAIL: f64 = 1e-13;

/// Hard cap on the template factor degree.
const TEMPLATE_MAX_CAP: usize = 600;

/// Search configuration for [`optimize_envelope`].
#[derive(Debug, Clone)]
pub struct EnvelopeOptions {
    /// Degree cap for the random-draw disc families.
    pub degree: usize,
    /// Independent restarts (each gets its own derived random stream).
    pub restarts: usize,
    /// Disc-functional evaluations allowed per restart.
    pub budget: usize,
    /// Master seed; identical seeds reproduce results bit for bit.
    pub seed: u64,
    /// Inject structural starts (diagonal disc and model templates).
    pub use_templates: bool,
}

impl Default for EnvelopeOptions {
    fn default() -> Self {
        EnvelopeOptions {
            degree: 4,
            restarts: 64,
            budget: 400,
            seed: 0,
            use_templates: true,
        }
    }
}

/// Best certified upper bound for `G_A(x)` found within the search budget.
///
/// On the zero set the value is exactly `-inf`. Away from it, discs whose
/// pullback has a common zero at the disc center are perturbation artifacts
/// and are discarded; if no informative disc is found the trivial estimate 0
/// with a constant witness disc is returned.
pub fn optimize_envelope(
    a: &IdealSpec,
    x: &[Complex64],
    opts: &EnvelopeOptions,
) -> Result<GreenEstimate> {
    a.domain().check_interior(x)?;
    if a.on_zero_set(x)? {
        return Ok(GreenEstimate::exact(GreenValue::MinusInf, match_model(a)));
    }
    let vacuous = || GreenEstimate::upper_bound(
        GreenValue::Finite(0.0),
        AnalyticDisc::constant(x.to_vec()),
    );
    if opts.budget == 0 {
        return Ok(vacuous());
    }

    let mut best: Option<(f64, AnalyticDisc)> = None;
    let mut consider = |value: GreenValue, disc: AnalyticDisc, best: &mut Option<(f64, AnalyticDisc)>| {
        if let GreenValue::Finite(v) = value {
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                *best = Some((v, disc));
            }
        }
    };

    if opts.use_templates {
        for profile in structural_profiles(a) {
            if let Some(disc) = build_template_disc(a, x, &profile) {
                if let Ok(est) = evaluate_disc_closed(&disc, a) {
                    consider(est.value, disc, &mut best);
                }
            }
        }
    }

    for restart in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(10_000 + restart as u64);
        let mut remaining = opts.budget;
        if restart % 3 == 2 {
            run_free_restart(a, x, opts.degree, &mut rng, &mut remaining, &mut best, &mut consider);
        } else {
            run_profile_restart(a, x, opts.degree, &mut rng, &mut remaining, &mut best, &mut consider);
        }
    }

    Ok(match best {
        Some((v, disc)) => GreenEstimate::upper_bound(GreenValue::Finite(v), disc),
        None => vacuous(),
    })
}

/// One restart of the profile family: an exact common zero at `-b` with
/// per-component multiplicities, free shaping factors, and simplex descent
/// over `(b, shaping coefficients)`.
#[allow(clippy::too_many_arguments)]
fn run_profile_restart(
    a: &IdealSpec,
    x: &[Complex64],
    degree: usize,
    rng: &mut ChaCha8Rng,
    remaining: &mut usize,
    best: &mut Option<(f64, AnalyticDisc)>,
    consider: &mut impl FnMut(GreenValue, AnalyticDisc, &mut Option<(f64, AnalyticDisc)>),
) {
    let n = x.len();
    let degree = degree.max(1);
    // Random multiplicity profile, not identically zero on the nonzero
    // coordinates of x.
    let mut profile = vec![0u32; n];
    for _ in 0..12 {
        for d in profile.iter_mut() {
            *d = rng.gen_range(0..=degree.min(3) as u32);
        }
        if profile
            .iter()
            .zip(x.iter())
            .any(|(&d, xi)| d >= 1 && xi.norm() > 0.0)
        {
            break;
        }
    }

    // Feasible starting modulus for the common-zero parameter.
    let slack_load = 1.0 - 2.0 * crate::disc::CONTAINMENT_SLACK;
    let mut b_mod: f64 = 0.0;
    for (j, &d) in profile.iter().enumerate() {
        if d >= 1 && x[j].norm() > 0.0 {
            b_mod = b_mod.max((x[j].norm() / slack_load).powf(1.0 / d as f64));
        }
    }
    if b_mod == 0.0 || b_mod >= 0.98 {
        return;
    }
    let b0 = Complex64::from_polar(
        (b_mod * (1.0 + rng.gen_range(0.0..0.3))).min(0.97),
        rng.gen_range(0.0..std::f64::consts::TAU),
    );

    // Initial shaping: truncated binomial series of (1 + conj(b) zeta)^{-d}.
    let q0: Vec<Vec<Complex64>> = profile
        .iter()
        .map(|&d| {
            if d == 0 {
                return Vec::new();
            }
            let len = degree.saturating_sub(d as usize);
            let mut c = Vec::with_capacity(len);
            let mut binom = 1.0f64;
            let mut pow = Complex64::new(1.0, 0.0);
            for k in 1..=len {
                binom = binom * (d as f64 + k as f64 - 1.0) / k as f64;
                pow *= -b0.conj();
                c.push(pow * binom);
            }
            c
        })
        .collect();

    // Parameter vector: (Re b, Im b, shaping coefficients).
    let mut params = vec![b0.re, b0.im];
    for q in &q0 {
        for c in q {
            params.push(c.re);
            params.push(c.im);
        }
    }
    let shape_lens: Vec<usize> = q0.iter().map(|q| q.len()).collect();

    let profile_c = profile.clone();
    let x_c = x.to_vec();
    let build = move |p: &[f64]| -> Option<AnalyticDisc> {
        let b = Complex64::new(p[0], p[1]);
        if b.norm() < 0.01 || b.norm() > 0.985 {
            return None;
        }
        let mut idx = 2usize;
        let mut comps = Vec::with_capacity(x_c.len());
        for (j, &d) in profile_c.iter().enumerate() {
            if d == 0 || x_c[j].norm() == 0.0 {
                if d == 0 {
                    comps.push(UniPoly::constant(x_c[j]));
                } else {
                    comps.push(UniPoly::zero());
                }
                idx += 2 * shape_lens[j];
                continue;
            }
            // (1 + zeta/b)^d * (1 + shaping terms), constant term exactly x_j.
            let zero_factor = UniPoly::new(vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0) / b,
            ])
            .pow(d);
            let mut shape = vec![Complex64::new(1.0, 0.0)];
            for _ in 0..shape_lens[j] {
                shape.push(Complex64::new(p[idx], p[idx + 1]));
                idx += 2;
            }
            let poly = zero_factor.mul(&UniPoly::new(shape)).scale(x_c[j]);
            comps.push(poly);
        }
        Some(AnalyticDisc::from_component_polys(&comps))
    };

    let spent = Cell::new(0usize);
    let local_best: RefCell<Option<(f64, AnalyticDisc)>> = RefCell::new(None);
    {
        let mut objective = |p: &[f64]| -> f64 {
            if spent.get() >= *remaining {
                return f64::INFINITY;
            }
            let Some(disc) = build(p) else {
                return f64::INFINITY;
            };
            spent.set(spent.get() + 1);
            match evaluate_disc(&disc, a) {
                Ok(est) => match est.value {
                    GreenValue::Finite(v) => {
                        let mut lb = local_best.borrow_mut();
                        if lb.as_ref().is_none_or(|(bv, _)| v < *bv) {
                            *lb = Some((v, disc));
                        }
                        v
                    }
                    // A common zero at the disc center away from |A| is a
                    // perturbation artifact (the caller already handled
                    // points on the zero set).
                    GreenValue::MinusInf => f64::INFINITY,
                },
                Err(_) => f64::INFINITY,
            }
        };

        // Grow |b| until the disc fits, then refine.
        let mut probe = params.clone();
        let mut feasible = false;
        for _ in 0..24 {
            if objective(&probe).is_finite() {
                feasible = true;
                break;
            }
            let b = Complex64::new(probe[0], probe[1]) * 1.06;
            if b.norm() > 0.985 {
                break;
            }
            probe[0] = b.re;
            probe[1] = b.im;
        }
        if feasible && spent.get() < *remaining {
            let mut scale = vec![0.05; probe.len()];
            scale[0] = 0.02;
            scale[1] = 0.02;
            let left = *remaining - spent.get();
            nelder_mead(&mut objective, &probe, &scale, left, 1e-10);
        }
    }
    *remaining = remaining.saturating_sub(spent.get());
    if let Some((v, disc)) = local_best.into_inner() {
        consider(GreenValue::Finite(v), disc, best);
    }
}

/// One restart of the unstructured family: random coefficients scaled into
/// the domain, refined coordinate-free over all coefficients.
#[allow(clippy::too_many_arguments)]
fn run_free_restart(
    a: &IdealSpec,
    x: &[Complex64],
    degree: usize,
    rng: &mut ChaCha8Rng,
    remaining: &mut usize,
    best: &mut Option<(f64, AnalyticDisc)>,
    consider: &mut impl FnMut(GreenValue, AnalyticDisc, &mut Option<(f64, AnalyticDisc)>),
) {
    let n = x.len();
    let degree = degree.max(1);
    let raw: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..degree)
                .map(|k| sampling::complex_gaussian(rng) * 0.6f64.powi(k as i32))
                .collect()
        })
        .collect();
    let x_c = x.to_vec();
    let domain = a.domain();
    let build = move |p: &[f64]| -> AnalyticDisc {
        let mut coeffs: Vec<Vec<Complex64>> = Vec::with_capacity(x_c.len());
        let mut idx = 0usize;
        for _ in 0..x_c.len() {
            let c: Vec<Complex64> = (0..degree)
                .map(|_| {
                    let v = Complex64::new(p[idx], p[idx + 1]);
                    idx += 2;
                    v
                })
                .collect();
            coeffs.push(c);
        }
        // Rescale each component tail so the disc stays inside the domain.
        let headroom: Vec<f64> = match domain.kind {
            DomainKind::Polydisc => x_c
                .iter()
                .map(|xi| (1.0 - 2e-3 - xi.norm()).max(0.0))
                .collect(),
            DomainKind::Ball => {
                let r = x_c.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                let h = ((1.0 - 2e-3 - r) / (x_c.len() as f64).sqrt()).max(0.0);
                vec![h; x_c.len()]
            }
        };
        for (c, h) in coeffs.iter_mut().zip(headroom.iter()) {
            let total: f64 = c.iter().map(|v| v.norm()).sum();
            if total > *h {
                let s = h / total;
                for v in c.iter_mut() {
                    *v *= s;
                }
            }
        }
        AnalyticDisc::new(x_c.clone(), coeffs).expect("finite coefficients")
    };

    let mut params = Vec::with_capacity(2 * n * degree);
    for comp in &raw {
        for c in comp {
            params.push(c.re);
            params.push(c.im);
        }
    }

    let spent = Cell::new(0usize);
    let local_best: RefCell<Option<(f64, AnalyticDisc)>> = RefCell::new(None);
    {
        let mut objective = |p: &[f64]| -> f64 {
            if spent.get() >= *remaining {
                return f64::INFINITY;
            }
            let disc = build(p);
            spent.set(spent.get() + 1);
            match evaluate_disc(&disc, a) {
                Ok(est) => match est.value {
                    GreenValue::Finite(v) => {
                        let mut lb = local_best.borrow_mut();
                        if lb.as_ref().is_none_or(|(bv, _)| v < *bv) {
                            *lb = Some((v, disc));
                        }
                        v
                    }
                    GreenValue::MinusInf => f64::INFINITY,
                },
                Err(_) => f64::INFINITY,
            }
        };
        let first = objective(&params);
        if first.is_finite() && spent.get() < *remaining {
            let scale = vec![0.1; params.len()];
            let left = *remaining - spent.get();
            nelder_mead(&mut objective, &params, &scale, left, 1e-10);
        }
    }
    *remaining = remaining.saturating_sub(spent.get());
    if let Some((v, disc)) = local_best.into_inner() {
        consider(GreenValue::Finite(v), disc, best);
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The structural start library: the diagonal profile plus the matched
/// model's extremal-disc profile.
fn structural_profiles(a: &IdealSpec) -> Vec<Vec<u32>> {
    let n = a.domain().dim;
    let mut out = vec![vec![1u32; n]];
    if let Some(model) = match_model(a) {
        if let Some(p) = model_profile(&model, n) {
            if p != out[0] {
                out.push(p);
            }
        }
    }
    out
}

/// Monomial multiplicity profile of the paper-style extremal disc for each
/// model: component j is driven by the factor to the power `d_j`.
fn model_profile(model: &ModelId, n: usize) -> Option<Vec<u32>> {
    let mut profile = vec![0u32; n];
    match model {
        ModelId::IntroPair => {
            profile[0] = 1;
            profile[1] = 2;
        }
        ModelId::PolyPowers { nu, .. } => {
            let l = nu.iter().copied().fold(1u32, |acc, v| acc / gcd(acc, v) * v);
            for (k, &v) in nu.iter().enumerate() {
                profile[k] = l / v;
            }
        }
        ModelId::PolyZ1SqZ1Z2 { .. } => {
            profile[0] = 1;
            profile[1] = 1;
        }
        ModelId::PolyThreeAxes => {
            profile[0] = 1;
            profile[1] = 1;
            profile[2] = 1;
        }
        ModelId::BallCoords { p, .. } => {
            for d in profile.iter_mut().take(*p) {
                *d = 1;
            }
        }
        ModelId::BallZ1SqZ2 { .. } => {
            profile[0] = 1;
            profile[1] = 2;
        }
    }
    Some(profile)
}

/// The Möbius-type polynomial factor `t(zeta) = (1 + zeta/b) *
/// sum_{k<=cap} (-conj(b) zeta)^k`: `t(0) = 1` exactly, an exact zero at
/// `-b`, and `|t| <= (1 + |b|^{cap+1}) / |b|` on the unit circle. All other
/// roots have modulus `1/|b|`.
fn mobius_factor(b: Complex64, cap: usize) -> UniPoly {
    let mut geom = Vec::with_capacity(cap + 1);
    let mut pow = Complex64::new(1.0, 0.0);
    for _ in 0..=cap {
        geom.push(pow);
        pow *= -b.conj();
    }
    let linear = UniPoly::new(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0) / b]);
    linear.mul(&UniPoly::new(geom))
}

fn template_cap(b: f64) -> (usize, f64) {
    let cap = ((TEMPLATE_TAIL.ln() / b.ln()).ceil() as usize)
        .clamp(8, TEMPLATE_MAX_CAP);
    (cap, b.powi(cap as i32 + 1))
}

/// Build the boundary-touching extremal-style disc `f_j = x_j t^{d_j}` for a
/// multiplicity profile, with the smallest feasible factor modulus. Only a
/// hair of headroom is left, so the disc must be evaluated on the closed
/// containment path.
fn build_template_disc(a: &IdealSpec, x: &[Complex64], profile: &[u32]) -> Option<AnalyticDisc> {
    let active: Vec<usize> = (0..x.len())
        .filter(|&j| profile[j] >= 1 && x[j].norm() > 0.0)
        .collect();
    if active.is_empty() {
        return None;
    }

    let b = match a.domain().kind {
        DomainKind::Polydisc => {
            let b0 = active
                .iter()
                .map(|&j| x[j].norm().powf(1.0 / profile[j] as f64))
                .fold(0.0f64, f64::max);
            let (_, eps) = template_cap(b0.min(0.999));
            b0 * (1.0 + eps) * (1.0 + TEMPLATE_MARGIN)
        }
        DomainKind::Ball => {
            let tail_sq: f64 = (0..x.len())
                .filter(|j| !active.contains(j))
                .map(|j| x[j].norm_sqr())
                .sum();
            if tail_sq >= 1.0 {
                return None;
            }
            // Smallest b with sum_j |x_j|^2 (w/b^{d_j})^2 + tail <= 1.
            let load = |b: f64, w: f64| -> f64 {
                active
                    .iter()
                    .map(|&j| x[j].norm_sqr() * (w / b.powi(profile[j] as i32)).powi(2))
                    .sum::<f64>()
                    + tail_sq
            };
            let w_guess = 1.0 + TEMPLATE_MARGIN;
            let mut lo = 1e-6;
            let mut hi = 0.9999;
            if load(hi, w_guess) > 1.0 {
                return None;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if load(mid, w_guess) > 1.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let (_, eps) = template_cap(hi);
            // Fold the truncation inflation in and re-solve quickly.
            let w = (1.0 + eps) * (1.0 + TEMPLATE_MARGIN);
            let mut lo = 1e-6;
            let mut hi = 0.9999;
            if load(hi, w) > 1.0 {
                return None;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if load(mid, w) > 1.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            hi
        }
    };
    if !(0.0..0.9995).contains(&b) || b <= 0.0 {
        return None;
    }

    let (cap, _) = template_cap(b);
    let factor = mobius_factor(Complex64::new(b, 0.0), cap);
    let comps: Vec<UniPoly> = (0..x.len())
        .map(|j| {
            if profile[j] == 0 {
                UniPoly::constant(x[j])
            } else if x[j].norm() == 0.0 {
                UniPoly::zero()
            } else {
                factor.pow(profile[j]).scale(x[j])
            }
        })
        .collect();
    Some(AnalyticDisc::from_component_polys(&comps))
}
