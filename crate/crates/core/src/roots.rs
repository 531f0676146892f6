//! Univariate polynomial root finding with multiplicity recovery.
//!
//! Aberth-Ehrlich simultaneous iteration finds all roots; multiple roots come
//! back as clusters scattered at scale `noise^(1/m)`, so raw positions are
//! unreliable while cluster means and Taylor coefficients are stable. Roots at
//! the origin are deflated exactly through the coefficient valuation before
//! iterating.

use crate::error::{CoreError, Result};
use crate::poly::UniPoly;
use num_complex::Complex64;

/// Single-linkage radius for grouping scattered copies of a multiple root.
/// A root of multiplicity m under relative coefficient noise eps scatters at
/// scale eps^(1/m); 2e-3 covers m <= 4 at the 1e-13 trim level.
const CLUSTER_LINK_RADIUS: f64 = 2e-3;

/// Fallback fine radius when a coarse cluster fails the Taylor test.
const CLUSTER_FINE_RADIUS: f64 = 1e-6;

/// Relative threshold on Taylor coefficients when verifying a multiplicity.
const MULT_TAYLOR_REL: f64 = 1e-6;

/// Relative valuation threshold for exact deflation of origin roots.
const ORIGIN_VALUATION_REL: f64 = 1e-13;

const ABERTH_MAX_ITER: usize = 160;
const ABERTH_STEP_TOL: f64 = 1e-13;

/// A root together with its verified multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootMult {
    pub root: Complex64,
    pub multiplicity: usize,
}

/// All roots of `q` with modulus strictly below `radius`, with multiplicities.
///
/// The sum of returned multiplicities plus the number of exterior roots
/// equals `deg q`. The zero polynomial is rejected; callers must handle the
/// disc-inside-the-singularity case themselves.
pub fn roots_in_disc(q: &UniPoly, radius: f64) -> Result<Vec<RootMult>> {
    let all = roots_with_multiplicity(q)?;
    Ok(all
        .into_iter()
        .filter(|r| r.root.norm() < radius)
        .collect())
}

/// All roots of `q` in the plane, clustered into (position, multiplicity)
/// pairs sorted by real then imaginary part.
pub fn roots_with_multiplicity(q: &UniPoly) -> Result<Vec<RootMult>> {
    if q.is_zero() {
        return Err(CoreError::ZeroPolynomial {
            context: "root finding",
        });
    }
    let mut out = Vec::new();

    // Exact deflation of the root at the origin.
    let val = q.valuation(ORIGIN_VALUATION_REL).unwrap_or(0);
    if val > 0 {
        out.push(RootMult {
            root: Complex64::new(0.0, 0.0),
            multiplicity: val,
        });
    }
    let deflated = UniPoly::new(q.coeffs()[val..].to_vec());
    if deflated.degree() > 0 {
        let raw = aberth(&deflated);
        out.extend(cluster_roots(&deflated, raw));
    }
    out.sort_by(|a, b| {
        (a.root.re, a.root.im)
            .partial_cmp(&(b.root.re, b.root.im))
            .expect("finite roots")
    });
    Ok(out)
}

/// Aberth-Ehrlich iteration; returns one (possibly scattered) point per root.
fn aberth(q: &UniPoly) -> Vec<Complex64> {
    let d = q.degree();
    if d == 0 {
        return Vec::new();
    }
    let scale = q.coeffs().iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let p = q.scale(Complex64::new(1.0 / scale, 0.0));
    if d == 1 {
        return vec![-p.coeffs()[0] / p.coeffs()[1]];
    }
    let dp = p.derivative();

    // Fujiwara-type magnitude bound for the initial circle.
    let lead = p.coeffs()[d].norm();
    let mut r0 = 0.0f64;
    for (k, c) in p.coeffs().iter().enumerate().take(d) {
        let bound = (c.norm() / lead).powf(1.0 / (d - k) as f64);
        r0 = r0.max(bound);
    }
    let r0 = (r0).clamp(1e-3, 1e3);

    let mut z: Vec<Complex64> = (0..d)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / d as f64 + 0.3779;
            Complex64::from_polar(r0, theta)
        })
        .collect();

    for _ in 0..ABERTH_MAX_ITER {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let pi = p.eval(z[i]);
            let dpi = dp.eval(z[i]);
            if pi.norm() == 0.0 {
                continue;
            }
            let newton = if dpi.norm() > 0.0 {
                pi / dpi
            } else {
                // Derivative vanished; nudge off the critical point.
                Complex64::new(1e-8, 1e-8)
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = z[i] - zj;
                    if diff.norm_sqr() > 1e-60 {
                        repulsion += 1.0 / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-12 {
                newton / denom
            } else {
                newton
            };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < ABERTH_STEP_TOL {
            break;
        }
    }
    // Newton polish per root; multiple roots keep their scatter, which the
    // clustering stage resolves.
    for zi in z.iter_mut() {
        for _ in 0..2 {
            let pi = p.eval(*zi);
            let dpi = dp.eval(*zi);
            if dpi.norm() == 0.0 {
                break;
            }
            let step = pi / dpi;
            if !step.re.is_finite() || step.norm() >= 1e-3 * (1.0 + zi.norm()) {
                break;
            }
            *zi -= step;
        }
    }
    z
}

/// Magnitude scale of `q` evaluated near modulus `|mu|`, used to make Taylor
/// thresholds relative.
fn coeff_scale_at(q: &UniPoly, mu: Complex64) -> f64 {
    let m = mu.norm().max(1.0);
    let mut s = 0.0;
    let mut mk = 1.0;
    for c in q.coeffs() {
        s += c.norm() * mk;
        mk *= m;
    }
    s.max(f64::MIN_POSITIVE)
}

/// Group raw Aberth output into verified (root, multiplicity) pairs.
fn cluster_roots(q: &UniPoly, raw: Vec<Complex64>) -> Vec<RootMult> {
    let coarse = single_linkage(&raw, CLUSTER_LINK_RADIUS);
    let mut out = Vec::new();
    for group in coarse {
        resolve_cluster(q, &group, &mut out);
    }
    out
}

/// Decide the multiplicity structure inside one coarse cluster.
///
/// For each candidate multiplicity m (largest first) the cluster mean is
/// polished on the (m-1)-st derivative, where a true m-fold root is simple;
/// the Taylor test at the polished point then confirms or rejects m. This
/// keeps skewed Aberth scatter from biasing the derivative values.
fn resolve_cluster(q: &UniPoly, members: &[Complex64], out: &mut Vec<RootMult>) {
    let k = members.len();
    if k == 1 {
        out.push(RootMult {
            root: members[0],
            multiplicity: 1,
        });
        return;
    }
    let mean = members.iter().sum::<Complex64>() / k as f64;

    let mut derivs = Vec::with_capacity(k + 2);
    derivs.push(q.clone());
    for j in 0..=k {
        let d = derivs[j].derivative();
        derivs.push(d);
    }

    for m in (2..=k).rev() {
        if derivs[m].is_zero() {
            continue;
        }
        let center = newton_polish(&derivs[m - 1], mean, 6);
        if (center - mean).norm() > 0.05 {
            // Wandered off to an unrelated critical point.
            continue;
        }
        // All derivatives below m must vanish at the polished center up to
        // the evaluation noise scale; the largest such m wins.
        let small_ok = (0..m).all(|j| {
            derivs[j].eval(center).norm() <= MULT_TAYLOR_REL * coeff_scale_at(&derivs[j], center)
        });
        if small_ok {
            out.push(RootMult {
                root: center,
                multiplicity: m,
            });
            if m < k {
                // Remaining members are nearby distinct roots.
                let mut rest: Vec<Complex64> = members.to_vec();
                rest.sort_by(|a, b| {
                    (b - center)
                        .norm()
                        .partial_cmp(&(a - center).norm())
                        .expect("finite")
                });
                for r in rest.into_iter().take(k - m) {
                    out.push(RootMult {
                        root: r,
                        multiplicity: 1,
                    });
                }
            }
            return;
        }
    }

    // No verified multiple root: the members are genuinely distinct roots
    // that happen to be close. Fall back to fine-radius grouping.
    for fine in single_linkage(members, CLUSTER_FINE_RADIUS) {
        let m = fine.len();
        let center = fine.iter().sum::<Complex64>() / m as f64;
        out.push(RootMult {
            root: center,
            multiplicity: m,
        });
    }
}

fn newton_polish(q: &UniPoly, start: Complex64, iters: usize) -> Complex64 {
    let mut z = start;
    let dq = q.derivative();
    for _ in 0..iters {
        let f = q.eval(z);
        let df = dq.eval(z);
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        if !step.re.is_finite() || !step.im.is_finite() || step.norm() > 0.1 * (1.0 + z.norm()) {
            break;
        }
        z -= step;
    }
    z
}

/// Single-linkage grouping: points within `radius` of any group member join
/// the group. Deterministic given the input order after sorting.
fn single_linkage(points: &[Complex64], radius: f64) -> Vec<Vec<Complex64>> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("finite roots")
    });
    let mut assigned = vec![false; pts.len()];
    let mut groups = Vec::new();
    for i in 0..pts.len() {
        if assigned[i] {
            continue;
        }
        let mut group = vec![pts[i]];
        assigned[i] = true;
        let mut frontier = vec![pts[i]];
        while let Some(p) = frontier.pop() {
            for (j, other) in pts.iter().enumerate() {
                if !assigned[j] && (p - other).norm() <= radius {
                    assigned[j] = true;
                    group.push(*other);
                    frontier.push(*other);
                }
            }
        }
        groups.push(group);
    }
    groups
}
