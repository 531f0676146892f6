//! Exact one-dimensional theory on the unit disc.
//!
//! On the disc the Green function of any closed complex subspace is the
//! weighted sum of disc Green kernels over the zero set, which makes the
//! one-dimensional case an exact oracle: `disc_functional_value` turns the
//! pulled-back generators of an analytic disc into the number
//! `sum nu(a) log|a|` that certifies an upper bound at the disc center.

use crate::error::{CoreError, Result};
use crate::poly::UniPoly;
use crate::roots::{self, RootMult};
use crate::value::GreenValue;
use num_complex::Complex64;

/// Radius used when matching root clusters across pullback components.
/// Cluster centers are stable to well below this scale, so cross-component
/// coincidence at 1e-6 is unambiguous.
pub const CROSS_COMPONENT_RADIUS: f64 = 1e-6;

/// Merge radius for pole entries at construction.
const POLE_MERGE_RADIUS: f64 = 1e-9;

/// A finite weighted zero set `{(a_i, nu_i)}` inside the unit disc.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedZeroSet {
    entries: Vec<(Complex64, f64)>,
}

impl WeightedZeroSet {
    /// Build from `(point, weight)` pairs; points must lie strictly inside
    /// the unit disc and weights must be positive. Nearby duplicates are
    /// merged with weights summed.
    pub fn new(entries: impl IntoIterator<Item = (Complex64, f64)>) -> Result<WeightedZeroSet> {
        let mut merged: Vec<(Complex64, f64)> = Vec::new();
        for (a, nu) in entries {
            if a.norm() >= 1.0 {
                return Err(CoreError::Contract(format!(
                    "pole at |a| = {:.6} outside the open disc",
                    a.norm()
                )));
            }
            if nu <= 0.0 || !nu.is_finite() {
                return Err(CoreError::Contract(format!("non-positive weight {nu}")));
            }
            match merged
                .iter_mut()
                .find(|(b, _)| (b - a).norm() <= POLE_MERGE_RADIUS)
            {
                Some((_, w)) => *w += nu,
                None => merged.push((a, nu)),
            }
        }
        merged.sort_by(|x, y| {
            (x.0.re, x.0.im)
                .partial_cmp(&(y.0.re, y.0.im))
                .expect("finite poles")
        });
        Ok(WeightedZeroSet { entries: merged })
    }

    /// The empty zero set.
    pub fn empty() -> WeightedZeroSet {
        WeightedZeroSet {
            entries: Vec::new(),
        }
    }

    /// Entries sorted by position.
    pub fn entries(&self) -> &[(Complex64, f64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The Green kernel of the unit disc, `log |(z - w) / (1 - conj(w) z)|`.
///
/// Both arguments must lie in the open disc; the diagonal returns the
/// `-inf` sentinel.
pub fn green_kernel(z: Complex64, w: Complex64) -> Result<GreenValue> {
    if z.norm() >= 1.0 || w.norm() >= 1.0 {
        return Err(CoreError::Contract(format!(
            "green_kernel arguments must lie in the open disc (|z| = {:.6}, |w| = {:.6})",
            z.norm(),
            w.norm()
        )));
    }
    let num = z - w;
    if num.norm_sqr() == 0.0 {
        return Ok(GreenValue::MinusInf);
    }
    let den = Complex64::new(1.0, 0.0) - w.conj() * z;
    Ok(GreenValue::Finite(num.norm().ln() - den.norm().ln()))
}

/// Weighted kernel sum `sum nu_i G_D(z, a_i)`; the Green function of the
/// zero set evaluated at `z`.
pub fn green_1d_eval(set: &WeightedZeroSet, z: Complex64) -> Result<GreenValue> {
    if z.norm() >= 1.0 {
        return Err(CoreError::Contract(format!(
            "evaluation point |z| = {:.6} outside the open disc",
            z.norm()
        )));
    }
    let mut acc = 0.0f64;
    for &(a, nu) in &set.entries {
        match green_kernel(z, a)? {
            GreenValue::Finite(g) => acc += nu * g,
            GreenValue::MinusInf => return Ok(GreenValue::MinusInf),
        }
    }
    Ok(GreenValue::Finite(acc))
}

/// One root cluster shared across pullback components.
#[derive(Debug, Clone)]
struct CrossCluster {
    position: Complex64,
    total_weight: f64,
    /// Multiplicity contributed by each nonzero component (0 when absent).
    per_component: Vec<usize>,
}

/// Value of the disc functional `G_{f^*A}(0)` from the pulled-back
/// generators of a closed analytic disc.
///
/// Identically-zero components impose no constraint (the zero germ generates
/// nothing); the functional is `-inf` only when every component vanishes
/// identically (the disc lies inside the singular set) or when a common zero
/// sits at the origin.
pub fn disc_functional_value(pullbacks: &[UniPoly]) -> Result<GreenValue> {
    let nonzero: Vec<&UniPoly> = pullbacks.iter().filter(|q| !q.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(GreenValue::MinusInf);
    }

    // Interior roots per component.
    let mut component_roots: Vec<Vec<RootMult>> = Vec::with_capacity(nonzero.len());
    for q in &nonzero {
        if q.degree() == 0 {
            // Nonzero constant: no zeros anywhere, so no common zeros at all.
            return Ok(GreenValue::Finite(0.0));
        }
        component_roots.push(roots::roots_in_disc(q, 1.0)?);
    }

    // Cluster across components.
    let mut clusters: Vec<CrossCluster> = Vec::new();
    for (ci, roots) in component_roots.iter().enumerate() {
        for rm in roots {
            match clusters
                .iter_mut()
                .find(|cl| (cl.position - rm.root).norm() <= CROSS_COMPONENT_RADIUS)
            {
                Some(cl) => {
                    // Weighted running mean keeps the cluster position stable.
                    let w = rm.multiplicity as f64;
                    cl.position =
                        (cl.position * cl.total_weight + rm.root * w) / (cl.total_weight + w);
                    cl.total_weight += w;
                    cl.per_component[ci] += rm.multiplicity;
                }
                None => {
                    let mut per_component = vec![0usize; nonzero.len()];
                    per_component[ci] = rm.multiplicity;
                    clusters.push(CrossCluster {
                        position: rm.root,
                        total_weight: rm.multiplicity as f64,
                        per_component,
                    });
                }
            }
        }
    }

    let mut acc = 0.0f64;
    for cl in &clusters {
        let nu = *cl.per_component.iter().min().expect("nonzero components");
        if nu == 0 {
            continue;
        }
        let r = cl.position.norm();
        if r <= CROSS_COMPONENT_RADIUS {
            // Common zero at the disc center.
            return Ok(GreenValue::MinusInf);
        }
        acc += nu as f64 * r.ln();
    }
    Ok(GreenValue::Finite(acc))
}

/// The two sides of the Poisson-Jensen identity at the disc center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonJensen {
    /// `log |B(0)|` for the Blaschke product with the given zero data,
    /// evaluated as a complex product.
    pub lhs: GreenValue,
    /// `sum nu log |a|`, the weighted log-modulus sum.
    pub rhs: GreenValue,
}

/// Compare `log|B(0)|` of the Blaschke product built from integer zero data
/// against the weighted sum of `log|a|`. A pole at the origin makes both
/// sides the sentinel.
pub fn poisson_jensen_check(data: &WeightedZeroSet) -> Result<PoissonJensen> {
    for &(_, nu) in data.entries() {
        if (nu - nu.round()).abs() > 1e-12 || nu < 1.0 {
            return Err(CoreError::Contract(format!(
                "Blaschke data needs positive integer weights, got {nu}"
            )));
        }
    }
    if data.entries().iter().any(|(a, _)| a.norm_sqr() == 0.0) {
        return Ok(PoissonJensen {
            lhs: GreenValue::MinusInf,
            rhs: GreenValue::MinusInf,
        });
    }
    // B(0) = prod a_k^{mu_k} up to unimodular factors.
    let mut product = Complex64::new(1.0, 0.0);
    let mut log_sum = 0.0f64;
    for &(a, nu) in data.entries() {
        let mu = nu.round() as u32;
        product *= a.powu(mu);
        log_sum += nu * a.norm().ln();
    }
    Ok(PoissonJensen {
        lhs: GreenValue::Finite(product.norm().ln()),
        rhs: GreenValue::Finite(log_sum),
    })
}
