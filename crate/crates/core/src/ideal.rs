//! Ideal specifications: a domain plus a polynomial generator tuple.
//!
//! Houses the singularity data `A`: the minimal vanishing order `nu_tilde`,
//! pullbacks along analytic discs and along coordinate power maps, and the
//! randomized generator-count reduction with its empirical equivalence
//! certificate.

use crate::disc::AnalyticDisc;
use crate::error::{CoreError, Result};
use crate::poly::{MultiPoly, UniPoly, VanishingOrder};
use crate::sampling;
use crate::simplex::nelder_mead;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Supported domains: the unit polydisc and the unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Polydisc,
    Ball,
}

/// The ambient domain of an ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub dim: usize,
}

impl DomainSpec {
    pub fn polydisc(dim: usize) -> DomainSpec {
        DomainSpec {
            kind: DomainKind::Polydisc,
            dim,
        }
    }

    pub fn ball(dim: usize) -> DomainSpec {
        DomainSpec {
            kind: DomainKind::Ball,
            dim,
        }
    }

    /// Distance-to-boundary gauge: `1 - max_j |z_j|` on the polydisc,
    /// `1 - |z|` on the ball. Positive iff the point is interior.
    pub fn boundary_gap(&self, z: &[Complex64]) -> f64 {
        match self.kind {
            DomainKind::Polydisc => {
                1.0 - z.iter().map(|c| c.norm()).fold(0.0f64, f64::max)
            }
            DomainKind::Ball => 1.0 - z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
        }
    }

    /// Check the point dimension and interior membership.
    pub fn check_interior(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim,
                got: z.len(),
            });
        }
        if self.boundary_gap(z) <= 0.0 {
            return Err(CoreError::Contract(format!(
                "point lies outside the open domain (gap {:.3e})",
                self.boundary_gap(z)
            )));
        }
        Ok(())
    }

    /// Check the point dimension and closed-domain membership.
    pub fn check_closed(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.dim,
                got: z.len(),
            });
        }
        if self.boundary_gap(z) < -1e-12 {
            return Err(CoreError::Contract(format!(
                "point lies outside the closed domain (gap {:.3e})",
                self.boundary_gap(z)
            )));
        }
        Ok(())
    }
}

/// A complex subspace of the domain, described by global polynomial
/// generators of its ideal sheaf.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealSpec {
    domain: DomainSpec,
    generators: Vec<MultiPoly>,
}

impl IdealSpec {
    /// Build and validate: at least one generator, none identically zero,
    /// all in the domain dimension.
    pub fn new(domain: DomainSpec, generators: Vec<MultiPoly>) -> Result<IdealSpec> {
        if generators.is_empty() {
            return Err(CoreError::Contract(
                "an ideal needs at least one generator".into(),
            ));
        }
        for g in &generators {
            if g.n_vars() != domain.dim {
                return Err(CoreError::DimensionMismatch {
                    expected: domain.dim,
                    got: g.n_vars(),
                });
            }
            if g.is_zero() {
                return Err(CoreError::ZeroPolynomial {
                    context: "ideal generator",
                });
            }
        }
        Ok(IdealSpec { domain, generators })
    }

    pub fn domain(&self) -> DomainSpec {
        self.domain
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    /// Default vanishing-order search bound: twice the maximal generator
    /// degree (polynomial orders cannot exceed the degree).
    pub fn max_order(&self) -> u32 {
        2 * self
            .generators
            .iter()
            .map(|g| g.total_degree())
            .max()
            .unwrap_or(1)
            .max(1)
    }

    /// Euclidean norm of the generator tuple at a point.
    pub fn generator_norm(&self, z: &[Complex64]) -> Result<f64> {
        let mut s = 0.0;
        for g in &self.generators {
            s += g.eval(z)?.norm_sqr();
        }
        Ok(s.sqrt())
    }

    /// `nu_tilde(x)`: the minimal vanishing order of the generators at `x`,
    /// which is the Lelong number of `log|psi|` there. Zero when some
    /// generator does not vanish.
    pub fn nu_tilde(&self, x: &[Complex64]) -> Result<VanishingOrder> {
        self.domain.check_closed(x)?;
        let max_order = self.max_order();
        let mut acc = VanishingOrder::Infinite;
        for g in &self.generators {
            acc = acc.min(g.vanishing_order(x, max_order)?);
            if acc == VanishingOrder::Finite(0) {
                break;
            }
        }
        Ok(acc)
    }

    /// True iff `x` lies on the common zero set `|A|`.
    pub fn on_zero_set(&self, x: &[Complex64]) -> Result<bool> {
        Ok(self.nu_tilde(x)?.is_positive())
    }

    /// Pull the generators back along an analytic disc. Identically-zero
    /// pullbacks are retained as zero polynomials, which is their flag.
    pub fn pullback_disc(&self, f: &AnalyticDisc) -> Result<Vec<UniPoly>> {
        if f.dim() != self.domain.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.domain.dim,
                got: f.dim(),
            });
        }
        let comps = f.component_polys();
        self.generators.iter().map(|g| g.compose(&comps)).collect()
    }

    /// Pull the ideal back along a coordinate power map: each generator
    /// `psi(z)` becomes `psi(z_1^{k_1}, ..., z_n^{k_n})`.
    pub fn pullback_map(&self, map: &ProperMapSpec) -> Result<IdealSpec> {
        if map.exponents.len() != self.domain.dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.domain.dim,
                got: map.exponents.len(),
            });
        }
        let generators = self
            .generators
            .iter()
            .map(|g| g.power_substitute(&map.exponents))
            .collect::<Result<Vec<_>>>()?;
        IdealSpec::new(self.domain, generators)
    }

    /// Randomized generator reduction: draw `target_k` generic linear
    /// combinations of the generators and certify `log|psi| ~ log|xi|`
    /// empirically on a probe grid accumulating near the zero set.
    ///
    /// Retries up to `trials` draws and returns the draw with the smallest
    /// maximal log-difference. Deterministic given `seed`.
    pub fn reduce_generators(
        &self,
        target_k: usize,
        trials: usize,
        seed: u64,
        probe: &ProbeSpec,
    ) -> Result<(IdealSpec, ReduceReport)> {
        let m = self.generators.len();
        if target_k < 1 || target_k > m {
            return Err(CoreError::Contract(format!(
                "target_k = {target_k} outside 1..={m}"
            )));
        }
        let trials = trials.max(1);
        let probes = self.probe_points(probe, seed)?;
        if probes.is_empty() {
            return Err(CoreError::Inconclusive(
                "no probe points inside the domain".into(),
            ));
        }

        let psi_norms: Vec<f64> = probes
            .iter()
            .map(|x| self.generator_norm(x))
            .collect::<Result<Vec<_>>>()?;

        let mut best: Option<(IdealSpec, ReduceReport)> = None;
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(1000 + trial as u64);
            // Row-normalized complex Gaussian combination matrix.
            let rows: Vec<Vec<Complex64>> = (0..target_k)
                .map(|_| {
                    let row: Vec<Complex64> =
                        (0..m).map(|_| sampling::complex_gaussian(&mut rng)).collect();
                    let norm = row.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                    row.into_iter().map(|c| c / norm).collect()
                })
                .collect();
            let xi: Vec<MultiPoly> = rows
                .iter()
                .map(|row| {
                    let mut acc = MultiPoly::zero(self.domain.dim);
                    for (c, g) in row.iter().zip(self.generators.iter()) {
                        acc = acc.add(&g.scale(*c))?;
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<_>>>()?;
            if xi.iter().any(|g| g.is_zero()) {
                continue;
            }
            let reduced = IdealSpec::new(self.domain, xi)?;

            let mut max_diff = 0.0f64;
            let mut sum_diff = 0.0f64;
            let mut used = 0usize;
            let mut min_xi = f64::INFINITY;
            for (x, &psi_norm) in probes.iter().zip(psi_norms.iter()) {
                let xi_norm = reduced.generator_norm(x)?;
                if psi_norm == 0.0 && xi_norm == 0.0 {
                    continue;
                }
                if psi_norm == 0.0 || xi_norm == 0.0 {
                    max_diff = f64::INFINITY;
                    used += 1;
                    continue;
                }
                let diff = (psi_norm.ln() - xi_norm.ln()).abs();
                max_diff = max_diff.max(diff);
                sum_diff += diff;
                min_xi = min_xi.min(xi_norm);
                used += 1;
            }
            if used == 0 {
                continue;
            }
            let declared_bound = 20.0 + min_xi.ln().abs();
            let report = ReduceReport {
                success: max_diff.is_finite() && max_diff <= declared_bound,
                max_log_diff: max_diff,
                mean_log_diff: sum_diff / used as f64,
                declared_bound,
                probes_used: used,
                trial_index: trial,
                trials,
                target_k,
            };
            let better = match &best {
                None => true,
                Some((_, b)) => report.max_log_diff < b.max_log_diff,
            };
            if better {
                best = Some((reduced, report));
            }
        }
        best.ok_or_else(|| CoreError::Inconclusive("all reduction draws degenerated".into()))
    }

    /// Probe points near `|A|`: anchors found by minimizing `|psi|` from
    /// random interior starts, then offsets at the probe radii in random
    /// directions.
    pub fn probe_points(&self, probe: &ProbeSpec, seed: u64) -> Result<Vec<Vec<Complex64>>> {
        let n = self.domain.dim;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(7);
        let mut anchors: Vec<Vec<Complex64>> = Vec::with_capacity(probe.anchors);
        for _ in 0..probe.anchors {
            let start = sampling::interior_point(&mut rng, &self.domain, 0.25);
            let x0: Vec<f64> = start.iter().flat_map(|c| [c.re, c.im]).collect();
            let mut objective = |x: &[f64]| -> f64 {
                let z: Vec<Complex64> = x
                    .chunks(2)
                    .map(|p| Complex64::new(p[0], p[1]))
                    .collect();
                if self.domain.boundary_gap(&z) < 0.05 {
                    return f64::INFINITY;
                }
                self.generator_norm(&z).map_or(f64::INFINITY, |v| v * v)
            };
            let coarse = nelder_mead(&mut objective, &x0, &vec![0.2; 2 * n], 500, 1e-24);
            let fine = nelder_mead(&mut objective, &coarse.x, &vec![1e-3; 2 * n], 300, 1e-30);
            let anchor: Vec<Complex64> = fine
                .x
                .chunks(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect();
            anchors.push(anchor);
        }

        let radii: Vec<f64> = probe.log_radii.iter().map(|lr| lr.exp()).collect();
        let mut points = Vec::with_capacity(anchors.len() * probe.directions * radii.len());
        for anchor in &anchors {
            for _ in 0..probe.directions {
                let dir = sampling::unit_sphere(&mut rng, n);
                for &r in &radii {
                    let p: Vec<Complex64> = anchor
                        .iter()
                        .zip(dir.iter())
                        .map(|(a, d)| a + d * r)
                        .collect();
                    if self.domain.boundary_gap(&p) > 0.0 {
                        points.push(p);
                    }
                }
            }
        }
        Ok(points)
    }
}

/// A coordinate power map `Phi(z) = (z_1^{k_1}, ..., z_n^{k_n})`, a finite
/// branched covering of the polydisc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperMapSpec {
    exponents: Vec<u32>,
}

impl ProperMapSpec {
    /// Exponents must all be at least 1.
    pub fn new(exponents: Vec<u32>) -> Result<ProperMapSpec> {
        if exponents.is_empty() || exponents.contains(&0) {
            return Err(CoreError::Contract(
                "proper map exponents must be positive".into(),
            ));
        }
        Ok(ProperMapSpec { exponents })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Apply the map.
    pub fn apply(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        if z.len() != self.exponents.len() {
            return Err(CoreError::DimensionMismatch {
                expected: self.exponents.len(),
                got: z.len(),
            });
        }
        Ok(z.iter()
            .zip(self.exponents.iter())
            .map(|(zi, &k)| zi.powu(k))
            .collect())
    }

    /// The full fiber over `x`: the Cartesian product of the `k_j`-th roots
    /// of each coordinate. Has `k_1 * ... * k_n` points (with coincidences
    /// at zero coordinates).
    pub fn fiber(&self, x: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
        if x.len() != self.exponents.len() {
            return Err(CoreError::DimensionMismatch {
                expected: self.exponents.len(),
                got: x.len(),
            });
        }
        let per_coord: Vec<Vec<Complex64>> = x
            .iter()
            .zip(self.exponents.iter())
            .map(|(xi, &k)| nth_roots(*xi, k))
            .collect();
        let mut fiber: Vec<Vec<Complex64>> = vec![Vec::new()];
        for roots in &per_coord {
            let mut next = Vec::with_capacity(fiber.len() * roots.len());
            for prefix in &fiber {
                for r in roots {
                    let mut p = prefix.clone();
                    p.push(*r);
                    next.push(p);
                }
            }
            fiber = next;
        }
        Ok(fiber)
    }
}

/// All `k`-th roots of a complex number.
fn nth_roots(x: Complex64, k: u32) -> Vec<Complex64> {
    if x.norm_sqr() == 0.0 {
        return vec![Complex64::new(0.0, 0.0); k as usize];
    }
    let r = x.norm().powf(1.0 / k as f64);
    let theta = x.arg();
    (0..k)
        .map(|l| {
            Complex64::from_polar(r, (theta + 2.0 * std::f64::consts::PI * l as f64) / k as f64)
        })
        .collect()
}

/// Probe-grid shape for generator reduction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeSpec {
    /// Anchors found on the zero set by seeded minimization.
    pub anchors: usize,
    /// Random offset directions per anchor.
    pub directions: usize,
    /// Log of the offset radii; the equivalence is local near the zero set,
    /// so probes must accumulate there.
    pub log_radii: Vec<f64>,
}

impl Default for ProbeSpec {
    fn default() -> Self {
        ProbeSpec {
            anchors: 10,
            directions: 25,
            log_radii: vec![-1.0, -2.0, -4.0, -8.0],
        }
    }
}

/// Outcome of one generator-reduction run (the best draw).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReduceReport {
    /// Whether the maximal log-difference stayed below the declared bound.
    pub success: bool,
    /// `max |log|psi| - log|xi||` over the probe grid.
    pub max_log_diff: f64,
    /// Mean of the same differences.
    pub mean_log_diff: f64,
    /// `20 + |log min |xi||`: the unboundedness detector threshold.
    pub declared_bound: f64,
    /// Probe points actually evaluated.
    pub probes_used: usize,
    /// Index of the winning draw.
    pub trial_index: usize,
    /// Number of draws attempted.
    pub trials: usize,
    /// Requested number of combinations.
    pub target_k: usize,
}
