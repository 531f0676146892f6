//! Closed analytic discs and the disc functional.
//!
//! A disc is a polynomial map of the closed unit disc into the domain with a
//! prescribed center `f(0) = x`. Every contained disc certifies the upper
//! bound `G_A(x) <= G_{f^*A}(0)`, computed by pulling the generators back and
//! summing min-multiplicities times `log|root|` over interior common zeros.

use crate::error::{CoreError, Result};
use crate::green1d;
use crate::ideal::{DomainKind, DomainSpec, IdealSpec};
use crate::models::ModelId;
use crate::poly::{MultiPoly, UniPoly};
use crate::value::GreenValue;
use num_complex::Complex64;

/// Containment slack: discs must keep this margin to the boundary to count
/// as maps of the closed disc into the open domain.
pub const CONTAINMENT_SLACK: f64 = 1e-3;

/// Maximal truncation degree for Möbius recentering.
pub const RECENTER_MAX_CAP: usize = 512;

/// Tail bound required of the recentering truncation on `|zeta| <= 1 - slack`.
pub const RECENTER_TAIL_BOUND: f64 = 1e-10;

/// A polynomial analytic disc `f_j(zeta) = x_j + sum_k c_{j,k} zeta^k`.
///
/// The constant term is the center by construction, so `f(0) = x` holds
/// exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticDisc {
    center: Vec<Complex64>,
    /// Per component, the coefficients of `zeta^1, zeta^2, ...`.
    coeffs: Vec<Vec<Complex64>>,
}

impl AnalyticDisc {
    /// Build from a center and per-component higher coefficients.
    pub fn new(center: Vec<Complex64>, coeffs: Vec<Vec<Complex64>>) -> Result<AnalyticDisc> {
        if coeffs.len() != center.len() {
            return Err(CoreError::DimensionMismatch {
                expected: center.len(),
                got: coeffs.len(),
            });
        }
        for c in center.iter().chain(coeffs.iter().flatten()) {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(CoreError::NonFinite {
                    context: "disc coefficient",
                });
            }
        }
        Ok(AnalyticDisc { center, coeffs })
    }

    /// The constant disc at `x`.
    pub fn constant(center: Vec<Complex64>) -> AnalyticDisc {
        let coeffs = vec![Vec::new(); center.len()];
        AnalyticDisc { center, coeffs }
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Maximal component degree.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    /// The center `f(0)`.
    pub fn center(&self) -> &[Complex64] {
        &self.center
    }

    /// Higher coefficients per component.
    pub fn coeffs(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    /// Evaluate the disc at a parameter value.
    pub fn eval(&self, zeta: Complex64) -> Vec<Complex64> {
        self.center
            .iter()
            .zip(self.coeffs.iter())
            .map(|(x, cs)| {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in cs.iter().rev() {
                    acc = (acc + c) * zeta;
                }
                x + acc
            })
            .collect()
    }

    /// Components as univariate polynomials in the disc parameter.
    pub fn component_polys(&self) -> Vec<UniPoly> {
        self.center
            .iter()
            .zip(self.coeffs.iter())
            .map(|(x, cs)| {
                let mut v = Vec::with_capacity(cs.len() + 1);
                v.push(*x);
                v.extend_from_slice(cs);
                UniPoly::new(v)
            })
            .collect()
    }

    /// Rebuild a disc from component polynomials (constant terms become the
    /// center).
    pub fn from_component_polys(polys: &[UniPoly]) -> AnalyticDisc {
        let center: Vec<Complex64> = polys
            .iter()
            .map(|p| p.coeffs().first().copied().unwrap_or(Complex64::new(0.0, 0.0)))
            .collect();
        let coeffs: Vec<Vec<Complex64>> = polys
            .iter()
            .map(|p| p.coeffs().iter().skip(1).copied().collect())
            .collect();
        AnalyticDisc { center, coeffs }
    }

    /// Precompose with the parameter scaling `zeta -> s zeta` (s real, keeps
    /// the center fixed and shrinks the image).
    pub fn scale_parameter(&self, s: f64) -> AnalyticDisc {
        let coeffs = self
            .coeffs
            .iter()
            .map(|cs| {
                let mut sk = 1.0;
                cs.iter()
                    .map(|c| {
                        sk *= s;
                        c * sk
                    })
                    .collect()
            })
            .collect();
        AnalyticDisc {
            center: self.center.clone(),
            coeffs,
        }
    }

    /// Maximum of the domain gauge over `samples` boundary points.
    pub fn boundary_max(&self, domain: &DomainSpec, samples: usize) -> f64 {
        let mut max = 0.0f64;
        for i in 0..samples {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / samples as f64;
            let z = self.eval(Complex64::from_polar(1.0, theta));
            let gauge = match domain.kind {
                DomainKind::Polydisc => z.iter().map(|c| c.norm()).fold(0.0f64, f64::max),
                DomainKind::Ball => z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
            };
            max = max.max(gauge);
        }
        max
    }
}

/// Pullback of a single polynomial along a disc: `zeta -> p(f(zeta))`.
pub fn compose_with_disc(p: &MultiPoly, f: &AnalyticDisc) -> Result<UniPoly> {
    if p.n_vars() != f.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: p.n_vars(),
            got: f.dim(),
        });
    }
    p.compose(&f.component_polys())
}

/// Containment certificate: boundary sampling margin against the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Containment {
    /// Margin at least the containment slack.
    pub ok: bool,
    /// `1 -` (maximal boundary gauge); positive means strictly inside.
    pub margin: f64,
}

/// Sample the disc boundary and certify containment in the domain.
///
/// The maximum modulus principle makes boundary sampling sufficient up to
/// sampling error; `ok` requires the margin to clear [`CONTAINMENT_SLACK`].
pub fn containment(f: &AnalyticDisc, domain: &DomainSpec, samples: usize) -> Result<Containment> {
    if samples < 64 {
        return Err(CoreError::Contract(format!(
            "containment needs at least 64 boundary samples, got {samples}"
        )));
    }
    if f.dim() != domain.dim {
        return Err(CoreError::DimensionMismatch {
            expected: domain.dim,
            got: f.dim(),
        });
    }
    let margin = 1.0 - f.boundary_max(domain, samples);
    Ok(Containment {
        ok: margin >= CONTAINMENT_SLACK,
        margin,
    })
}

/// How a Green-function estimate was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    /// Closed-form model value.
    OracleExact,
    /// Certified upper bound from a contained analytic disc.
    DiscUpperBound,
    /// Lower-bound candidate from a verified member of the defining class.
    CandidateLower,
}

impl std::fmt::Display for EstimateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EstimateKind::OracleExact => write!(f, "oracle_exact"),
            EstimateKind::DiscUpperBound => write!(f, "disc_upper_bound"),
            EstimateKind::CandidateLower => write!(f, "candidate_lower"),
        }
    }
}

/// The object backing an estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Disc(AnalyticDisc),
    Model(ModelId),
}

/// A value of (an estimate of) the Green function at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenEstimate {
    pub value: GreenValue,
    pub kind: EstimateKind,
    pub witness: Option<Witness>,
}

impl GreenEstimate {
    pub fn upper_bound(value: GreenValue, disc: AnalyticDisc) -> GreenEstimate {
        debug_assert!(value <= GreenValue::Finite(0.0));
        GreenEstimate {
            value,
            kind: EstimateKind::DiscUpperBound,
            witness: Some(Witness::Disc(disc)),
        }
    }

    pub fn exact(value: GreenValue, model: Option<ModelId>) -> GreenEstimate {
        GreenEstimate {
            value,
            kind: EstimateKind::OracleExact,
            witness: model.map(Witness::Model),
        }
    }

    /// The value of a verified member of the defining class: a certified
    /// lower bound for the Green function.
    pub fn candidate_lower(value: GreenValue, model: Option<ModelId>) -> GreenEstimate {
        debug_assert!(value <= GreenValue::Finite(0.0));
        GreenEstimate {
            value,
            kind: EstimateKind::CandidateLower,
            witness: model.map(Witness::Model),
        }
    }

    /// The witness disc when the estimate is disc-backed.
    pub fn witness_disc(&self) -> Option<&AnalyticDisc> {
        match &self.witness {
            Some(Witness::Disc(d)) => Some(d),
            _ => None,
        }
    }
}

/// Evaluate the disc functional on a strictly contained disc.
///
/// Refuses discs whose containment margin falls below the slack; use
/// [`evaluate_disc_closed`] for boundary-touching discs.
pub fn evaluate_disc(f: &AnalyticDisc, a: &IdealSpec) -> Result<GreenEstimate> {
    let samples = 256.max(8 * (f.degree() + 1));
    let cert = containment(f, &a.domain(), samples)?;
    if !cert.ok {
        return Err(CoreError::Containment {
            margin: cert.margin,
            slack: CONTAINMENT_SLACK,
        });
    }
    let value = green1d::disc_functional_value(&a.pullback_disc(f)?)?;
    Ok(GreenEstimate::upper_bound(value, f.clone()))
}

/// Evaluate the disc functional requiring only a positive boundary margin.
///
/// Values of boundary-touching discs are limits of values of interior-scaled
/// admissible discs, so they remain valid upper bounds; the structural
/// template discs of the envelope optimizer live here.
pub fn evaluate_disc_closed(f: &AnalyticDisc, a: &IdealSpec) -> Result<GreenEstimate> {
    let samples = 256.max(8 * (f.degree() + 1));
    let cert = containment(f, &a.domain(), samples)?;
    if cert.margin <= 0.0 {
        return Err(CoreError::Containment {
            margin: cert.margin,
            slack: 0.0,
        });
    }
    let value = green1d::disc_functional_value(&a.pullback_disc(f)?)?;
    Ok(GreenEstimate::upper_bound(value, f.clone()))
}

/// Precompose a disc with the Möbius automorphism `m_b(zeta) = (b + zeta) /
/// (1 + conj(b) zeta)`, truncated to a polynomial whose tail is below
/// [`RECENTER_TAIL_BOUND`] on `|zeta| <= 1 - slack`. The result satisfies
/// `g(0) = f(b)`.
pub fn recenter(f: &AnalyticDisc, b: Complex64) -> Result<AnalyticDisc> {
    if b.norm() >= 1.0 {
        return Err(CoreError::Contract(format!(
            "recenter parameter |b| = {:.6} outside the open disc",
            b.norm()
        )));
    }
    if b.norm() < 1e-14 {
        return Ok(f.clone());
    }

    // Crude magnitude bound for the composite on a circle of radius rho
    // strictly between 1 and the pole radius 1/|b|.
    let rho = ((1.0 + 1.0 / b.norm()) / 2.0).min(3.0);
    let mut magnitude = 0.0f64;
    for i in 0..128 {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / 128.0;
        let zeta = Complex64::from_polar(rho, theta);
        let m = (b + zeta) / (Complex64::new(1.0, 0.0) + b.conj() * zeta);
        for v in f.eval(m) {
            magnitude = magnitude.max(v.norm());
        }
    }
    let magnitude = magnitude.max(1.0);

    // Tail of the truncated series at radius r: M (r/rho)^{N+1} / (1 - r/rho).
    let r = 1.0 - CONTAINMENT_SLACK;
    let q = r / rho;
    let needed =
        ((RECENTER_TAIL_BOUND * (1.0 - q) / magnitude).ln() / q.ln()).ceil() as usize + 1;
    if needed > RECENTER_MAX_CAP {
        return Err(CoreError::DegreeCap {
            modulus: b.norm(),
            needed,
        });
    }
    let cap = needed.max(f.degree().max(4));

    // Series of m_b up to the cap: b + (1 - |b|^2) sum_{k>=1} (-conj b)^{k-1} zeta^k.
    let mut m_series = vec![Complex64::new(0.0, 0.0); cap + 1];
    m_series[0] = b;
    let lead = Complex64::new(1.0 - b.norm_sqr(), 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for coeff in m_series.iter_mut().skip(1) {
        *coeff = lead * pow;
        pow *= -b.conj();
    }
    let m_poly = UniPoly::new(m_series);

    let composed: Vec<UniPoly> = f
        .component_polys()
        .iter()
        .map(|p| {
            // Horner in truncated series arithmetic.
            let mut acc = UniPoly::zero();
            for c in p.coeffs().iter().rev() {
                acc = truncate(&acc.mul(&m_poly), cap).add(&UniPoly::constant(*c));
            }
            acc
        })
        .collect();
    Ok(AnalyticDisc::from_component_polys(&composed))
}

fn truncate(p: &UniPoly, cap: usize) -> UniPoly {
    if p.coeffs().len() <= cap + 1 {
        return p.clone();
    }
    UniPoly::new(p.coeffs()[..=cap].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::IdealSpec;
    use crate::poly::MultiPoly;
    use approx::assert_relative_eq;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    fn linear_disc(dirs: &[Complex64]) -> AnalyticDisc {
        AnalyticDisc::new(
            vec![re(0.0); dirs.len()],
            dirs.iter().map(|d| vec![*d]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn constant_disc_containment() {
        let f = AnalyticDisc::constant(vec![c(0.3, 0.1), re(0.5)]);
        let cert = containment(&f, &DomainSpec::polydisc(2), 128).unwrap();
        assert!(cert.ok);
        assert_relative_eq!(cert.margin, 1.0 - 0.5, max_relative = 1e-12);
    }

    #[test]
    fn boundary_touching_disc_fails_slack() {
        let f = linear_disc(&[re(1.0), re(0.0)]);
        let cert = containment(&f, &DomainSpec::polydisc(2), 128).unwrap();
        assert!(!cert.ok);
        assert!(cert.margin.abs() < 1e-12);
    }

    #[test]
    fn scaled_disc_has_expected_margin() {
        let f = AnalyticDisc::new(vec![re(0.0), re(0.5)], vec![vec![re(0.9)], vec![]]).unwrap();
        let cert = containment(&f, &DomainSpec::polydisc(2), 128).unwrap();
        assert!(cert.ok);
        assert_relative_eq!(cert.margin, 0.1, max_relative = 1e-9);
    }

    #[test]
    fn containment_needs_64_samples() {
        let f = AnalyticDisc::constant(vec![re(0.0)]);
        assert!(containment(&f, &DomainSpec::polydisc(1), 32).is_err());
    }

    #[test]
    fn recenter_at_zero_is_identity() {
        let f = linear_disc(&[re(0.5), c(0.1, 0.2)]);
        let g = recenter(&f, re(0.0)).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn recenter_moves_center() {
        let f = linear_disc(&[re(1.0), re(1.0)]);
        let g = recenter(&f, re(0.5)).unwrap();
        for (a, b) in g.center().iter().zip([re(0.5), re(0.5)]) {
            assert!((a - b).norm() < 1e-12);
        }
        let h = recenter(&linear_disc(&[re(1.0)]), c(-0.2, 0.0)).unwrap();
        assert!((h.center()[0] - c(-0.2, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn recenter_matches_direct_moebius_evaluation() {
        let f = AnalyticDisc::new(
            vec![re(0.1), re(0.3)],
            vec![vec![re(0.5), c(0.0, 0.2)], vec![c(0.2, -0.1)]],
        )
        .unwrap();
        let b = c(-0.2, 0.15);
        let g = recenter(&f, b).unwrap();
        for i in 0..100 {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / 100.0;
            let zeta = Complex64::from_polar(1.0 - CONTAINMENT_SLACK, theta);
            let m = (b + zeta) / (Complex64::new(1.0, 0.0) + b.conj() * zeta);
            let direct = f.eval(m);
            let truncated = g.eval(zeta);
            for (d, t) in direct.iter().zip(truncated.iter()) {
                assert!(
                    (d - t).norm() < 1e-9,
                    "truncation error {:.2e} at theta {theta}",
                    (d - t).norm()
                );
            }
        }
    }

    #[test]
    fn recenter_near_boundary_hits_degree_cap() {
        let f = linear_disc(&[re(0.5)]);
        assert!(matches!(
            recenter(&f, re(0.99995)),
            Err(CoreError::DegreeCap { .. })
        ));
    }

    #[test]
    fn ball_containment_uses_euclidean_norm() {
        // (0.8 zeta, 0.8 zeta) fits in the bidisc but not in the 2-ball.
        let f = linear_disc(&[re(0.8), re(0.8)]);
        let poly = containment(&f, &DomainSpec::polydisc(2), 128).unwrap();
        assert!(poly.ok);
        let ball = containment(&f, &DomainSpec::ball(2), 128).unwrap();
        assert!(!ball.ok);
        assert!((ball.margin - (1.0 - 0.8 * 2.0f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn evaluate_constant_disc_off_singularity_is_zero() {
        let a = IdealSpec::new(
            DomainSpec::polydisc(2),
            vec![MultiPoly::var(2, 0), MultiPoly::var(2, 1)],
        )
        .unwrap();
        let f = AnalyticDisc::constant(vec![re(0.3), re(0.4)]);
        let est = evaluate_disc(&f, &a).unwrap();
        assert_eq!(est.value, GreenValue::Finite(0.0));
        assert_eq!(est.kind, EstimateKind::DiscUpperBound);
    }

    #[test]
    fn evaluate_recentered_diagonal_disc() {
        // A = (z1, z2) at x = (0.5, 0.5): the recentered diagonal gives a
        // simple common zero at the preimage of the origin, modulus 0.5.
        let a = IdealSpec::new(
            DomainSpec::polydisc(2),
            vec![MultiPoly::var(2, 0), MultiPoly::var(2, 1)],
        )
        .unwrap();
        let s = 1.0 - 1e-9;
        let diagonal = linear_disc(&[re(s), re(s)]);
        let g = recenter(&diagonal, re(0.5 / s)).unwrap();
        let est = evaluate_disc_closed(&g, &a).unwrap();
        let v = est.value.finite().expect("finite value");
        assert_relative_eq!(v, 0.5f64.ln(), epsilon = 1e-8);

        // Interior-scaled version passes the strict gate at a small cost.
        let s = 1.0 - 2.5e-3;
        let diagonal = linear_disc(&[re(1.0), re(1.0)]);
        let scaled = recenter(&diagonal.scale_parameter(s), re(0.5 / s)).unwrap();
        let est = evaluate_disc(&scaled, &a).unwrap();
        let v = est.value.finite().expect("finite value");
        assert!((v - 0.5f64.ln()).abs() < 6e-3, "value {v}");
        assert!(v >= 0.5f64.ln() - 1e-12, "never undercuts the true value");
    }

    #[test]
    fn evaluate_disc_with_flagged_zero_component() {
        // A = (z1^2, z2), disc (0.9 m_b(zeta), 0) with center 0.5: the second
        // pullback vanishes identically, the first has a double zero at -b,
        // b = 5/9.
        let a = IdealSpec::new(
            DomainSpec::polydisc(2),
            vec![
                MultiPoly::monomial(2, re(1.0), vec![2, 0]).unwrap(),
                MultiPoly::var(2, 1),
            ],
        )
        .unwrap();
        let f = AnalyticDisc::new(vec![re(0.0), re(0.0)], vec![vec![re(0.9)], vec![]]).unwrap();
        let g = recenter(&f, re(5.0 / 9.0)).unwrap();
        assert!((g.center()[0] - re(0.5)).norm() < 1e-12);
        let est = evaluate_disc(&g, &a).unwrap();
        let v = est.value.finite().expect("finite value");
        assert_relative_eq!(v, 2.0 * (5.0f64 / 9.0).ln(), epsilon = 1e-9);
    }

    #[test]
    fn evaluate_refuses_uncontained_disc() {
        let a = IdealSpec::new(DomainSpec::polydisc(1), vec![MultiPoly::var(1, 0)]).unwrap();
        let f = linear_disc(&[re(1.0)]);
        assert!(matches!(
            evaluate_disc(&f, &a),
            Err(CoreError::Containment { .. })
        ));
    }
}
