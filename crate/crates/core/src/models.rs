//! Closed-form model Green functions and the operators that combine them.
//!
//! Six model ideals admit exact formulas; they serve as oracles for every
//! other part of the crate. The product property and the proper-map
//! pushforward/pullback identities are implemented as operators on function
//! handles and certified on grids.

use crate::error::{CoreError, Result};
use crate::grid::GridSpec;
use crate::ideal::{DomainKind, DomainSpec, IdealSpec, ProperMapSpec};
use crate::poly::MultiPoly;
use crate::value::GreenValue;
use crate::verify::FunctionHandle;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

fn log_abs(z: Complex64) -> GreenValue {
    if z.norm_sqr() == 0.0 {
        GreenValue::MinusInf
    } else {
        GreenValue::Finite(z.norm().ln())
    }
}

/// One of the closed-form model ideals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum ModelId {
    /// `(z1^2, z2)` on the bidisc; `G = max(2 log|z1|, log|z2|)`.
    IntroPair,
    /// `(z_k^{nu_k})_{k<=p}` on the polydisc; `G = max_k nu_k log|z_k|`.
    PolyPowers { nu: Vec<u32>, dim: usize },
    /// `(z1^2, z1 z2)` on the polydisc; `G = log|z1| + max(log|z1|, log|z2|)`.
    PolyZ1SqZ1Z2 { dim: usize },
    /// `(z1 z2, z2 z3, z1 z3)` on the tridisc; `G = max log|z_i z_j|`.
    PolyThreeAxes,
    /// `(z_1, ..., z_p)` on the ball; `G = log(|z'| / sqrt(1 - |z''|^2))`.
    BallCoords { p: usize, dim: usize },
    /// `(z1^2, z2)` on the ball; the square-root formula of the two-generator
    /// ball example.
    BallZ1SqZ2 { dim: usize },
}

impl ModelId {
    /// Validate the model parameters.
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            ModelId::IntroPair => true,
            ModelId::PolyPowers { nu, dim } => {
                !nu.is_empty() && nu.len() <= *dim && nu.iter().all(|&v| v >= 1)
            }
            ModelId::PolyZ1SqZ1Z2 { dim } => *dim >= 2,
            ModelId::PolyThreeAxes => true,
            ModelId::BallCoords { p, dim } => *p >= 1 && p <= dim,
            ModelId::BallZ1SqZ2 { dim } => *dim >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(CoreError::Contract(format!("invalid model params: {self:?}")))
        }
    }

    /// The model's domain.
    pub fn domain(&self) -> DomainSpec {
        match self {
            ModelId::IntroPair => DomainSpec::polydisc(2),
            ModelId::PolyPowers { dim, .. } => DomainSpec::polydisc(*dim),
            ModelId::PolyZ1SqZ1Z2 { dim } => DomainSpec::polydisc(*dim),
            ModelId::PolyThreeAxes => DomainSpec::polydisc(3),
            ModelId::BallCoords { dim, .. } => DomainSpec::ball(*dim),
            ModelId::BallZ1SqZ2 { dim } => DomainSpec::ball(*dim),
        }
    }

    /// The model's generator tuple.
    pub fn ideal(&self) -> IdealSpec {
        self.validate().expect("validated model");
        let one = Complex64::new(1.0, 0.0);
        let (domain, gens) = match self {
            ModelId::IntroPair => (
                DomainSpec::polydisc(2),
                vec![
                    MultiPoly::monomial(2, one, vec![2, 0]).unwrap(),
                    MultiPoly::var(2, 1),
                ],
            ),
            ModelId::PolyPowers { nu, dim } => {
                let gens = nu
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| {
                        let mut e = vec![0u32; *dim];
                        e[k] = v;
                        MultiPoly::monomial(*dim, one, e).unwrap()
                    })
                    .collect();
                (DomainSpec::polydisc(*dim), gens)
            }
            ModelId::PolyZ1SqZ1Z2 { dim } => {
                let mut e1 = vec![0u32; *dim];
                e1[0] = 2;
                let mut e2 = vec![0u32; *dim];
                e2[0] = 1;
                e2[1] = 1;
                (
                    DomainSpec::polydisc(*dim),
                    vec![
                        MultiPoly::monomial(*dim, one, e1).unwrap(),
                        MultiPoly::monomial(*dim, one, e2).unwrap(),
                    ],
                )
            }
            ModelId::PolyThreeAxes => (
                DomainSpec::polydisc(3),
                vec![
                    MultiPoly::monomial(3, one, vec![1, 1, 0]).unwrap(),
                    MultiPoly::monomial(3, one, vec![0, 1, 1]).unwrap(),
                    MultiPoly::monomial(3, one, vec![1, 0, 1]).unwrap(),
                ],
            ),
            ModelId::BallCoords { p, dim } => {
                let gens = (0..*p).map(|k| MultiPoly::var(*dim, k)).collect();
                (DomainSpec::ball(*dim), gens)
            }
            ModelId::BallZ1SqZ2 { dim } => {
                let mut e1 = vec![0u32; *dim];
                e1[0] = 2;
                (
                    DomainSpec::ball(*dim),
                    vec![
                        MultiPoly::monomial(*dim, one, e1).unwrap(),
                        MultiPoly::var(*dim, 1),
                    ],
                )
            }
        };
        IdealSpec::new(domain, gens).expect("model ideal is valid")
    }

    /// Short tag used in CLI output and reports.
    pub fn tag(&self) -> &'static str {
        match self {
            ModelId::IntroPair => "intro_pair",
            ModelId::PolyPowers { .. } => "poly_powers",
            ModelId::PolyZ1SqZ1Z2 { .. } => "poly_z1sq_z1z2",
            ModelId::PolyThreeAxes => "poly_three_axes",
            ModelId::BallCoords { .. } => "ball_coords",
            ModelId::BallZ1SqZ2 { .. } => "ball_z1sq_z2",
        }
    }

    /// Evaluate the closed-form Green function at an interior point.
    pub fn oracle_eval(&self, z: &[Complex64]) -> Result<GreenValue> {
        self.validate()?;
        self.domain().check_interior(z)?;
        Ok(match self {
            ModelId::IntroPair => log_abs(z[0]).scale(2.0).max(log_abs(z[1])),
            ModelId::PolyPowers { nu, .. } => nu
                .iter()
                .enumerate()
                .map(|(k, &v)| log_abs(z[k]).scale(v as f64))
                .fold(GreenValue::MinusInf, GreenValue::max),
            ModelId::PolyZ1SqZ1Z2 { .. } => {
                log_abs(z[0]).add(log_abs(z[0]).max(log_abs(z[1])))
            }
            ModelId::PolyThreeAxes => {
                let p01 = log_abs(z[0]).add(log_abs(z[1]));
                let p12 = log_abs(z[1]).add(log_abs(z[2]));
                let p02 = log_abs(z[0]).add(log_abs(z[2]));
                p01.max(p12).max(p02)
            }
            ModelId::BallCoords { p, .. } => {
                let zp = z[..*p].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                let tail = z[*p..].iter().map(|c| c.norm_sqr()).sum::<f64>();
                if zp == 0.0 {
                    GreenValue::MinusInf
                } else {
                    GreenValue::Finite((zp / (1.0 - tail).sqrt()).ln())
                }
            }
            ModelId::BallZ1SqZ2 { .. } => {
                let tail = z[2..].iter().map(|c| c.norm_sqr()).sum::<f64>();
                let t = 1.0 - tail;
                let a = z[0].norm_sqr() / t;
                let b = z[1].norm_sqr() / t;
                let inner = a * a + 2.0 * b + a * (a * a + 4.0 * b).sqrt();
                if inner == 0.0 {
                    GreenValue::MinusInf
                } else {
                    GreenValue::Finite(0.5 * inner.ln() - 0.5 * 2.0f64.ln())
                }
            }
        })
    }

    /// Four representative points of the zero set, used as anchors for the
    /// log-bound membership check. Models whose zero set is a single point
    /// repeat it (the annulus directions vary by seed).
    pub fn zero_set_anchors(&self) -> Vec<Vec<Complex64>> {
        let zero = Complex64::new(0.0, 0.0);
        let fill = |head: Vec<Complex64>, dim: usize| -> Vec<Complex64> {
            let mut v = head;
            v.resize(dim, zero);
            v
        };
        match self {
            ModelId::IntroPair => vec![vec![zero, zero]; 4],
            ModelId::PolyPowers { nu, dim } => {
                let p = nu.len();
                let mut anchors = vec![fill(Vec::new(), *dim)];
                let tail_vals = [0.3, -0.25, 0.15];
                for (i, &t) in tail_vals.iter().enumerate() {
                    let mut a = vec![zero; *dim];
                    if *dim > p {
                        a[p + i % (*dim - p)] = Complex64::new(t, 0.0);
                    }
                    anchors.push(a);
                }
                anchors
            }
            ModelId::PolyZ1SqZ1Z2 { dim } => vec![
                fill(vec![zero, zero], *dim),
                fill(vec![zero, Complex64::new(0.3, 0.0)], *dim),
                fill(vec![zero, Complex64::new(-0.2, 0.0)], *dim),
                fill(vec![zero, Complex64::new(0.0, 0.25)], *dim),
            ],
            ModelId::PolyThreeAxes => vec![
                vec![zero, zero, zero],
                vec![zero, zero, Complex64::new(0.3, 0.0)],
                vec![Complex64::new(0.25, 0.0), zero, zero],
                vec![zero, Complex64::new(0.2, 0.0), zero],
            ],
            ModelId::BallCoords { p, dim } => {
                let mut anchors = vec![vec![zero; *dim]];
                let tail_vals = [0.3, -0.25, 0.15];
                for (i, &t) in tail_vals.iter().enumerate() {
                    let mut a = vec![zero; *dim];
                    if *dim > *p {
                        a[p + i % (*dim - p)] = Complex64::new(t, 0.0);
                    }
                    anchors.push(a);
                }
                anchors
            }
            ModelId::BallZ1SqZ2 { dim } => {
                let mut anchors = vec![vec![zero; *dim]];
                let tail_vals = [0.3, -0.25, 0.15];
                for (i, &t) in tail_vals.iter().enumerate() {
                    let mut a = vec![zero; *dim];
                    if *dim > 2 {
                        a[2 + i % (*dim - 2)] = Complex64::new(t, 0.0);
                    }
                    anchors.push(a);
                }
                anchors
            }
        }
    }

    /// Wrap the oracle as a function handle.
    pub fn handle(&self) -> FunctionHandle {
        let model = self.clone();
        FunctionHandle::new(
            self.domain(),
            self.tag(),
            move |z| model.oracle_eval(z).unwrap_or(GreenValue::MinusInf),
        )
    }
}

impl std::fmt::Display for ModelId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.tag())
    }
}

/// If every generator is a single monomial, return the exponent vectors.
fn monomial_exponents(a: &IdealSpec) -> Option<Vec<Vec<u32>>> {
    let mut out = Vec::with_capacity(a.generators().len());
    for g in a.generators() {
        if g.term_count() != 1 {
            return None;
        }
        let (e, _) = g.terms().next().expect("one term");
        out.push(e.clone());
    }
    Some(out)
}

/// Recognize a model ideal by exact term-multiset match after monomial
/// normalization (coefficients are units for the Green function, so they are
/// ignored).
pub fn match_model(a: &IdealSpec) -> Option<ModelId> {
    let dim = a.domain().dim;
    let mut exps = monomial_exponents(a)?;
    exps.sort();

    match a.domain().kind {
        DomainKind::Polydisc => {
            if dim == 2 && exps == vec![vec![0, 1], vec![2, 0]] {
                return Some(ModelId::IntroPair);
            }
            if dim == 3 {
                let axes = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
                if exps == axes {
                    return Some(ModelId::PolyThreeAxes);
                }
            }
            if dim >= 2 {
                let mut e1 = vec![0u32; dim];
                e1[0] = 2;
                let mut e2 = vec![0u32; dim];
                e2[0] = 1;
                e2[1] = 1;
                let mut pattern = vec![e1, e2];
                pattern.sort();
                if exps == pattern {
                    return Some(ModelId::PolyZ1SqZ1Z2 { dim });
                }
            }
            // Pure coordinate powers on the first p coordinates.
            let p = exps.len();
            if p <= dim {
                let mut nu = vec![0u32; p];
                let mut ok = true;
                for e in &exps {
                    let nonzero: Vec<usize> =
                        (0..dim).filter(|&i| e[i] > 0).collect();
                    if nonzero.len() != 1 || nonzero[0] >= p || nu[nonzero[0]] != 0 {
                        ok = false;
                        break;
                    }
                    nu[nonzero[0]] = e[nonzero[0]];
                }
                if ok && nu.iter().all(|&v| v >= 1) {
                    return Some(ModelId::PolyPowers { nu, dim });
                }
            }
            None
        }
        DomainKind::Ball => {
            if dim >= 2 {
                let mut e1 = vec![0u32; dim];
                e1[0] = 2;
                let mut e2 = vec![0u32; dim];
                e2[1] = 1;
                let mut pattern = vec![e1, e2];
                pattern.sort();
                if exps == pattern {
                    return Some(ModelId::BallZ1SqZ2 { dim });
                }
            }
            // Plain coordinates z_1, ..., z_p.
            let p = exps.len();
            if p <= dim {
                let mut seen = vec![false; p];
                let mut ok = true;
                for e in &exps {
                    let nonzero: Vec<usize> = (0..dim).filter(|&i| e[i] > 0).collect();
                    if nonzero.len() != 1 || e[nonzero[0]] != 1 || nonzero[0] >= p {
                        ok = false;
                        break;
                    }
                    if seen[nonzero[0]] {
                        ok = false;
                        break;
                    }
                    seen[nonzero[0]] = true;
                }
                if ok {
                    return Some(ModelId::BallCoords { p, dim });
                }
            }
            None
        }
    }
}

/// The product-property composition: `(x1, x2) -> max(g1(x1), g2(x2))`.
///
/// The sentinel obeys `max(-inf, t) = t`. The returned handle lives on the
/// product domain; for polydisc factors that is again a polydisc.
pub fn product_green(g1: &FunctionHandle, g2: &FunctionHandle) -> FunctionHandle {
    let n1 = g1.domain().dim;
    let n2 = g2.domain().dim;
    let e1 = g1.evaluator();
    let e2 = g2.evaluator();
    let label = format!("product({}, {})", g1.label(), g2.label());
    FunctionHandle::from_arc(
        DomainSpec::polydisc(n1 + n2),
        label,
        Arc::new(move |z: &[Complex64]| e1(&z[..n1]).max(e2(&z[n1..n1 + n2]))),
    )
}

/// Push a function forward along a coordinate power map:
/// `max_{y in Phi^{-1}(x)} v(y)`, with the fiber enumerated exactly through
/// roots of unity.
pub fn pushforward_max(
    v: &FunctionHandle,
    map: &ProperMapSpec,
    x: &[Complex64],
) -> Result<GreenValue> {
    let fiber = map.fiber(x)?;
    let eval = v.evaluator();
    Ok(fiber
        .iter()
        .map(|y| eval(y))
        .fold(GreenValue::MinusInf, GreenValue::max))
}

/// Result of a pullback-identity certification on a grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PullbackReport {
    pub pass: bool,
    pub max_diff: f64,
    pub points: usize,
    pub model: String,
    pub pulled_model: String,
}

/// Tolerance for the pullback identity: both sides are closed forms, so the
/// agreement is exact up to rounding.
pub const PULLBACK_TOL: f64 = 1e-12;

/// Certify `G_A(Phi(y)) = G_{Phi^* A}(y)` over a grid. Both the ideal and
/// its pullback must match closed-form models.
pub fn pullback_equality_check(
    a: &IdealSpec,
    map: &ProperMapSpec,
    grid: &GridSpec,
) -> Result<PullbackReport> {
    let model = match_model(a).ok_or(CoreError::NoOracle)?;
    let pulled_ideal = a.pullback_map(map)?;
    let pulled_model = match_model(&pulled_ideal).ok_or(CoreError::NoOracle)?;

    let mut max_diff = 0.0f64;
    let mut points = 0usize;
    for y in grid.points() {
        if a.domain().boundary_gap(&y) <= 0.0 {
            continue;
        }
        let x = map.apply(&y)?;
        let lhs = model.oracle_eval(&x)?;
        let rhs = pulled_model.oracle_eval(&y)?;
        max_diff = max_diff.max(lhs.abs_diff(rhs));
        points += 1;
    }
    Ok(PullbackReport {
        pass: max_diff <= PULLBACK_TOL,
        max_diff,
        points,
        model: model.tag().to_string(),
        pulled_model: pulled_model.tag().to_string(),
    })
}
