//! Sparse multivariate and dense univariate polynomials over the complex
//! numbers.
//!
//! `MultiPoly` holds ideal generators; `UniPoly` holds their pullbacks along
//! analytic discs. Coefficients are kept finite and in canonical sparse form
//! (no zero terms, one term per exponent vector). Term iteration order is the
//! lexicographic order of exponent vectors, which fixes the accumulation
//! order of every evaluation and makes results reproducible.

use crate::error::{CoreError, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

/// Relative trim tolerance applied after composition: coefficients below
/// `1e-13 * max |coeff|` are floating-point dust that would otherwise create
/// spurious high-degree roots.
pub const COMPOSE_TRIM_REL: f64 = 1e-13;

/// Relative zero tolerance for Taylor coefficients in `vanishing_order`;
/// shift-induced cancellation leaves noise below `1e-10 * scale`.
pub const VANISH_ZERO_REL: f64 = 1e-10;

/// Result of a vanishing-order query at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishingOrder {
    /// The smallest total degree with a nonzero Taylor coefficient.
    Finite(u32),
    /// Every coefficient up to the query bound vanishes, but the polynomial
    /// is not identically zero.
    ExceedsMax { max_order: u32 },
    /// The polynomial is identically zero.
    Infinite,
}

impl VanishingOrder {
    /// The order as an integer when finite.
    pub fn finite(self) -> Option<u32> {
        match self {
            VanishingOrder::Finite(k) => Some(k),
            _ => None,
        }
    }

    /// True when the polynomial vanishes at the point (order >= 1).
    pub fn is_positive(self) -> bool {
        !matches!(self, VanishingOrder::Finite(0))
    }

    /// Minimum of two orders, with `Infinite` as top element and
    /// `ExceedsMax` treated as larger than any finite order it dominated.
    pub fn min(self, other: VanishingOrder) -> VanishingOrder {
        use VanishingOrder::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.min(b)),
            (Finite(a), _) | (_, Finite(a)) => Finite(a),
            (ExceedsMax { max_order: a }, ExceedsMax { max_order: b }) => {
                ExceedsMax { max_order: a.min(b) }
            }
            (ExceedsMax { max_order }, Infinite) | (Infinite, ExceedsMax { max_order }) => {
                ExceedsMax { max_order }
            }
            (Infinite, Infinite) => Infinite,
        }
    }
}

fn check_finite(c: Complex64, context: &'static str) -> Result<()> {
    if c.re.is_finite() && c.im.is_finite() {
        Ok(())
    } else {
        Err(CoreError::NonFinite { context })
    }
}

/// A sparse multivariate polynomial with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    n_vars: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl MultiPoly {
    /// Build from `(exponent vector, coefficient)` pairs. Duplicate exponent
    /// vectors are merged, exact-zero coefficients dropped.
    pub fn from_terms<I>(n_vars: usize, terms: I) -> Result<MultiPoly>
    where
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        let mut map: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
        for (exps, coeff) in terms {
            if exps.len() != n_vars {
                return Err(CoreError::DimensionMismatch {
                    expected: n_vars,
                    got: exps.len(),
                });
            }
            check_finite(coeff, "polynomial coefficient")?;
            let entry = map.entry(exps).or_insert(Complex64::new(0.0, 0.0));
            *entry += coeff;
        }
        map.retain(|_, c| c.norm_sqr() > 0.0);
        Ok(MultiPoly { n_vars, terms: map })
    }

    /// The zero polynomial in `n_vars` variables.
    pub fn zero(n_vars: usize) -> MultiPoly {
        MultiPoly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    /// A single monomial `coeff * z^exps`.
    pub fn monomial(n_vars: usize, coeff: Complex64, exps: Vec<u32>) -> Result<MultiPoly> {
        MultiPoly::from_terms(n_vars, [(exps, coeff)])
    }

    /// The coordinate function `z_i` (0-based).
    pub fn var(n_vars: usize, i: usize) -> MultiPoly {
        let mut exps = vec![0u32; n_vars];
        exps[i] = 1;
        MultiPoly::monomial(n_vars, Complex64::new(1.0, 0.0), exps).expect("valid monomial")
    }

    /// Number of variables.
    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// True iff the polynomial has no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Complex64)> {
        self.terms.iter()
    }

    /// Number of terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Maximal total degree, or 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Evaluate at a point of `C^n`. Terms are accumulated in lexicographic
    /// exponent order, so the result is deterministic.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n_vars {
            return Err(CoreError::DimensionMismatch {
                expected: self.n_vars,
                got: z.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (exps, coeff) in &self.terms {
            let mut term = *coeff;
            for (zi, &e) in z.iter().zip(exps.iter()) {
                term *= zi.powu(e);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Sum of two polynomials in the same variables.
    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        if other.n_vars != self.n_vars {
            return Err(CoreError::DimensionMismatch {
                expected: self.n_vars,
                got: other.n_vars,
            });
        }
        MultiPoly::from_terms(
            self.n_vars,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(e, c)| (e.clone(), *c)),
        )
    }

    /// Product of two polynomials in the same variables.
    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        if other.n_vars != self.n_vars {
            return Err(CoreError::DimensionMismatch {
                expected: self.n_vars,
                got: other.n_vars,
            });
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                terms.push((exps, ca * cb));
            }
        }
        MultiPoly::from_terms(self.n_vars, terms)
    }

    /// Scale every coefficient.
    pub fn scale(&self, c: Complex64) -> MultiPoly {
        let mut terms = self.terms.clone();
        terms.retain(|_, v| {
            *v *= c;
            v.norm_sqr() > 0.0
        });
        MultiPoly {
            n_vars: self.n_vars,
            terms,
        }
    }

    /// Substitute `z_i -> z_i^{k_i}` (coordinate power map pullback).
    pub fn power_substitute(&self, exponents: &[u32]) -> Result<MultiPoly> {
        if exponents.len() != self.n_vars {
            return Err(CoreError::DimensionMismatch {
                expected: self.n_vars,
                got: exponents.len(),
            });
        }
        MultiPoly::from_terms(
            self.n_vars,
            self.terms.iter().map(|(e, c)| {
                let exps: Vec<u32> = e.iter().zip(exponents.iter()).map(|(a, k)| a * k).collect();
                (exps, *c)
            }),
        )
    }

    /// Smallest total degree of a nonzero Taylor coefficient of `p` at `a`,
    /// searched up to `max_order`. Computed by the exact binomial shift
    /// `p(a + w)`; a coefficient counts as zero when its modulus falls below
    /// `VANISH_ZERO_REL` times the largest shifted coefficient.
    pub fn vanishing_order(&self, a: &[Complex64], max_order: u32) -> Result<VanishingOrder> {
        if a.len() != self.n_vars {
            return Err(CoreError::DimensionMismatch {
                expected: self.n_vars,
                got: a.len(),
            });
        }
        if self.terms.is_empty() {
            return Ok(VanishingOrder::Infinite);
        }
        let shifted = self.shift(a)?;
        let scale = shifted
            .terms
            .values()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
        let threshold = VANISH_ZERO_REL * scale;
        let mut best: Option<u32> = None;
        for (exps, coeff) in &shifted.terms {
            if coeff.norm() > threshold {
                let deg = exps.iter().sum::<u32>();
                best = Some(best.map_or(deg, |b| b.min(deg)));
            }
        }
        match best {
            Some(k) if k <= max_order => Ok(VanishingOrder::Finite(k)),
            _ => Ok(VanishingOrder::ExceedsMax { max_order }),
        }
    }

    /// Taylor shift: the polynomial `w -> p(a + w)` expanded by binomials.
    fn shift(&self, a: &[Complex64]) -> Result<MultiPoly> {
        let mut terms: Vec<(Vec<u32>, Complex64)> = Vec::new();
        for (exps, coeff) in &self.terms {
            // Per-variable binomial expansions of (a_i + w_i)^{e_i}.
            let factors: Vec<Vec<Complex64>> = exps
                .iter()
                .zip(a.iter())
                .map(|(&e, &ai)| binomial_shift_coeffs(ai, e))
                .collect();
            let mut partial: Vec<(Vec<u32>, Complex64)> = vec![(Vec::new(), *coeff)];
            for f in &factors {
                let mut next = Vec::with_capacity(partial.len() * f.len());
                for (e_prefix, c) in &partial {
                    for (k, fk) in f.iter().enumerate() {
                        if fk.norm_sqr() == 0.0 {
                            continue;
                        }
                        let mut e = e_prefix.clone();
                        e.push(k as u32);
                        next.push((e, c * fk));
                    }
                }
                partial = next;
            }
            terms.extend(partial);
        }
        MultiPoly::from_terms(self.n_vars, terms)
    }

    /// Substitute univariate polynomials for the variables, producing the
    /// pullback `zeta -> p(f_1(zeta), ..., f_n(zeta))`. Coefficients below
    /// `COMPOSE_TRIM_REL` of the largest are trimmed.
    pub fn compose(&self, components: &[UniPoly]) -> Result<UniPoly> {
        if components.len() != self.n_vars {
            return Err(CoreError::DimensionMismatch {
                expected: self.n_vars,
                got: components.len(),
            });
        }
        // Cache powers of each component up to its maximal exponent.
        let max_exp: Vec<u32> = (0..self.n_vars)
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        let mut powers: Vec<Vec<UniPoly>> = Vec::with_capacity(self.n_vars);
        for (comp, &me) in components.iter().zip(max_exp.iter()) {
            let mut table = Vec::with_capacity(me as usize + 1);
            table.push(UniPoly::one());
            for k in 1..=me {
                let prev = &table[(k - 1) as usize];
                table.push(prev.mul(comp));
            }
            powers.push(table);
        }
        let mut acc = UniPoly::zero();
        for (exps, coeff) in &self.terms {
            let mut term = UniPoly::constant(*coeff);
            for (i, &e) in exps.iter().enumerate() {
                term = term.mul(&powers[i][e as usize]);
            }
            acc = acc.add(&term);
        }
        Ok(acc.trimmed(COMPOSE_TRIM_REL))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)", coeff.re, coeff.im)?;
            for (i, &e) in exps.iter().enumerate() {
                if e == 1 {
                    write!(f, "*z{}", i + 1)?;
                } else if e > 1 {
                    write!(f, "*z{}^{}", i + 1, e)?;
                }
            }
        }
        Ok(())
    }
}

/// Coefficients of `(a + w)^e` in powers of `w` (index = power of `w`).
fn binomial_shift_coeffs(a: Complex64, e: u32) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(e as usize + 1);
    // C(e, k) * a^{e-k}, built incrementally.
    let mut binom = 1.0f64;
    for k in 0..=e {
        out.push(a.powu(e - k) * binom);
        binom = binom * (e - k) as f64 / (k + 1) as f64;
    }
    out
}

/// A dense univariate polynomial, coefficients indexed by degree.
///
/// The zero polynomial is the empty coefficient sequence; otherwise the
/// leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

impl UniPoly {
    /// Build from ascending coefficients, trimming exact trailing zeros.
    pub fn new(mut coeffs: Vec<Complex64>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.norm_sqr() == 0.0) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// The zero polynomial.
    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> UniPoly {
        UniPoly::constant(Complex64::new(1.0, 0.0))
    }

    /// A constant polynomial.
    pub fn constant(c: Complex64) -> UniPoly {
        UniPoly::new(vec![c])
    }

    /// True iff identically zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Ascending coefficients.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Sum.
    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        UniPoly::new(out)
    }

    /// Product by convolution.
    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// Scale every coefficient.
    pub fn scale(&self, c: Complex64) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, k: u32) -> UniPoly {
        let mut out = UniPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Formal derivative.
    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * (i as f64 + 1.0))
                .collect(),
        )
    }

    /// Drop coefficients with modulus below `rel` times the largest one.
    pub fn trimmed(&self, rel: f64) -> UniPoly {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        if scale == 0.0 {
            return UniPoly::zero();
        }
        let threshold = rel * scale;
        UniPoly::new(
            self.coeffs
                .iter()
                .map(|c| {
                    if c.norm() < threshold {
                        Complex64::new(0.0, 0.0)
                    } else {
                        *c
                    }
                })
                .collect(),
        )
    }

    /// Multiplicity of the root at the origin: the index of the first
    /// coefficient above `rel` times the largest one.
    pub fn valuation(&self, rel: f64) -> Option<usize> {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        if scale == 0.0 {
            return None;
        }
        let threshold = rel * scale;
        self.coeffs.iter().position(|c| c.norm() > threshold)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(k, c)| format!("({:.6}{:+.6}i)*t^{}", c.re, c.im, k))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
