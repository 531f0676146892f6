//! Extended-real values with an explicit `-inf` sentinel.
//!
//! Green functions take values in `[-inf, 0]`. The sentinel is a dedicated
//! enum variant, never an IEEE infinity produced by a stray `log(0)`, so
//! every consumer has to branch on it explicitly.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// A Green-function value: either a finite real or minus infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GreenValue {
    /// A finite value (for Green functions always `<= 0`).
    Finite(f64),
    /// The `-inf` sentinel, attained exactly on the singular set.
    MinusInf,
}

impl GreenValue {
    /// Finite payload, or `None` for the sentinel.
    pub fn finite(self) -> Option<f64> {
        match self {
            GreenValue::Finite(v) => Some(v),
            GreenValue::MinusInf => None,
        }
    }

    /// True iff this is the `-inf` sentinel.
    pub fn is_minus_inf(self) -> bool {
        matches!(self, GreenValue::MinusInf)
    }

    /// Pointwise maximum; `-inf` is the absorbing bottom element.
    pub fn max(self, other: GreenValue) -> GreenValue {
        match (self, other) {
            (GreenValue::MinusInf, v) | (v, GreenValue::MinusInf) => v,
            (GreenValue::Finite(a), GreenValue::Finite(b)) => GreenValue::Finite(a.max(b)),
        }
    }

    /// Sum, with `-inf` absorbing.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: GreenValue) -> GreenValue {
        match (self, other) {
            (GreenValue::Finite(a), GreenValue::Finite(b)) => GreenValue::Finite(a + b),
            _ => GreenValue::MinusInf,
        }
    }

    /// Scale by a nonnegative factor; `c * -inf = -inf` for `c > 0`, `0 * -inf = 0`.
    pub fn scale(self, c: f64) -> GreenValue {
        match self {
            GreenValue::Finite(v) => GreenValue::Finite(c * v),
            GreenValue::MinusInf if c == 0.0 => GreenValue::Finite(0.0),
            GreenValue::MinusInf => GreenValue::MinusInf,
        }
    }

    /// Absolute difference, treating two sentinels as equal (`0`) and a
    /// sentinel against a finite value as `+inf`.
    pub fn abs_diff(self, other: GreenValue) -> f64 {
        match (self, other) {
            (GreenValue::Finite(a), GreenValue::Finite(b)) => (a - b).abs(),
            (GreenValue::MinusInf, GreenValue::MinusInf) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

impl PartialOrd for GreenValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (GreenValue::MinusInf, GreenValue::MinusInf) => Some(Ordering::Equal),
            (GreenValue::MinusInf, GreenValue::Finite(_)) => Some(Ordering::Less),
            (GreenValue::Finite(_), GreenValue::MinusInf) => Some(Ordering::Greater),
            (GreenValue::Finite(a), GreenValue::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl From<f64> for GreenValue {
    fn from(v: f64) -> Self {
        GreenValue::Finite(v)
    }
}

impl fmt::Display for GreenValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GreenValue::Finite(v) => write!(f, "{v:.6}"),
            GreenValue::MinusInf => write!(f, "-inf"),
        }
    }
}
