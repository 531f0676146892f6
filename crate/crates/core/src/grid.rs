//! Rectangular evaluation grids over coordinate moduli.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Modulus range for one coordinate, with a fixed argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// Fixed argument (radians) applied to every modulus sample.
    pub phase: f64,
}

impl CoordRange {
    pub fn new(lo: f64, hi: f64, count: usize) -> CoordRange {
        CoordRange {
            lo,
            hi,
            count,
            phase: 0.0,
        }
    }

    fn samples(&self) -> Vec<Complex64> {
        let n = self.count.max(1);
        (0..n)
            .map(|i| {
                let r = if n == 1 {
                    self.lo
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64
                };
                Complex64::from_polar(r, self.phase)
            })
            .collect()
    }
}

/// A product grid, iterated row-major (first coordinate slowest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub coords: Vec<CoordRange>,
}

impl GridSpec {
    /// The same modulus range in every coordinate.
    pub fn square(lo: f64, hi: f64, count: usize, dim: usize) -> GridSpec {
        GridSpec {
            coords: (0..dim).map(|_| CoordRange::new(lo, hi, count)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn len(&self) -> usize {
        self.coords.iter().map(|c| c.count.max(1)).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All grid points in row-major order.
    pub fn points(&self) -> Vec<Vec<Complex64>> {
        let per_coord: Vec<Vec<Complex64>> = self.coords.iter().map(|c| c.samples()).collect();
        let mut out: Vec<Vec<Complex64>> = vec![Vec::new()];
        for samples in &per_coord {
            let mut next = Vec::with_capacity(out.len() * samples.len());
            for prefix in &out {
                for s in samples {
                    let mut p = prefix.clone();
                    p.push(*s);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }
}
