//! Small Nelder-Mead simplex minimizer for black-box objectives.
//!
//! The disc-functional objective is piecewise-defined (multiplicity terms are
//! integer-valued), so gradients are unavailable; a plain downhill simplex
//! with a hard evaluation budget is the refinement tool throughout the crate.

/// Result of a simplex run.
#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimize `f` starting from `x0`, spending at most `budget` evaluations.
///
/// `scale` sets the initial simplex edge length per coordinate. The objective
/// may return `f64::INFINITY` for infeasible points.
pub fn nelder_mead<F>(
    f: &mut F,
    x0: &[f64],
    scale: &[f64],
    budget: usize,
    tol: f64,
) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        f(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        if evals >= budget {
            break;
        }
        let mut xi = x0.to_vec();
        xi[i] += scale[i];
        let vi = eval(&xi, &mut evals);
        simplex.push((xi, vi));
    }

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    while evals < budget && simplex.len() == n + 1 {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if best.is_finite() && worst.is_finite() && (worst - best).abs() < tol {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
            .collect();
        let reflect: Vec<f64> = (0..n)
            .map(|j| centroid[j] + alpha * (centroid[j] - simplex[n].0[j]))
            .collect();
        let fr = eval(&reflect, &mut evals);

        if fr < simplex[0].1 {
            // Try expanding.
            if evals < budget {
                let expand: Vec<f64> = (0..n)
                    .map(|j| centroid[j] + gamma * (reflect[j] - centroid[j]))
                    .collect();
                let fe = eval(&expand, &mut evals);
                simplex[n] = if fe < fr { (expand, fe) } else { (reflect, fr) };
            } else {
                simplex[n] = (reflect, fr);
            }
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflect, fr);
        } else if evals < budget {
            let contract: Vec<f64> = (0..n)
                .map(|j| centroid[j] + rho * (simplex[n].0[j] - centroid[j]))
                .collect();
            let fc = eval(&contract, &mut evals);
            if fc < simplex[n].1 {
                simplex[n] = (contract, fc);
            } else {
                // Shrink toward the best vertex.
                let best_x = simplex[0].0.clone();
                for vtx in simplex.iter_mut().skip(1) {
                    if evals >= budget {
                        break;
                    }
                    for (xj, bj) in vtx.0.iter_mut().zip(best_x.iter()) {
                        *xj = bj + sigma * (*xj - bj);
                    }
                    vtx.1 = eval(&vtx.0, &mut evals);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    SimplexResult {
        x: simplex[0].0.clone(),
        value: simplex[0].1,
        evaluations: evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_shifted_quadratic() {
        let mut f = |x: &[f64]| (x[0] - 1.5).powi(2) + 2.0 * (x[1] + 0.5).powi(2);
        let r = nelder_mead(&mut f, &[0.0, 0.0], &[0.5, 0.5], 400, 1e-12);
        assert!((r.x[0] - 1.5).abs() < 1e-4);
        assert!((r.x[1] + 0.5).abs() < 1e-4);
        assert!(r.evaluations <= 400);
    }

    #[test]
    fn respects_budget_on_infeasible_regions() {
        let mut f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::INFINITY
            } else {
                x[0]
            }
        };
        let r = nelder_mead(&mut f, &[1.0], &[0.25], 60, 1e-12);
        assert!(r.value >= 0.0);
        assert!(r.evaluations <= 60);
    }
}
