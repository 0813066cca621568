//! Wolfe's minimum-norm-point method over the convex hull of a point list.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, lstsq, norm_sq};
use crate::types::ToleranceConfig;

const WEIGHT_EPS: f64 = 1e-14;

#[derive(Debug, Clone)]
pub(crate) struct MinNorm {
    pub point: Vec<f64>,
    /// Convex weights indexed like the input points (zeros omitted).
    pub weights: Vec<(usize, f64)>,
    pub iterations: usize,
    pub converged: bool,
}

fn combine(points: &[&[f64]], corral: &[usize], weights: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; points[0].len()];
    for (&i, &w) in corral.iter().zip(weights) {
        axpy(&mut x, w, points[i]);
    }
    x
}

/// Weights of the minimum-norm point of the affine hull of the corral.
fn affine_minimizer(points: &[&[f64]], corral: &[usize]) -> Option<Vec<f64>> {
    let k = corral.len();
    // [G 1; 1^T 0] [a; mu] = [0; 1]
    let mut m = DMatrix::<f64>::zeros(k + 1, k + 1);
    for (r, &i) in corral.iter().enumerate() {
        for (c, &j) in corral.iter().enumerate().skip(r) {
            let g = dot(points[i], points[j]);
            m[(r, c)] = g;
            m[(c, r)] = g;
        }
        m[(r, k)] = 1.0;
        m[(k, r)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = m
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|v| v.is_finite()))
        .or_else(|| lstsq(&m, &rhs))?;
    let alpha: Vec<f64> = sol.iter().take(k).copied().collect();
    let total: f64 = alpha.iter().sum();
    if !total.is_finite() || total.abs() < 1e-300 {
        return None;
    }
    Some(alpha.iter().map(|a| a / total).collect())
}

/// Runs the method; termination when `|x|^2 - min_i <x, p_i> <= opt_tol * max(1, |x|^2)`.
pub(crate) fn min_norm_point(points: &[&[f64]], tol: &ToleranceConfig) -> Result<MinNorm> {
    let start = (0..points.len())
        .min_by(|&a, &b| norm_sq(points[a]).total_cmp(&norm_sq(points[b])))
        .ok_or_else(|| Error::InvalidInput("no points".into()))?;
    let mut corral = vec![start];
    let mut weights = vec![1.0];
    let mut x = points[start].to_vec();
    let mut iterations = 0;

    let finish = |x: Vec<f64>, corral: &[usize], weights: &[f64], it: usize, ok: bool| MinNorm {
        point: x,
        weights: corral.iter().zip(weights).map(|(&i, &w)| (i, w)).collect(),
        iterations: it,
        converged: ok,
    };

    loop {
        iterations += 1;
        let xx = norm_sq(&x);
        let (j, best) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, dot(&x, p)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        let gap = xx - best;
        let threshold = tol.opt_tol * xx.max(1.0);
        if gap <= threshold {
            return Ok(finish(x, &corral, &weights, iterations, true));
        }
        if corral.contains(&j) || iterations > tol.max_iter {
            // stalled: the best vertex is already in the corral
            let ok = gap <= 10.0 * threshold;
            if !ok && iterations > tol.max_iter {
                let partial = finish(x, &corral, &weights, iterations, false);
                return Err(Error::NumericalFailure {
                    reason: format!(
                        "min-norm point did not converge in {} iterations",
                        tol.max_iter
                    ),
                    best: Some(Box::new(super::ProjectionResult::from_min_norm(
                        partial, false,
                    ))),
                });
            }
            return Ok(finish(x, &corral, &weights, iterations, ok));
        }
        corral.push(j);
        weights.push(0.0);

        loop {
            let Some(alpha) = affine_minimizer(points, &corral) else {
                return Err(Error::numerical("affine minimizer is singular"));
            };
            if alpha.iter().all(|&a| a > WEIGHT_EPS) {
                weights = alpha;
                x = combine(points, &corral, &weights);
                break;
            }
            let mut theta = 1.0_f64;
            for (w, a) in weights.iter().zip(&alpha) {
                if *a <= WEIGHT_EPS && w - a > 0.0 {
                    theta = theta.min(w / (w - a));
                }
            }
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w = (1.0 - theta) * *w + theta * a;
            }
            let mut keep_c = Vec::with_capacity(corral.len());
            let mut keep_w = Vec::with_capacity(corral.len());
            for (&i, &w) in corral.iter().zip(&weights) {
                if w > WEIGHT_EPS {
                    keep_c.push(i);
                    keep_w.push(w);
                }
            }
            if keep_c.len() == corral.len() {
                // drop the smallest weight to guarantee progress
                let (pos, _) = keep_w
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .expect("nonempty corral");
                keep_c.remove(pos);
                keep_w.remove(pos);
            }
            let total: f64 = keep_w.iter().sum();
            corral = keep_c;
            weights = keep_w.iter().map(|w| w / total).collect();
            x = combine(points, &corral, &weights);
            iterations += 1;
            if corral.len() <= 1 {
                break;
            }
        }
        if norm_sq(&x) >= xx - 1e-15 * xx.max(1.0) {
            // no decrease: rounding has taken over
            let ok = gap <= 10.0 * threshold;
            return Ok(finish(x, &corral, &weights, iterations, ok));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(pts: &[Vec<f64>]) -> MinNorm {
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        min_norm_point(&refs, &ToleranceConfig::default()).unwrap()
    }

    #[test]
    fn singleton() {
        let r = run(&[vec![3.0, 0.0]]);
        assert_eq!(r.point, vec![3.0, 0.0]);
        assert!(r.converged);
    }

    #[test]
    fn segment_midpoint() {
        let r = run(&[vec![1.0, -1.0], vec![1.0, 1.0]]);
        assert!((r.point[0] - 1.0).abs() < 1e-12);
        assert!(r.point[1].abs() < 1e-12);
    }

    #[test]
    fn origin_inside_triangle() {
        let r = run(&[vec![-1.0, -1.0], vec![2.0, -1.0], vec![-1.0, 2.0]]);
        assert!(norm_sq(&r.point) < 1e-20);
        let total: f64 = r.weights.iter().map(|w| w.1).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duplicates_do_not_break_it() {
        let r = run(&[
            vec![1.0, 1.0],
            vec![1.0, 1.0],
            vec![2.0, 0.0],
            vec![2.0, 0.0],
        ]);
        assert!((norm_sq(&r.point) - 2.0).abs() < 1e-12);
    }
}
