//! Projection of the origin onto half-space systems.
//!
//! Plain systems use Hildreth's dual coordinate ascent as a warm start and
//! finish with an active-set pass (Lawson–Hanson on the least-distance
//! form), which also produces the KKT multipliers used as certificate.
//!
//! For a lifted difference only the first block enters the objective, so the
//! problem is not strongly convex in the auxiliary block. It is solved as a
//! sequence of Tikhonov-regularized least-distance problems
//! `min |u|^2 + eps |y|^2` with decreasing `eps`; each candidate is accepted
//! once multipliers certifying optimality for the unregularized objective are
//! found on its active rows.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

use crate::linalg::{axpy, dot, lstsq, norm, norm_sq};
use crate::minkdiff::LiftedDifference;
use crate::types::{HPolyhedron, ToleranceConfig, Vector};

use super::nnls::{least_distance, nnls};
use super::{ProjectionResult, Witness};

const HILDRETH_SWEEPS: usize = 500;
const REGULARIZATION_SCHEDULE: [f64; 7] = [1.0, 1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12];

/// Hildreth sweeps; returns the multipliers and the number of sweeps run.
fn hildreth(p: &HPolyhedron, tol: &ToleranceConfig, max_sweeps: usize) -> (Vec<f64>, usize) {
    let n = p.dim();
    let r = p.n_rows();
    let norms: Vec<f64> = p.rows().iter().map(|a| norm_sq(a)).collect();
    let mut lambda = vec![0.0; r];
    let mut x = vec![0.0; n];
    for sweep in 1..=max_sweeps {
        let mut max_step = 0.0_f64;
        for k in 0..r {
            let a = p.row(k);
            let g = (dot(a, &x) - p.rhs()[k]) / norms[k];
            let next = (lambda[k] + g).max(0.0);
            let delta = next - lambda[k];
            if delta != 0.0 {
                axpy(&mut x, -delta, a);
                lambda[k] = next;
                max_step = max_step.max(delta.abs() * norms[k].sqrt());
            }
        }
        let violation = p.slacks(&x).into_iter().fold(0.0_f64, f64::max);
        if violation <= tol.feas_tol && max_step <= tol.feas_tol {
            return (lambda, sweep);
        }
    }
    (lambda, max_sweeps)
}

fn kkt_certified(p: &HPolyhedron, x: &[f64], lambda: &[f64], tol: &ToleranceConfig) -> bool {
    let xn = norm(x);
    let feasible = p
        .rows()
        .iter()
        .zip(p.rhs())
        .all(|(a, b)| a.dot(x) - b <= tol.feas_tol * (a.norm() * xn).max(b.abs()).max(1.0));
    let gap: f64 = p
        .rows()
        .iter()
        .zip(p.rhs())
        .zip(lambda)
        .map(|((a, b), l)| l * (b - a.dot(x)))
        .sum();
    let nonneg = lambda.iter().all(|l| *l >= 0.0);
    feasible && nonneg && gap.abs() <= tol.opt_tol * (xn * xn).max(1.0)
}

/// Euclidean projection of the origin onto `{x : Ax <= b}`.
///
/// The witness holds the multipliers `lambda >= 0` with
/// `point = -sum lambda_k a_k`.
pub fn project_origin_hrep(p: &HPolyhedron, tol: &ToleranceConfig) -> Result<ProjectionResult> {
    p.ensure_nonempty(tol)?;
    let (lambda0, sweeps) = hildreth(p, tol, HILDRETH_SWEEPS.min(tol.max_iter));
    let warm: Vec<usize> = (0..p.n_rows()).filter(|&k| lambda0[k] > 0.0).collect();
    let rows: Vec<&[f64]> = p.rows().iter().map(|a| a.as_slice()).collect();
    let budget = tol.max_iter.saturating_sub(sweeps).max(1);
    let ldp = match least_distance(&rows, p.rhs(), &warm, budget) {
        Ok(Some(s)) => s,
        Ok(None) => return Err(Error::EmptySet),
        Err(Error::NumericalFailure { reason, .. }) => {
            // fall back to the Hildreth iterate as best available answer
            let mut x = vec![0.0; p.dim()];
            for (a, l) in p.rows().iter().zip(&lambda0) {
                axpy(&mut x, -l, a);
            }
            let best = ProjectionResult::new(x, Witness::Multipliers(lambda0), sweeps, false);
            return Err(Error::NumericalFailure {
                reason,
                best: Some(Box::new(best)),
            });
        }
        Err(e) => return Err(e),
    };
    let certified = kkt_certified(p, &ldp.x, &ldp.multipliers, tol);
    Ok(ProjectionResult::new(
        ldp.x,
        Witness::Multipliers(ldp.multipliers),
        sweeps + ldp.iterations,
        certified,
    ))
}

/// Minimizes `|u|^2` over `{z : D_S z = b_S}` through the KKT system
/// `[H D_S^T; D_S 0] (z, mu) = (0, b_S)` with `H = diag(I_n, 0)`.
fn polish(system: &HPolyhedron, n: usize, active: &[usize]) -> Option<Vec<f64>> {
    let dim = system.dim();
    let k = active.len();
    let mut m = DMatrix::<f64>::zeros(dim + k, dim + k);
    let mut rhs = DVector::<f64>::zeros(dim + k);
    for i in 0..n {
        m[(i, i)] = 1.0;
    }
    for (c, &row) in active.iter().enumerate() {
        for (j, v) in system.row(row).iter().enumerate() {
            m[(j, dim + c)] = *v;
            m[(dim + c, j)] = *v;
        }
        rhs[dim + c] = system.rhs()[row];
    }
    let sol = lstsq(&m, &rhs)?;
    Some(sol.iter().take(dim).copied().collect())
}

/// Checks a lifted point: feasibility, then multipliers `mu >= 0` on the
/// active rows with `D_S^T mu = (-u, 0)`, then the duality gap.
fn certify_lifted(
    system: &HPolyhedron,
    n: usize,
    z: &[f64],
    tol: &ToleranceConfig,
) -> Result<(bool, Vec<f64>, usize)> {
    let u = &z[..n];
    let slacks = system.slacks(z);
    let scale = norm(z).max(1.0);
    let feasible = system
        .rows()
        .iter()
        .zip(&slacks)
        .zip(system.rhs())
        .all(|((a, sl), b)| *sl <= tol.feas_tol * (a.norm() * scale).max(b.abs()).max(1.0));
    let active: Vec<usize> = (0..system.n_rows())
        .filter(|&k| slacks[k].abs() <= 1e-8 * scale.max(system.rhs()[k].abs()))
        .collect();
    let columns: Vec<Vec<f64>> = active.iter().map(|&k| system.row(k).to_vec()).collect();
    let mut target: Vec<f64> = u.iter().map(|v| -v).collect();
    target.extend(std::iter::repeat_n(0.0, system.dim() - n));
    let mut iterations = 0;
    let (mu, residual) = if columns.is_empty() {
        (Vec::new(), norm(&target))
    } else {
        let sol = nnls(&columns, &target, &[], tol.max_iter)?;
        iterations += sol.iterations;
        let r = norm(&sol.residual);
        (sol.u, r)
    };
    let mut multipliers = vec![0.0; system.n_rows()];
    for (&k, m) in active.iter().zip(&mu) {
        multipliers[k] = *m;
    }
    let gap: f64 = multipliers.iter().zip(&slacks).map(|(m, sl)| -m * sl).sum();
    let un = norm(u);
    let certified = feasible
        && residual <= tol.feas_tol * un.max(1.0)
        && gap.abs() <= tol.opt_tol * (un * un).max(1.0) * 10.0;
    Ok((certified, multipliers, iterations))
}

/// Projection of the origin onto the first-block image of a lifted system.
pub(crate) fn project_lifted_origin(
    l: &LiftedDifference,
    tol: &ToleranceConfig,
) -> Result<ProjectionResult> {
    let n = l.n();
    let system = l.system();
    let mut iterations = 0;
    let mut best: Option<ProjectionResult> = None;
    for eps in REGULARIZATION_SCHEDULE {
        let s = eps.sqrt();
        let scaled: Vec<Vec<f64>> = system
            .rows()
            .iter()
            .map(|row| {
                let mut r = row[..n].to_vec();
                r.extend(row[n..].iter().map(|q| q / s));
                r
            })
            .collect();
        let refs: Vec<&[f64]> = scaled.iter().map(|r| r.as_slice()).collect();
        let ldp = least_distance(&refs, system.rhs(), &[], tol.max_iter)?.ok_or(Error::EmptySet)?;
        iterations += ldp.iterations;
        let mut z = ldp.x[..n].to_vec();
        z.extend(ldp.x[n..].iter().map(|w| w / s));

        let slacks = system.slacks(&z);
        let scale = norm(&z).max(1.0);
        let active: Vec<usize> = (0..system.n_rows())
            .filter(|&k| {
                ldp.multipliers[k] > 0.0
                    || slacks[k].abs() <= 1e-8 * scale.max(system.rhs()[k].abs())
            })
            .collect();
        let mut candidates = Vec::with_capacity(2);
        if let Some(p) = polish(system, n, &active) {
            candidates.push(p);
        }
        candidates.push(z);
        for z in candidates {
            let (certified, multipliers, it) = certify_lifted(system, n, &z, tol)?;
            iterations += it;
            let result = ProjectionResult::new(
                z[..n].to_vec(),
                Witness::Lifted {
                    aux: Vector::from_raw(z[n..].to_vec()),
                    multipliers,
                },
                iterations,
                certified,
            );
            if certified {
                return Ok(result);
            }
            if best.is_none() {
                best = Some(result);
            }
        }
    }
    Err(Error::NumericalFailure {
        reason: "lifted projection could not be certified".into(),
        best: best.map(Box::new),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkdiff::hrep_minus_hrep_lifted;
    use crate::types::BoxSet;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn half_line() {
        let p = HPolyhedron::new(vec![vec![-1.0]], vec![-1.0]).unwrap();
        let r = project_origin_hrep(&p, &tol()).unwrap();
        assert!((r.point[0] - 1.0).abs() < 1e-12);
        assert!((r.distance - 1.0).abs() < 1e-12);
        assert!(r.certified);
    }

    #[test]
    fn diagonal_half_plane() {
        let p = HPolyhedron::new(vec![vec![-1.0, -1.0]], vec![-2.0]).unwrap();
        let r = project_origin_hrep(&p, &tol()).unwrap();
        assert!((r.point[0] - 1.0).abs() < 1e-12 && (r.point[1] - 1.0).abs() < 1e-12);
        assert!((r.distance - 2f64.sqrt()).abs() < 1e-12);
        let Some(Witness::Multipliers(l)) = &r.witness else {
            panic!("expected multipliers");
        };
        assert!((l[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn origin_already_feasible() {
        for a in [-0.5, -3.0, -1e-3] {
            let p = HPolyhedron::new(vec![vec![-1.0]], vec![-a]).unwrap();
            let r = project_origin_hrep(&p, &tol()).unwrap();
            assert_eq!(r.distance, 0.0);
            assert!(r.certified);
        }
    }

    #[test]
    fn empty_set_rejected() {
        let p = HPolyhedron::new(vec![vec![1.0], vec![-1.0]], vec![0.0, -1.0]).unwrap();
        assert!(matches!(
            project_origin_hrep(&p, &tol()),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn degenerate_corner() {
        // many rows tight at the projection (1, 1)
        let p = HPolyhedron::new(
            vec![
                vec![-1.0, 0.0],
                vec![0.0, -1.0],
                vec![-1.0, -1.0],
                vec![-2.0, -1.0],
            ],
            vec![-1.0, -1.0, -2.0, -3.0],
        )
        .unwrap();
        let r = project_origin_hrep(&p, &tol()).unwrap();
        assert!((r.point[0] - 1.0).abs() < 1e-10 && (r.point[1] - 1.0).abs() < 1e-10);
        assert!(r.certified);
    }

    #[test]
    fn lifted_boxes() {
        let a = BoxSet::new(vec![2.0, 2.0], vec![3.0, 3.0])
            .unwrap()
            .to_hrep();
        let b = BoxSet::new(vec![0.0, 0.0], vec![1.0, 1.0])
            .unwrap()
            .to_hrep();
        let l = hrep_minus_hrep_lifted(&a, &b, &tol()).unwrap();
        let r = project_lifted_origin(&l, &tol()).unwrap();
        assert!(r.certified);
        assert!((r.distance - 2f64.sqrt()).abs() < 1e-9);
        let Some(Witness::Lifted { aux, .. }) = &r.witness else {
            panic!("expected lifted witness");
        };
        assert!((aux[0] - 1.0).abs() < 1e-9 && (aux[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lifted_unbounded_operands() {
        // {x <= 1} - {x >= 3} = {u <= -2}
        let a = HPolyhedron::new(vec![vec![1.0]], vec![1.0]).unwrap();
        let b = HPolyhedron::new(vec![vec![-1.0]], vec![-3.0]).unwrap();
        let l = hrep_minus_hrep_lifted(&a, &b, &tol()).unwrap();
        let r = project_lifted_origin(&l, &tol()).unwrap();
        assert!(r.certified);
        assert!((r.point[0] + 2.0).abs() < 1e-9);
        // {x <= 1} - {x <= 0} = R: origin inside
        let b = HPolyhedron::new(vec![vec![1.0]], vec![0.0]).unwrap();
        let l = hrep_minus_hrep_lifted(&a, &b, &tol()).unwrap();
        let r = project_lifted_origin(&l, &tol()).unwrap();
        assert!(r.certified);
        assert!(r.distance < 1e-9);
        // {x >= 1} - {x <= -3} = {u >= 4}
        let a = HPolyhedron::new(vec![vec![-1.0]], vec![-1.0]).unwrap();
        let b = HPolyhedron::new(vec![vec![1.0]], vec![-3.0]).unwrap();
        let l = hrep_minus_hrep_lifted(&a, &b, &tol()).unwrap();
        let r = project_lifted_origin(&l, &tol()).unwrap();
        assert!(r.certified);
        assert!((r.point[0] - 4.0).abs() < 1e-9);
    }
}
