//! Lawson–Hanson nonnegative least squares and the least-distance program
//! (minimum-norm point of `{x : Ax <= b}`) reduced to it.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{lstsq, norm};

#[derive(Debug, Clone)]
pub(crate) struct NnlsSolution {
    pub u: Vec<f64>,
    /// `E u - f`
    pub residual: Vec<f64>,
    pub iterations: usize,
}

/// `min |E u - f|` subject to `u >= 0`; `E` is given column by column.
///
/// `warm` seeds the passive set; entries whose least-squares coefficient is
/// not positive are dropped before the main loop starts.
pub(crate) fn nnls(
    columns: &[Vec<f64>],
    f: &[f64],
    warm: &[usize],
    max_iter: usize,
) -> Result<NnlsSolution> {
    let rows = f.len();
    let ncols = columns.len();
    let e = DMatrix::from_fn(rows, ncols, |i, j| columns[j][i]);
    let fv = DVector::from_column_slice(f);
    let scale = columns
        .iter()
        .map(|c| norm(c))
        .fold(norm(f), f64::max)
        .max(1.0);
    let tol = 1e-13 * scale * scale * (rows.max(ncols) as f64);

    let mut passive = vec![false; ncols];
    let mut u = DVector::<f64>::zeros(ncols);
    let solve_passive = |passive: &[bool]| -> Option<(Vec<usize>, DVector<f64>)> {
        let idx: Vec<usize> = (0..ncols).filter(|&j| passive[j]).collect();
        if idx.is_empty() {
            return Some((idx, DVector::zeros(0)));
        }
        let sub = e.select_columns(&idx);
        lstsq(&sub, &fv).map(|z| (idx, z))
    };

    for &j in warm {
        if j < ncols {
            passive[j] = true;
        }
    }
    loop {
        if !passive.iter().any(|&p| p) {
            break;
        }
        let (idx, z) = solve_passive(&passive)
            .ok_or_else(|| Error::numerical("least-squares solve failed"))?;
        let bad: Vec<usize> = idx
            .iter()
            .zip(z.iter())
            .filter(|(_, zj)| **zj <= 0.0)
            .map(|(j, _)| *j)
            .collect();
        if bad.is_empty() {
            for (j, zj) in idx.iter().zip(z.iter()) {
                u[*j] = *zj;
            }
            break;
        }
        for j in bad {
            passive[j] = false;
        }
    }

    let mut iterations = 0;
    loop {
        let resid = &fv - &e * &u;
        let w = e.transpose() * &resid;
        let candidate = (0..ncols)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&a, &b| w[a].total_cmp(&w[b]));
        let Some(t) = candidate else {
            break;
        };
        iterations += 1;
        if iterations > max_iter {
            return Err(Error::numerical(format!(
                "NNLS exceeded {max_iter} iterations"
            )));
        }
        passive[t] = true;
        let mut first = true;
        loop {
            let (idx, z) = solve_passive(&passive)
                .ok_or_else(|| Error::numerical("least-squares solve failed"))?;
            if idx.iter().zip(z.iter()).all(|(_, zj)| *zj > 0.0) {
                for j in 0..ncols {
                    u[j] = 0.0;
                }
                for (j, zj) in idx.iter().zip(z.iter()) {
                    u[*j] = *zj;
                }
                break;
            }
            if first {
                let zt = idx
                    .iter()
                    .position(|&j| j == t)
                    .map(|k| z[k])
                    .unwrap_or(0.0);
                if zt <= 0.0 {
                    // no numerical progress is possible along t
                    passive[t] = false;
                    let resid = &fv - &e * &u;
                    return Ok(NnlsSolution {
                        u: u.iter().copied().collect(),
                        residual: (-resid).iter().copied().collect(),
                        iterations,
                    });
                }
            }
            first = false;
            let mut alpha = f64::INFINITY;
            for (j, zj) in idx.iter().zip(z.iter()) {
                if *zj <= 0.0 {
                    let uj = u[*j];
                    let a = uj / (uj - zj);
                    alpha = alpha.min(a);
                }
            }
            for (j, zj) in idx.iter().zip(z.iter()) {
                u[*j] += alpha * (zj - u[*j]);
            }
            for j in 0..ncols {
                if passive[j] && u[j] <= 1e-15 * scale {
                    passive[j] = false;
                    u[j] = 0.0;
                }
            }
            iterations += 1;
            if iterations > max_iter {
                return Err(Error::numerical(format!(
                    "NNLS exceeded {max_iter} iterations"
                )));
            }
        }
    }
    let resid = &e * &u - &fv;
    Ok(NnlsSolution {
        u: u.iter().copied().collect(),
        residual: resid.iter().copied().collect(),
        iterations,
    })
}

#[derive(Debug, Clone)]
pub(crate) struct LdpSolution {
    pub x: Vec<f64>,
    /// Multipliers `lambda >= 0` with `x = -A^T lambda`.
    pub multipliers: Vec<f64>,
    pub iterations: usize,
}

/// Minimum-norm point of `{x : <a_k, x> <= b_k}`; `None` when the system is
/// infeasible.
///
/// With `G = -A`, `h = -b`, the point is read off the NNLS residual of
/// `E = [G^T; h^T]`, `f = e_{n+1}`: `x = -r[..n] / r[n]`.
pub(crate) fn least_distance(
    rows: &[&[f64]],
    b: &[f64],
    warm: &[usize],
    max_iter: usize,
) -> Result<Option<LdpSolution>> {
    let n = rows.first().map_or(0, |r| r.len());
    // columns normalized; the scaling is undone on the multipliers
    let mut scales = Vec::with_capacity(rows.len());
    let columns: Vec<Vec<f64>> = rows
        .iter()
        .zip(b)
        .map(|(a, bk)| {
            let mut col: Vec<f64> = a.iter().map(|v| -v).collect();
            col.push(-bk);
            let s = norm(&col).max(f64::MIN_POSITIVE);
            scales.push(s);
            col.iter().map(|v| v / s).collect()
        })
        .collect();
    let mut f = vec![0.0; n + 1];
    f[n] = 1.0;
    let sol = nnls(&columns, &f, warm, max_iter)?;
    let rn = sol.residual[n];
    if norm(&sol.residual) <= 1e-12 || rn >= -1e-14 {
        return Ok(None);
    }
    let x: Vec<f64> = sol.residual[..n].iter().map(|r| -r / rn).collect();
    let multipliers = sol
        .u
        .iter()
        .zip(&scales)
        .map(|(u, s)| u / s / -rn)
        .collect();
    Ok(Some(LdpSolution {
        x,
        multipliers,
        iterations: sol.iterations,
    }))
}
