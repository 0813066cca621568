//! Dense two-phase simplex with Bland's rule.
//!
//! Problems are stated as `min c^T x` subject to `<=` rows and `=` rows, with
//! each variable either free or nonnegative. Internally the problem is moved
//! to standard form (free variables split, slacks added, rows sign-flipped so
//! that every right-hand side is nonnegative) and solved on a full tableau.

use crate::error::{Error, Result};
use crate::linalg::inf_norm;
use crate::types::ToleranceConfig;

const PIVOT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum VarKind {
    Free,
    NonNeg,
}

#[derive(Debug, Clone)]
pub(crate) struct Problem {
    objective: Vec<f64>,
    kinds: Vec<VarKind>,
    le_rows: Vec<(Vec<f64>, f64)>,
    eq_rows: Vec<(Vec<f64>, f64)>,
}

impl Problem {
    pub(crate) fn new(objective: Vec<f64>, kinds: Vec<VarKind>) -> Self {
        debug_assert_eq!(objective.len(), kinds.len());
        Self {
            objective,
            kinds,
            le_rows: Vec::new(),
            eq_rows: Vec::new(),
        }
    }

    pub(crate) fn add_le(&mut self, row: Vec<f64>, rhs: f64) {
        debug_assert_eq!(row.len(), self.objective.len());
        self.le_rows.push((row, rhs));
    }

    pub(crate) fn add_eq(&mut self, row: Vec<f64>, rhs: f64) {
        debug_assert_eq!(row.len(), self.objective.len());
        self.eq_rows.push((row, rhs));
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Solution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Multipliers of the `<=` rows (all `<= 0` at an optimum).
    pub le_duals: Vec<f64>,
    /// Multipliers of the `=` rows.
    pub eq_duals: Vec<f64>,
}

struct Tableau {
    m: usize,
    width: usize, // structural + slack + artificial columns, rhs excluded
    cells: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.cells[r * (self.width + 1) + c]
    }

    #[inline]
    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width)
    }

    fn row(&self, r: usize) -> &[f64] {
        let w = self.width + 1;
        &self.cells[r * w..(r + 1) * w]
    }

    fn pivot(&mut self, r: usize, c: usize, cost: &mut [f64]) {
        let w = self.width + 1;
        let p = self.at(r, c);
        for v in &mut self.cells[r * w..(r + 1) * w] {
            *v /= p;
        }
        let pivot_row = self.row(r).to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.at(i, c);
            if f != 0.0 {
                for (v, pv) in self.cells[i * w..(i + 1) * w].iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                self.cells[i * w + c] = 0.0;
            }
        }
        let f = cost[c];
        if f != 0.0 {
            for (v, pv) in cost.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            cost[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Runs primal simplex on `cost` (reduced costs, last entry is `-z`).
    /// Returns `false` when the objective is unbounded below.
    fn optimize(
        &mut self,
        cost: &mut [f64],
        can_enter: impl Fn(usize) -> bool,
        dual_eps: f64,
        pivots: &mut usize,
        max_pivots: usize,
    ) -> Result<bool> {
        loop {
            let entering = (0..self.width).find(|&j| can_enter(j) && cost[j] < -dual_eps);
            let Some(c) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.at(r, c);
                if a > PIVOT_EPS {
                    let ratio = self.rhs(r).max(0.0) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            let tie = (ratio - lratio).abs() <= 1e-12 * lratio.abs().max(1.0);
                            if ratio < lratio && !tie || tie && self.basis[r] < self.basis[lr] {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            *pivots += 1;
            if *pivots > max_pivots {
                return Err(Error::numerical(format!(
                    "simplex exceeded {max_pivots} pivots"
                )));
            }
            self.pivot(r, c, cost);
        }
    }
}

/// Solves the LP. Dimension consistency is the caller's responsibility.
pub(crate) fn solve(problem: &Problem, tol: &ToleranceConfig) -> Result<Solution> {
    let n_orig = problem.objective.len();
    // column layout: structural (free vars split into +/-), slacks, artificials
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(n_orig);
    let mut n_struct = 0;
    for kind in &problem.kinds {
        match kind {
            VarKind::NonNeg => {
                col_of.push((n_struct, None));
                n_struct += 1;
            }
            VarKind::Free => {
                col_of.push((n_struct, Some(n_struct + 1)));
                n_struct += 2;
            }
        }
    }
    let n_le = problem.le_rows.len();
    let n_eq = problem.eq_rows.len();
    let m = n_le + n_eq;
    let slack0 = n_struct;

    // sign flips so every rhs is nonnegative
    let rows: Vec<(&[f64], f64, Option<usize>)> = problem
        .le_rows
        .iter()
        .enumerate()
        .map(|(i, (r, b))| (r.as_slice(), *b, Some(i)))
        .chain(
            problem
                .eq_rows
                .iter()
                .map(|(r, b)| (r.as_slice(), *b, None)),
        )
        .collect();
    let signs: Vec<f64> = rows
        .iter()
        .map(|(_, b, _)| if *b < 0.0 { -1.0 } else { 1.0 })
        .collect();

    // rows whose slack enters with +1 can start with it basic
    let needs_art: Vec<bool> = rows
        .iter()
        .zip(&signs)
        .map(|((_, _, slack), s)| !(slack.is_some() && *s > 0.0))
        .collect();
    let art0 = slack0 + n_le;
    let mut art_col = vec![usize::MAX; m];
    let mut n_art = 0;
    for (i, need) in needs_art.iter().enumerate() {
        if *need {
            art_col[i] = art0 + n_art;
            n_art += 1;
        }
    }
    let width = art0 + n_art;
    let w = width + 1;
    let mut cells = vec![0.0; m * w];
    let mut basis = vec![0; m];
    // column holding B^{-1} e_i for each row, used to recover duals
    let mut unit_col = vec![0; m];
    for (i, ((coeffs, b, slack), s)) in rows.iter().zip(&signs).enumerate() {
        let base = i * w;
        for (j, a) in coeffs.iter().enumerate() {
            let (p, neg) = col_of[j];
            cells[base + p] = s * a;
            if let Some(q) = neg {
                cells[base + q] = -s * a;
            }
        }
        if let Some(k) = slack {
            cells[base + slack0 + k] = *s;
        }
        cells[base + width] = s * b;
        if needs_art[i] {
            cells[base + art_col[i]] = 1.0;
            basis[i] = art_col[i];
            unit_col[i] = art_col[i];
        } else {
            let k = slack.expect("slack row");
            basis[i] = slack0 + k;
            unit_col[i] = slack0 + k;
        }
    }
    let mut tab = Tableau {
        m,
        width,
        cells,
        basis,
    };
    let mut pivots = 0;
    let rhs_scale = rows.iter().fold(1.0_f64, |acc, (_, b, _)| acc.max(b.abs()));

    // phase 1
    if n_art > 0 {
        let mut cost = vec![0.0; w];
        cost[art0..width].fill(1.0);
        for r in 0..m {
            if tab.basis[r] >= art0 {
                for (c, v) in cost.iter_mut().zip(tab.row(r)) {
                    *c -= v;
                }
            }
        }
        tab.optimize(&mut cost, |_| true, 1e-12, &mut pivots, tol.max_iter)?;
        let infeasibility: f64 = (0..m)
            .filter(|&r| tab.basis[r] >= art0)
            .map(|r| tab.rhs(r))
            .sum();
        if infeasibility > tol.feas_tol * rhs_scale {
            return Ok(Solution {
                status: LpStatus::Infeasible,
                x: Vec::new(),
                objective: f64::NAN,
                le_duals: Vec::new(),
                eq_duals: Vec::new(),
            });
        }
        // drive artificials out of the basis where possible
        let mut scratch = vec![0.0; w];
        for r in 0..m {
            if tab.basis[r] < art0 {
                continue;
            }
            let best = (0..art0)
                .map(|j| (j, tab.at(r, j).abs()))
                .filter(|(_, a)| *a > PIVOT_EPS)
                .max_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((j, _)) => tab.pivot(r, j, &mut scratch),
                None => {
                    // redundant row: zero its structural part
                    for j in 0..art0 {
                        tab.cells[r * w + j] = 0.0;
                    }
                }
            }
        }
        for r in 0..m {
            if tab.rhs(r) < 0.0 {
                tab.cells[r * w + width] = 0.0;
            }
        }
    }

    // phase 2
    let mut std_cost = vec![0.0; w];
    for (j, c) in problem.objective.iter().enumerate() {
        let (p, neg) = col_of[j];
        std_cost[p] = *c;
        if let Some(q) = neg {
            std_cost[q] = -c;
        }
    }
    let mut cost = std_cost.clone();
    for r in 0..m {
        let cb = std_cost[tab.basis[r]];
        if cb != 0.0 {
            for (c, v) in cost.iter_mut().zip(tab.row(r)) {
                *c -= cb * v;
            }
        }
    }
    let dual_eps = tol.opt_tol * inf_norm(&problem.objective).max(1.0);
    let bounded = tab.optimize(&mut cost, |j| j < art0, dual_eps, &mut pivots, tol.max_iter)?;
    if !bounded {
        return Ok(Solution {
            status: LpStatus::Unbounded,
            x: Vec::new(),
            objective: f64::NEG_INFINITY,
            le_duals: Vec::new(),
            eq_duals: Vec::new(),
        });
    }

    let mut std_x = vec![0.0; width];
    for r in 0..m {
        std_x[tab.basis[r]] = tab.rhs(r).max(0.0);
    }
    let x: Vec<f64> = col_of
        .iter()
        .map(|&(p, neg)| std_x[p] - neg.map_or(0.0, |q| std_x[q]))
        .collect();
    let objective = crate::linalg::dot(&problem.objective, &x);

    // pi = c_B^T B^{-1}, read off the columns that started as the identity
    let duals: Vec<f64> = (0..m)
        .map(|i| {
            let pi: f64 = (0..m)
                .map(|r| std_cost[tab.basis[r]] * tab.at(r, unit_col[i]))
                .sum();
            pi * signs[i]
        })
        .collect();
    Ok(Solution {
        status: LpStatus::Optimal,
        x,
        objective,
        le_duals: duals[..n_le].to_vec(),
        eq_duals: duals[n_le..].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn bounded_interval() {
        // min x on 0 <= x <= 1
        let mut p = Problem::new(vec![1.0], vec![VarKind::Free]);
        p.add_le(vec![1.0], 1.0);
        p.add_le(vec![-1.0], 0.0);
        let s = solve(&p, &tol()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(s.x[0].abs() < 1e-12);
        assert!(s.objective.abs() < 1e-12);
    }

    #[test]
    fn unbounded_ray() {
        let mut p = Problem::new(vec![-1.0], vec![VarKind::Free]);
        p.add_le(vec![-1.0], 0.0);
        assert_eq!(solve(&p, &tol()).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_system() {
        let mut p = Problem::new(vec![0.0], vec![VarKind::Free]);
        p.add_le(vec![1.0], -1.0);
        p.add_le(vec![-1.0], -1.0);
        assert_eq!(solve(&p, &tol()).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn equality_with_nonneg_vars() {
        let mut p = Problem::new(vec![1.0, 1.0], vec![VarKind::NonNeg; 2]);
        p.add_eq(vec![1.0, 1.0], 1.0);
        let s = solve(&p, &tol()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn redundant_equalities() {
        let mut p = Problem::new(vec![1.0, 2.0], vec![VarKind::NonNeg; 2]);
        p.add_eq(vec![1.0, 1.0], 1.0);
        p.add_eq(vec![2.0, 2.0], 2.0);
        let s = solve(&p, &tol()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective - 1.0).abs() < 1e-12);
        assert!((s.x[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn duals_match_objective() {
        // min -x - y s.t. x + 2y <= 4, 3x + y <= 6, x,y free but bounded below by rows
        let mut p = Problem::new(vec![-1.0, -1.0], vec![VarKind::Free; 2]);
        p.add_le(vec![1.0, 2.0], 4.0);
        p.add_le(vec![3.0, 1.0], 6.0);
        p.add_le(vec![-1.0, 0.0], 0.0);
        p.add_le(vec![0.0, -1.0], 0.0);
        let s = solve(&p, &tol()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 2.8).abs() < 1e-12);
        let dual_obj = 4.0 * s.le_duals[0] + 6.0 * s.le_duals[1];
        assert!((dual_obj - s.objective).abs() < 1e-10);
        assert!(s.le_duals.iter().all(|y| *y <= 1e-12));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the textbook largest-coefficient rule.
        let mut p = Problem::new(vec![-0.75, 150.0, -0.02, 6.0], vec![VarKind::NonNeg; 4]);
        p.add_le(vec![0.25, -60.0, -0.04, 9.0], 0.0);
        p.add_le(vec![0.5, -90.0, -0.02, 3.0], 0.0);
        p.add_le(vec![0.0, 0.0, 1.0, 0.0], 1.0);
        let s = solve(&p, &tol()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.objective + 0.05).abs() < 1e-10);
    }
}
