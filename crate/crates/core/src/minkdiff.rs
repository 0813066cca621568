//! Minkowski-difference constructors for every representation pairing.
//!
//! `A - B` here is always the set of pairwise differences `{a - b}`.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, inf_norm, sub};
use crate::solvers::simplex::{self, LpStatus, Problem, VarKind};
use crate::types::{
    hull_contains, BallSet, BoxSet, HPolyhedron, ToleranceConfig, VPolytope, Vector,
};

/// `conv{z_i} - conv{p_j} = conv{z_i - p_j}`.
///
/// The result carries all `l * m` differences, ordered with the first
/// operand's index major: generator `i * m + j` is `z_i - p_j`.
pub fn vrep_minus_vrep(l: &VPolytope, m: &VPolytope) -> Result<VPolytope> {
    Error::check_dim(l.dim(), m.dim())?;
    let diffs = l
        .vertices()
        .iter()
        .flat_map(|z| {
            m.vertices()
                .iter()
                .map(move |p| Vector::from_raw(sub(z, p)))
        })
        .collect();
    VPolytope::from_vectors(diffs)
}

/// Drops generators that do not change the hull.
///
/// Near-duplicates (within `feas_tol` in the max norm) go first; then each
/// remaining generator is removed when an LP shows it lies in the hull of the
/// others still kept. If an LP fails the generator is kept.
pub fn reduce_vrep(p: &VPolytope, tol: &ToleranceConfig) -> VPolytope {
    let mut kept: Vec<&Vector> = Vec::with_capacity(p.len());
    for v in p.vertices() {
        if !kept.iter().any(|k| inf_norm(&sub(k, v)) <= tol.feas_tol) {
            kept.push(v);
        }
    }
    let mut i = 0;
    while i < kept.len() && kept.len() > 1 {
        let others: Vec<&[f64]> = kept
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, v)| v.as_slice())
            .collect();
        if hull_contains(&others, kept[i], tol).unwrap_or(false) {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    VPolytope::from_vectors(kept.into_iter().cloned().collect()).expect("nonempty subset")
}

/// `P - p`: same rows, right-hand sides `b_k - <a_k, p>`.
pub fn hrep_minus_point(
    p: &HPolyhedron,
    point: &[f64],
    tol: &ToleranceConfig,
) -> Result<HPolyhedron> {
    Error::check_dim(p.dim(), point.len())?;
    p.ensure_nonempty(tol)?;
    Ok(shift_rhs(p, point))
}

fn shift_rhs(p: &HPolyhedron, point: &[f64]) -> HPolyhedron {
    let b = p
        .rows()
        .iter()
        .zip(p.rhs())
        .map(|(a, bk)| bk - a.dot(point))
        .collect();
    HPolyhedron::from_parts(p.rows().to_vec(), b, p.dim())
}

/// `R^n_+ - p = {x : x_j >= -p_j}`, encoded as rows `-x_j <= p_j`.
pub fn orthant_minus_point(n: usize, p: &[f64]) -> Result<HPolyhedron> {
    Error::check_dim(n, p.len())?;
    let orthant = HPolyhedron::orthant(n)?;
    Ok(HPolyhedron::from_parts(
        orthant.rows().to_vec(),
        p.to_vec(),
        n,
    ))
}

/// `[l, u] - p = [l - p, u - p]`.
pub fn box_minus_point(b: &BoxSet, p: &[f64]) -> Result<BoxSet> {
    Error::check_dim(b.dim(), p.len())?;
    BoxSet::new(sub(b.lower(), p), sub(b.upper(), p))
}

/// `ball(o, q) - p = ball(o - p, q)`.
pub fn ball_minus_point(b: &BallSet, p: &[f64]) -> Result<BallSet> {
    Error::check_dim(b.dim(), p.len())?;
    BallSet::new(sub(b.center(), p), b.radius())
}

/// `{x : x + p_j in P for every j}`: one shifted copy of the whole system
/// per generator, `r * m` rows ordered row-major then generator-minor.
///
/// This is the set of translates `x` with `x + conv M` inside `P`. It equals
/// `P - p` for a singleton `M = {p}`; for larger `M` it is contained in the
/// pairwise difference, which [`hrep_minus_vrep_lifted`] represents exactly.
pub fn hrep_minus_vrep_raw(
    p: &HPolyhedron,
    m: &VPolytope,
    tol: &ToleranceConfig,
) -> Result<HPolyhedron> {
    Error::check_dim(p.dim(), m.dim())?;
    p.ensure_nonempty(tol)?;
    let mut rows = Vec::with_capacity(p.n_rows() * m.len());
    let mut b = Vec::with_capacity(p.n_rows() * m.len());
    for (a, bk) in p.rows().iter().zip(p.rhs()) {
        for pj in m.vertices() {
            rows.push(a.clone());
            b.push(bk - a.dot(pj));
        }
    }
    Ok(HPolyhedron::from_parts(rows, b, p.dim()))
}

/// The same set as [`hrep_minus_vrep_raw`] with exactly the rows of `P`:
/// `s_k = b_k - max_j <a_k, p_j>`.
pub fn hrep_minus_vrep(
    p: &HPolyhedron,
    m: &VPolytope,
    tol: &ToleranceConfig,
) -> Result<HPolyhedron> {
    Error::check_dim(p.dim(), m.dim())?;
    p.ensure_nonempty(tol)?;
    let s = p
        .rows()
        .iter()
        .zip(p.rhs())
        .map(|(a, bk)| bk - m.support_sup(a))
        .collect();
    Ok(HPolyhedron::from_parts(p.rows().to_vec(), s, p.dim()))
}

/// A difference set kept as the shadow of a higher-dimensional system:
/// `u` belongs to it iff some auxiliary vector `w` makes `(u, w)` feasible.
///
/// For `P - Q` with both operands in half-space form the system lives in
/// `R^{2n}` over `z = (x | y)`:
///
/// ```text
/// [ A1 | A1 ] z <= b1
/// [ 0  | A2 ] z <= b2
/// ```
///
/// For `P - conv{p_j}` the auxiliary block holds generator weights instead
/// (see [`hrep_minus_vrep_lifted`]).
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedDifference {
    system: HPolyhedron,
    n: usize,
    layout: Layout,
}

#[derive(Debug, Clone, PartialEq)]
enum Layout {
    /// Rows `[A1 | A1]` then `[0 | A2]`; the auxiliary block is `y`.
    Blocks { r1: usize },
    /// Auxiliary block holds convex weights of these generators.
    Weights(VPolytope),
}

impl LiftedDifference {
    /// Rebuilds a half-space difference from its stored block system,
    /// checking the block layout.
    pub fn from_system(system: HPolyhedron, n: usize) -> Result<Self> {
        Error::check_dim(2 * n, system.dim())?;
        let mut r1 = 0;
        let mut in_second = false;
        for row in system.rows() {
            let (x, y) = row.split_at(n);
            if x.iter().all(|v| *v == 0.0) {
                in_second = true;
            } else if x == y && !in_second {
                r1 += 1;
            } else {
                return Err(Error::InvalidInput(
                    "rows must be [A1 | A1] followed by [0 | A2]".into(),
                ));
            }
        }
        if r1 == 0 || r1 == system.n_rows() {
            return Err(Error::InvalidInput(
                "both blocks need at least one row".into(),
            ));
        }
        Ok(Self {
            system,
            n,
            layout: Layout::Blocks { r1 },
        })
    }

    pub fn system(&self) -> &HPolyhedron {
        &self.system
    }

    /// Dimension of the difference itself.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Coordinates of the difference variable.
    pub fn diff_block(&self) -> Range<usize> {
        0..self.n
    }

    /// Coordinates of the auxiliary witness.
    pub fn aux_block(&self) -> Range<usize> {
        self.n..self.system.dim()
    }

    /// Row counts `(r1, r2)` of the two blocks of a half-space difference.
    pub fn block_rows(&self) -> Option<(usize, usize)> {
        match self.layout {
            Layout::Blocks { r1 } => Some((r1, self.system.n_rows() - r1)),
            Layout::Weights(_) => None,
        }
    }

    /// The subtrahend point encoded by an auxiliary block: `y` itself for
    /// two half-space operands, `sum w_j p_j` for generator weights.
    pub fn subtrahend_point(&self, aux: &[f64]) -> Result<Vector> {
        Error::check_dim(self.aux_block().len(), aux.len())?;
        Ok(match &self.layout {
            Layout::Blocks { .. } => Vector::from_raw(aux.to_vec()),
            Layout::Weights(m) => {
                let mut y = vec![0.0; self.n];
                for (w, pj) in aux.iter().zip(m.vertices()) {
                    axpy(&mut y, *w, pj);
                }
                Vector::from_raw(y)
            }
        })
    }

    /// Whether `u` is in the difference: LP feasibility over the auxiliary
    /// block.
    pub fn contains(&self, u: &[f64], tol: &ToleranceConfig) -> Result<bool> {
        Error::check_dim(self.n, u.len())?;
        let k = self.aux_block().len();
        let mut problem = Problem::new(vec![0.0; k], vec![VarKind::Free; k]);
        for (row, bk) in self.system.rows().iter().zip(self.system.rhs()) {
            let (x, y) = row.split_at(self.n);
            problem.add_le(y.to_vec(), bk - dot(x, u));
        }
        Ok(simplex::solve(&problem, tol)?.status != LpStatus::Infeasible)
    }
}

/// Builds the lifted block system for `P - Q`.
pub fn hrep_minus_hrep_lifted(
    p: &HPolyhedron,
    q: &HPolyhedron,
    tol: &ToleranceConfig,
) -> Result<LiftedDifference> {
    Error::check_dim(p.dim(), q.dim())?;
    p.ensure_nonempty(tol)?;
    q.ensure_nonempty(tol)?;
    let n = p.dim();
    let mut rows = Vec::with_capacity(p.n_rows() + q.n_rows());
    let mut b = Vec::with_capacity(p.n_rows() + q.n_rows());
    for (a, bk) in p.rows().iter().zip(p.rhs()) {
        let mut r = a.to_vec();
        r.extend_from_slice(a);
        rows.push(Vector::from_raw(r));
        b.push(*bk);
    }
    for (a, bk) in q.rows().iter().zip(q.rhs()) {
        let mut r = vec![0.0; n];
        r.extend_from_slice(a);
        rows.push(Vector::from_raw(r));
        b.push(*bk);
    }
    Ok(LiftedDifference {
        system: HPolyhedron::from_parts(rows, b, 2 * n),
        n,
        layout: Layout::Blocks { r1: p.n_rows() },
    })
}

/// The pairwise difference `{x - y : x in P, y in conv M}` over `(u, w)`
/// with `w` in the unit simplex of `R^m`:
///
/// ```text
/// [ A | A p_1 ... A p_m ] (u, w) <= b
/// w >= 0,  sum w = 1
/// ```
pub fn hrep_minus_vrep_lifted(
    p: &HPolyhedron,
    m: &VPolytope,
    tol: &ToleranceConfig,
) -> Result<LiftedDifference> {
    Error::check_dim(p.dim(), m.dim())?;
    p.ensure_nonempty(tol)?;
    let n = p.dim();
    let k = m.len();
    let mut rows = Vec::with_capacity(p.n_rows() + k + 2);
    let mut b = Vec::with_capacity(p.n_rows() + k + 2);
    for (a, bk) in p.rows().iter().zip(p.rhs()) {
        let mut r = a.to_vec();
        r.extend(m.vertices().iter().map(|pj| a.dot(pj)));
        rows.push(Vector::from_raw(r));
        b.push(*bk);
    }
    for j in 0..k {
        let mut r = vec![0.0; n + k];
        r[n + j] = -1.0;
        rows.push(Vector::from_raw(r));
        b.push(0.0);
    }
    for sign in [1.0, -1.0] {
        let mut r = vec![0.0; n];
        r.extend(std::iter::repeat_n(sign, k));
        rows.push(Vector::from_raw(r));
        b.push(sign);
    }
    Ok(LiftedDifference {
        system: HPolyhedron::from_parts(rows, b, n + k),
        n,
        layout: Layout::Weights(m.clone()),
    })
}

/// Membership of `u` in a lifted difference.
pub fn diff_membership(l: &LiftedDifference, u: &[f64], tol: &ToleranceConfig) -> Result<bool> {
    l.contains(u, tol)
}
