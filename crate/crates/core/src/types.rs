//! Value types for points, hull-represented polytopes and half-space
//! polyhedra, plus the membership predicates on them.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::minkdiff::LiftedDifference;
use crate::solvers::simplex::{self, LpStatus, Problem, VarKind};

/// Numerical settings shared by every solver call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Slack allowed when checking a constraint.
    pub feas_tol: f64,
    /// Optimality / duality-gap threshold.
    pub opt_tol: f64,
    pub max_iter: usize,
    /// Seed for the sampled lower bounds reported by the classifier.
    pub seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            feas_tol: 1e-9,
            opt_tol: 1e-10,
            max_iter: 200_000,
            seed: 0x5eed,
        }
    }
}

impl ToleranceConfig {
    pub fn new(feas_tol: f64, opt_tol: f64, max_iter: usize) -> Result<Self> {
        if !(feas_tol > 0.0 && feas_tol.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "feas_tol must be positive, got {feas_tol}"
            )));
        }
        if !(opt_tol > 0.0 && opt_tol.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "opt_tol must be positive, got {opt_tol}"
            )));
        }
        if max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be at least 1".into()));
        }
        Ok(Self {
            feas_tol,
            opt_tol,
            max_iter,
            ..Self::default()
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// A point or direction in `R^n` with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput(
                "vector must have positive dimension".into(),
            ));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite coordinate {bad}")));
        }
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// Caller guarantees the invariants.
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|c| c.is_finite()));
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.0, other)
    }

    pub(crate) fn neg(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Vector::new(v)
    }
}

/// Convex hull of a nonempty finite list of generators.
///
/// Duplicate or affinely dependent generators are accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct VPolytope {
    vertices: Vec<Vector>,
    dim: usize,
}

impl VPolytope {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let vertices = vertices
            .into_iter()
            .map(Vector::new)
            .collect::<Result<Vec<_>>>()?;
        Self::from_vectors(vertices)
    }

    pub fn from_vectors(vertices: Vec<Vector>) -> Result<Self> {
        let first = vertices
            .first()
            .ok_or_else(|| Error::InvalidInput("polytope needs at least one generator".into()))?;
        let dim = first.dim();
        for v in &vertices {
            Error::check_dim(dim, v.dim())?;
        }
        Ok(Self { vertices, dim })
    }

    pub fn singleton(p: Vector) -> Self {
        let dim = p.dim();
        Self {
            vertices: vec![p],
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Membership by LP feasibility of `sum a_i z_i = x, sum a_i = 1, a >= 0`.
    pub fn contains(&self, x: &[f64], tol: &ToleranceConfig) -> Result<bool> {
        Error::check_dim(self.dim, x.len())?;
        hull_contains(
            &self
                .vertices
                .iter()
                .map(|v| v.as_slice())
                .collect::<Vec<_>>(),
            x,
            tol,
        )
    }

    /// Largest `<c, v>` over the generators.
    pub fn support_sup(&self, c: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(c))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest `<c, v>` over the generators.
    pub fn support_min(&self, c: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(c))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Phase-1 feasibility of the convex-combination system.
pub(crate) fn hull_contains(points: &[&[f64]], x: &[f64], tol: &ToleranceConfig) -> Result<bool> {
    let m = points.len();
    let n = x.len();
    let mut problem = Problem::new(vec![0.0; m], vec![VarKind::NonNeg; m]);
    for d in 0..n {
        let row: Vec<f64> = points.iter().map(|p| p[d]).collect();
        problem.add_eq(row, x[d]);
    }
    problem.add_eq(vec![1.0; m], 1.0);
    let sol = simplex::solve(&problem, tol)?;
    Ok(sol.status != LpStatus::Infeasible)
}

/// Intersection of closed half-spaces `<a_k, x> <= b_k`.
///
/// Zero rows with `b_k >= 0` are vacuous and dropped on construction; a zero
/// row with `b_k < 0` is rejected. The point set may be empty or unbounded.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolyhedron {
    rows: Vec<Vector>,
    b: Vec<f64>,
    dim: usize,
}

impl HPolyhedron {
    pub fn new(rows: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        if rows.len() != b.len() {
            return Err(Error::InvalidInput(format!(
                "{} constraint rows but {} right-hand sides",
                rows.len(),
                b.len()
            )));
        }
        let dim = rows
            .first()
            .map(|r| r.len())
            .ok_or_else(|| Error::InvalidInput("polyhedron needs at least one row".into()))?;
        if dim == 0 {
            return Err(Error::InvalidInput(
                "rows must have positive dimension".into(),
            ));
        }
        if let Some(bad) = b.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite right-hand side {bad}"
            )));
        }
        let mut kept_rows = Vec::with_capacity(rows.len());
        let mut kept_b = Vec::with_capacity(b.len());
        for (row, bk) in rows.into_iter().zip(b) {
            Error::check_dim(dim, row.len())?;
            let row = Vector::new(row)?;
            if row.iter().all(|&a| a == 0.0) {
                if bk < 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "zero constraint row with negative right-hand side {bk}"
                    )));
                }
                continue;
            }
            kept_rows.push(row);
            kept_b.push(bk);
        }
        if kept_rows.is_empty() {
            return Err(Error::InvalidInput("all constraint rows are zero".into()));
        }
        Ok(Self {
            rows: kept_rows,
            b: kept_b,
            dim,
        })
    }

    /// Builds from rows already known to be valid and nonzero.
    pub(crate) fn from_parts(rows: Vec<Vector>, b: Vec<f64>, dim: usize) -> Self {
        debug_assert_eq!(rows.len(), b.len());
        debug_assert!(rows.iter().all(|r| r.dim() == dim));
        Self { rows, b, dim }
    }

    /// The nonnegative orthant `{x >= 0}` as rows `-x_j <= 0`.
    pub fn orthant(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput(
                "orthant needs positive dimension".into(),
            ));
        }
        let rows = (0..dim)
            .map(|j| {
                let mut r = vec![0.0; dim];
                r[j] = -1.0;
                Vector::from_raw(r)
            })
            .collect();
        Ok(Self::from_parts(rows, vec![0.0; dim], dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.rows[k]
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// `<a_k, x> - b_k` for every row.
    pub fn slacks(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .zip(&self.b)
            .map(|(a, bk)| a.dot(x) - bk)
            .collect()
    }

    pub fn contains(&self, x: &[f64], tol: &ToleranceConfig) -> Result<bool> {
        Error::check_dim(self.dim, x.len())?;
        Ok(self.slacks(x).iter().all(|&s| s <= tol.feas_tol))
    }

    /// Indices of rows satisfied as equations at `x`, within `feas_tol`.
    pub fn active_rows(&self, x: &[f64], tol: &ToleranceConfig) -> Result<Vec<usize>> {
        if !self.contains(x, tol)? {
            return Err(Error::InvalidInput(
                "point violates the constraint system".into(),
            ));
        }
        Ok(self
            .slacks(x)
            .iter()
            .enumerate()
            .filter(|(_, s)| s.abs() <= tol.feas_tol)
            .map(|(k, _)| k)
            .collect())
    }

    /// Whether the system has a solution (simplex phase 1).
    pub fn is_feasible(&self, tol: &ToleranceConfig) -> Result<bool> {
        let sol = simplex::solve(&self.lp(vec![0.0; self.dim]), tol)?;
        Ok(sol.status != LpStatus::Infeasible)
    }

    pub(crate) fn ensure_nonempty(&self, tol: &ToleranceConfig) -> Result<()> {
        if self.is_feasible(tol)? {
            Ok(())
        } else {
            Err(Error::EmptySet)
        }
    }

    /// LP skeleton over free variables with this system as `<=` rows.
    pub(crate) fn lp(&self, objective: Vec<f64>) -> Problem {
        let mut problem = Problem::new(objective, vec![VarKind::Free; self.dim]);
        for (a, bk) in self.rows.iter().zip(&self.b) {
            problem.add_le(a.to_vec(), *bk);
        }
        problem
    }

    /// Mirror image `{-x : x in P}`.
    #[cfg(test)]
    pub(crate) fn reflect(&self) -> Self {
        Self::from_parts(
            self.rows.iter().map(Vector::neg).collect(),
            self.b.clone(),
            self.dim,
        )
    }
}

/// Axis-aligned box `lower <= x <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSet {
    lower: Vector,
    upper: Vector,
}

impl BoxSet {
    /// Rejects a box with `lower_i > upper_i` as empty.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let lower = Vector::new(lower)?;
        let upper = Vector::new(upper)?;
        Error::check_dim(lower.dim(), upper.dim())?;
        if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::EmptySet);
        }
        Ok(Self { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &Vector {
        &self.lower
    }

    pub fn upper(&self) -> &Vector {
        &self.upper
    }

    pub fn contains(&self, x: &[f64], tol: &ToleranceConfig) -> Result<bool> {
        Error::check_dim(self.dim(), x.len())?;
        Ok(x.iter()
            .zip(self.lower.iter().zip(self.upper.iter()))
            .all(|(xi, (l, u))| *xi <= u + tol.feas_tol && -xi <= -l + tol.feas_tol))
    }

    /// `2n` rows: first `x_i <= u_i` for every axis, then `-x_i <= -l_i`.
    pub fn to_hrep(&self) -> HPolyhedron {
        let n = self.dim();
        let mut rows = Vec::with_capacity(2 * n);
        let mut b = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut r = vec![0.0; n];
            r[i] = 1.0;
            rows.push(Vector::from_raw(r));
            b.push(self.upper[i]);
        }
        for i in 0..n {
            let mut r = vec![0.0; n];
            r[i] = -1.0;
            rows.push(Vector::from_raw(r));
            b.push(-self.lower[i]);
        }
        HPolyhedron::from_parts(rows, b, n)
    }

    /// All `2^n` corners; bit `i` of the corner index selects `upper_i`.
    pub fn to_vrep(&self) -> VPolytope {
        let n = self.dim();
        let corners = (0..1usize << n)
            .map(|mask| {
                Vector::from_raw(
                    (0..n)
                        .map(|i| {
                            if mask >> i & 1 == 1 {
                                self.upper[i]
                            } else {
                                self.lower[i]
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        VPolytope {
            vertices: corners,
            dim: n,
        }
    }
}

/// Closed Euclidean ball `|x - center| <= radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSet {
    center: Vector,
    radius: f64,
}

impl BallSet {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "radius must be finite and nonnegative, got {radius}"
            )));
        }
        Ok(Self {
            center: Vector::new(center)?,
            radius,
        })
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, x: &[f64], tol: &ToleranceConfig) -> Result<bool> {
        Error::check_dim(self.dim(), x.len())?;
        let d = crate::linalg::sub(x, &self.center);
        Ok(crate::linalg::norm_sq(&d) <= self.radius * self.radius + tol.feas_tol)
    }
}

/// Any set the separability and distance machinery can work on.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet {
    V(VPolytope),
    H(HPolyhedron),
    /// A half-space/half-space difference in lifted form. Only valid as a
    /// difference set, not as an operand.
    Lifted(LiftedDifference),
}

impl ConvexSet {
    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::V(p) => p.dim(),
            ConvexSet::H(p) => p.dim(),
            ConvexSet::Lifted(l) => l.n(),
        }
    }

    pub fn contains(&self, x: &[f64], tol: &ToleranceConfig) -> Result<bool> {
        match self {
            ConvexSet::V(p) => p.contains(x, tol),
            ConvexSet::H(p) => p.contains(x, tol),
            ConvexSet::Lifted(l) => l.contains(x, tol),
        }
    }
}

impl From<VPolytope> for ConvexSet {
    fn from(p: VPolytope) -> Self {
        ConvexSet::V(p)
    }
}

impl From<HPolyhedron> for ConvexSet {
    fn from(p: HPolyhedron) -> Self {
        ConvexSet::H(p)
    }
}

impl From<LiftedDifference> for ConvexSet {
    fn from(l: LiftedDifference) -> Self {
        ConvexSet::Lifted(l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn unit_square() -> HPolyhedron {
        BoxSet::new(vec![-1.0, -1.0], vec![1.0, 1.0])
            .unwrap()
            .to_hrep()
    }

    #[test]
    fn contains_h_examples() {
        let p = HPolyhedron::new(vec![vec![1.0]], vec![1.0]).unwrap();
        assert!(p.contains(&[0.0], &tol()).unwrap());
        assert!(!p.contains(&[1.0 + 2.0 * tol().feas_tol], &tol()).unwrap());
        assert!(unit_square().contains(&[1.0, 1.0], &tol()).unwrap());
        assert!(matches!(
            p.contains(&[0.0, 0.0], &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn contains_v_examples() {
        let tri = VPolytope::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(tri.contains(&[0.25, 0.25], &tol()).unwrap());
        assert!(!tri.contains(&[1.0, 1.0], &tol()).unwrap());
        let single = VPolytope::new(vec![vec![2.0, 2.0]]).unwrap();
        assert!(single.contains(&[2.0, 2.0], &tol()).unwrap());
        assert!(tri.contains(&[1.0], &tol()).is_err());
    }

    #[test]
    fn active_rows_examples() {
        let sq = unit_square();
        // row 0 is x1 <= 1, row 1 is x2 <= 1
        assert_eq!(sq.active_rows(&[1.0, 0.0], &tol()).unwrap(), vec![0]);
        assert_eq!(sq.active_rows(&[1.0, 1.0], &tol()).unwrap(), vec![0, 1]);
        assert!(sq.active_rows(&[0.0, 0.0], &tol()).unwrap().is_empty());
        assert!(sq.active_rows(&[2.0, 0.0], &tol()).is_err());
    }

    #[test]
    fn zero_rows() {
        let p = HPolyhedron::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![1.0, 2.0]).unwrap();
        assert_eq!(p.n_rows(), 1);
        assert!(HPolyhedron::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![-1.0, 2.0]).is_err());
        assert!(HPolyhedron::new(vec![vec![0.0]], vec![1.0]).is_err());
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(Vector::new(vec![f64::NAN]).is_err());
        assert!(Vector::new(vec![]).is_err());
        assert!(VPolytope::new(vec![]).is_err());
        assert!(VPolytope::new(vec![vec![0.0], vec![0.0, 1.0]]).is_err());
        assert!(matches!(
            BoxSet::new(vec![1.0], vec![0.0]),
            Err(Error::EmptySet)
        ));
        assert!(BallSet::new(vec![0.0], -1.0).is_err());
        assert!(ToleranceConfig::new(0.0, 1e-10, 10).is_err());
        assert!(ToleranceConfig::new(1e-9, 1e-10, 0).is_err());
    }

    #[test]
    fn empty_polyhedron_is_representable() {
        let p = HPolyhedron::new(vec![vec![1.0], vec![-1.0]], vec![0.0, -1.0]).unwrap();
        assert!(!p.is_feasible(&tol()).unwrap());
        assert!(unit_square().is_feasible(&tol()).unwrap());
    }

    #[test]
    fn box_corners() {
        let b = BoxSet::new(vec![0.0, 1.0], vec![2.0, 3.0]).unwrap();
        let v = b.to_vrep();
        assert_eq!(v.len(), 4);
        assert_eq!(v.vertices()[0].as_slice(), &[0.0, 1.0]);
        assert_eq!(v.vertices()[3].as_slice(), &[2.0, 3.0]);
    }
}
