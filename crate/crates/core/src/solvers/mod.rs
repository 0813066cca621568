//! Dense numerical engines: a two-phase simplex LP, projection of the origin
//! onto a half-space system, and the minimum-norm point of a hull.

pub(crate) mod nnls;
mod projection;
pub(crate) mod simplex;
mod wolfe;

pub(crate) use projection::project_lifted_origin;
pub use projection::project_origin_hrep;
pub use simplex::LpStatus as LPStatus;

use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::types::{ConvexSet, HPolyhedron, ToleranceConfig, VPolytope, Vector};

/// Outcome of [`simplex_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct LPResult {
    pub status: LPStatus,
    /// Present iff `status` is `Optimal`.
    pub x_opt: Option<Vector>,
    pub objective: Option<f64>,
    /// Multipliers of the inequality rows followed by the extra equalities
    /// (`y <= 0` on inequality rows). Present iff `Optimal`.
    pub duals: Option<Vec<f64>>,
}

/// `min <objective, x>` over `P` intersected with the extra equalities.
pub fn simplex_solve(
    objective: &[f64],
    p: &HPolyhedron,
    extra_equalities: &[(Vector, f64)],
    tol: &ToleranceConfig,
) -> Result<LPResult> {
    Error::check_dim(p.dim(), objective.len())?;
    for (row, _) in extra_equalities {
        Error::check_dim(p.dim(), row.dim())?;
    }
    let mut problem = p.lp(objective.to_vec());
    for (row, rhs) in extra_equalities {
        problem.add_eq(row.to_vec(), *rhs);
    }
    let sol = simplex::solve(&problem, tol)?;
    Ok(match sol.status {
        LPStatus::Optimal => LPResult {
            status: sol.status,
            x_opt: Some(Vector::from_raw(sol.x)),
            objective: Some(sol.objective),
            duals: Some(sol.le_duals.into_iter().chain(sol.eq_duals).collect()),
        },
        status => LPResult {
            status,
            x_opt: None,
            objective: None,
            duals: None,
        },
    })
}

/// Value of `inf <c, x>` over a set; `NegInfinity` when unbounded below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    NegInfinity,
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::NegInfinity => None,
        }
    }

    pub fn is_neg_infinity(self) -> bool {
        matches!(self, ExtendedReal::NegInfinity)
    }

    /// `f64::NEG_INFINITY` for the marker.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::NEG_INFINITY)
    }
}

/// `inf_{x in S} <c, x>`.
pub fn support_inf(s: &ConvexSet, c: &[f64], tol: &ToleranceConfig) -> Result<ExtendedReal> {
    Error::check_dim(s.dim(), c.len())?;
    match s {
        ConvexSet::V(p) => Ok(ExtendedReal::Finite(p.support_min(c))),
        ConvexSet::H(p) => lp_inf(p.lp(c.to_vec()), tol),
        ConvexSet::Lifted(l) => {
            let mut obj = c.to_vec();
            obj.extend(std::iter::repeat_n(0.0, l.aux_block().len()));
            lp_inf(l.system().lp(obj), tol)
        }
    }
}

fn lp_inf(problem: simplex::Problem, tol: &ToleranceConfig) -> Result<ExtendedReal> {
    let sol = simplex::solve(&problem, tol)?;
    match sol.status {
        LPStatus::Optimal => Ok(ExtendedReal::Finite(sol.objective)),
        LPStatus::Unbounded => Ok(ExtendedReal::NegInfinity),
        LPStatus::Infeasible => Err(Error::EmptySet),
    }
}

/// Certificate attached to a projection.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `(generator index, weight)` pairs of a convex combination.
    ConvexWeights(Vec<(usize, f64)>),
    /// KKT multipliers, one per constraint row: `point = -sum lambda_k a_k`.
    Multipliers(Vec<f64>),
    /// Lifted half-space difference: the auxiliary block of the minimizer
    /// and the row multipliers of the lifted system.
    Lifted { aux: Vector, multipliers: Vec<f64> },
}

/// Euclidean projection of the origin onto a set.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub point: Vector,
    /// `|point|`, the distance from the origin to the set.
    pub distance: f64,
    pub witness: Option<Witness>,
    pub iterations: usize,
    /// Whether the optimality certificate held at the configured tolerances.
    pub certified: bool,
}

impl ProjectionResult {
    pub(crate) fn new(
        point: Vec<f64>,
        witness: Witness,
        iterations: usize,
        certified: bool,
    ) -> Self {
        let distance = norm(&point);
        Self {
            point: Vector::from_raw(point),
            distance,
            witness: Some(witness),
            iterations,
            certified,
        }
    }

    pub(crate) fn from_min_norm(m: wolfe::MinNorm, certified: bool) -> Self {
        Self::new(
            m.point,
            Witness::ConvexWeights(m.weights),
            m.iterations,
            certified,
        )
    }

    /// Convex weights when the witness is a generator combination.
    pub fn convex_weights(&self) -> Option<&[(usize, f64)]> {
        match &self.witness {
            Some(Witness::ConvexWeights(w)) => Some(w),
            _ => None,
        }
    }
}

/// Minimum-norm point of a hull with its convex-combination witness.
pub fn min_norm_point_vrep(p: &VPolytope, tol: &ToleranceConfig) -> Result<ProjectionResult> {
    let points: Vec<&[f64]> = p.vertices().iter().map(|v| v.as_slice()).collect();
    let m = wolfe::min_norm_point(&points, tol)?;
    let certified = m.converged;
    Ok(ProjectionResult::from_min_norm(m, certified))
}

/// Projection of the origin onto any supported set.
pub fn project_origin(s: &ConvexSet, tol: &ToleranceConfig) -> Result<ProjectionResult> {
    match s {
        ConvexSet::V(p) => min_norm_point_vrep(p, tol),
        ConvexSet::H(p) => project_origin_hrep(p, tol),
        ConvexSet::Lifted(l) => project_lifted_origin(l, tol),
    }
}
