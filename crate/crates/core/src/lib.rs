//! Exact Minkowski differences of convex polyhedra in arbitrary dimension.
//!
//! Polytopes are carried either as the convex hull of finitely many points
//! ([`VPolytope`]) or as an intersection of half-spaces ([`HPolyhedron`]).
//! The difference `A - B = {a - b}` is built in closed form for every
//! pairing:
//!
//! - hull minus hull: all pairwise generator differences ([`vrep_minus_vrep`]);
//! - half-spaces minus hull: same rows, right-hand side shifted by the
//!   row-wise maximum over the subtrahend's generators ([`hrep_minus_vrep`]);
//! - half-spaces minus half-spaces: a block system in twice the dimension
//!   whose first block projects onto the difference ([`hrep_minus_hrep_lifted`]).
//!
//! On top of these the crate classifies the origin against a difference set
//! (exterior / boundary / interior), separates two sets by a hyperplane,
//! computes distances and nearest points, and solves the three
//! separation-related variational inequalities.

pub mod error;
mod linalg;
pub mod minkdiff;
pub mod oracles;
pub mod separability;
pub mod solvers;
pub mod types;
pub mod variational;

pub use error::{Error, Result};
pub use minkdiff::{
    ball_minus_point, box_minus_point, diff_membership, hrep_minus_hrep_lifted, hrep_minus_point,
    hrep_minus_vrep, hrep_minus_vrep_lifted, hrep_minus_vrep_raw, orthant_minus_point, reduce_vrep,
    vrep_minus_vrep, LiftedDifference,
};
pub use separability::{
    classify_origin, distance, linf_maximin, maximin_direction, nearest_points, project_difference,
    separate, support_inf_difference, Exactness, OriginCategory, OriginLocation, SeparationReport,
    Verdict,
};
pub use solvers::{
    min_norm_point_vrep, project_origin, project_origin_hrep, simplex_solve, support_inf,
    ExtendedReal, LPResult, LPStatus, ProjectionResult, Witness,
};
pub use types::{BallSet, BoxSet, ConvexSet, HPolyhedron, ToleranceConfig, VPolytope, Vector};
pub use variational::{solve_vi_omega, solve_vi_strong, solve_vi_weak, VICertificate, VIOutcome};
