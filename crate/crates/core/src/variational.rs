//! The three variational inequalities over `z in A - B`:
//!
//! * strong: `<c, z> >= delta` for some `delta > 0`,
//! * omega: `<c, z - c> >= 0`,
//! * weak: `<c, z> >= 0` with `c != 0`.

use std::fmt;

use crate::error::{Error, Result};
use crate::separability::{
    locate_difference, project_difference, support_inf_difference, OriginCategory,
};
use crate::types::{ConvexSet, ToleranceConfig, Vector};

/// Why a VI is or is not solvable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VICertificate {
    /// `0` is not in `A - B` (strong and omega forms are solvable).
    OriginOutsideDifference,
    /// `0` is in `A - B` (strong and omega forms have no nonzero solution).
    OriginInDifference,
    /// `0` is not interior to `A - B` (weak form is solvable).
    OriginNotInterior,
    /// `0` is interior to `A - B`, so the operands share interior points.
    OriginInterior,
}

impl fmt::Display for VICertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VICertificate::OriginOutsideDifference => "0 not in A - B",
            VICertificate::OriginInDifference => "0 in A - B",
            VICertificate::OriginNotInterior => "0 not in int(A - B)",
            VICertificate::OriginInterior => "0 in int(A - B)",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VIOutcome {
    pub solvable: bool,
    /// A nonzero solution `c` when solvable.
    pub witness: Option<Vector>,
    pub certificate: VICertificate,
    /// Exact minimum of `lhs - rhs` over `A - B` at the witness (via support
    /// functions); `0` when there is no witness.
    pub residual: f64,
    /// Whether the projection behind the answer was certified and the
    /// residual is within tolerance.
    pub certified: bool,
}

impl VIOutcome {
    fn unsolvable(certificate: VICertificate, certified: bool) -> Self {
        Self {
            solvable: false,
            witness: None,
            certificate,
            residual: 0.0,
            certified,
        }
    }
}

fn residual_tol(c: &[f64], tol: &ToleranceConfig) -> f64 {
    10.0 * tol.feas_tol * Vector::from_raw(c.to_vec()).norm().max(1.0)
}

fn solved(
    a: &ConvexSet,
    b: &ConvexSet,
    c: Vec<f64>,
    offset: f64,
    certificate: VICertificate,
    certified: bool,
    tol: &ToleranceConfig,
) -> Result<VIOutcome> {
    let residual = support_inf_difference(a, b, &c, tol)?.to_f64() - offset;
    let ok = residual >= -residual_tol(&c, tol);
    Ok(VIOutcome {
        solvable: true,
        witness: Some(Vector::from_raw(c)),
        certificate,
        residual,
        certified: certified && ok,
    })
}

/// `<c, z> >= delta` on `A - B`: solvable iff `0` is outside the difference,
/// with witness `c = delta P / |P|^2` for the projection `P` of the origin.
pub fn solve_vi_strong(
    a: &ConvexSet,
    b: &ConvexSet,
    delta: f64,
    tol: &ToleranceConfig,
) -> Result<VIOutcome> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let p = project_difference(a, b, tol)?;
    if p.distance <= tol.feas_tol {
        return Ok(VIOutcome::unsolvable(
            VICertificate::OriginInDifference,
            p.certified,
        ));
    }
    let s = delta / (p.distance * p.distance);
    let c = p.point.iter().map(|x| s * x).collect();
    solved(
        a,
        b,
        c,
        delta,
        VICertificate::OriginOutsideDifference,
        p.certified,
        tol,
    )
}

/// `<c, z - c> >= 0` on `A - B`: solvable with `c != 0` iff `0` is outside
/// the difference; the projection of the origin is a solution.
pub fn solve_vi_omega(a: &ConvexSet, b: &ConvexSet, tol: &ToleranceConfig) -> Result<VIOutcome> {
    let p = project_difference(a, b, tol)?;
    if p.distance <= tol.feas_tol {
        return Ok(VIOutcome::unsolvable(
            VICertificate::OriginInDifference,
            p.certified,
        ));
    }
    let c = p.point.to_vec();
    let offset = p.distance * p.distance;
    solved(
        a,
        b,
        c,
        offset,
        VICertificate::OriginOutsideDifference,
        p.certified,
        tol,
    )
}

/// `<c, z> >= 0` on `A - B` with `c != 0`: solvable iff `0` is not interior
/// to the difference; the maximin direction is a solution.
pub fn solve_vi_weak(a: &ConvexSet, b: &ConvexSet, tol: &ToleranceConfig) -> Result<VIOutcome> {
    let loc = locate_difference(a, b, tol)?;
    let certified = loc.projection.certified;
    if loc.category == OriginCategory::Interior {
        return Ok(VIOutcome::unsolvable(
            VICertificate::OriginInterior,
            certified,
        ));
    }
    let c = loc
        .direction
        .ok_or_else(|| Error::numerical("no weak-support direction found"))?;
    solved(
        a,
        b,
        c.into_inner(),
        0.0,
        VICertificate::OriginNotInterior,
        certified,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{BoxSet, VPolytope};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn v(pts: &[&[f64]]) -> ConvexSet {
        VPolytope::new(pts.iter().map(|p| p.to_vec()).collect())
            .unwrap()
            .into()
    }

    fn hbox(lo: &[f64], hi: &[f64]) -> ConvexSet {
        BoxSet::new(lo.to_vec(), hi.to_vec())
            .unwrap()
            .to_hrep()
            .into()
    }

    #[test]
    fn strong_examples() {
        let r = solve_vi_strong(&v(&[&[2.0, 0.0]]), &v(&[&[0.0, 0.0]]), 1.0, &tol()).unwrap();
        assert!(r.solvable && r.certified);
        let c = r.witness.unwrap();
        assert!((c[0] - 0.5).abs() < 1e-12 && c[1].abs() < 1e-12);
        assert!(r.residual >= -1e-12);

        let sq = v(&[&[0.0, 0.0], &[1.0, 1.0]]);
        let r = solve_vi_strong(&sq, &sq, 1.0, &tol()).unwrap();
        assert!(!r.solvable && r.witness.is_none());
        assert_eq!(r.certificate, VICertificate::OriginInDifference);

        let r = solve_vi_strong(&hbox(&[2.0], &[3.0]), &hbox(&[0.0], &[1.0]), 2.0, &tol()).unwrap();
        assert!((r.witness.unwrap()[0] - 2.0).abs() < 1e-9);
        assert!(r.residual >= -1e-9);

        assert!(solve_vi_strong(&sq, &sq, 0.0, &tol()).is_err());
    }

    #[test]
    fn strong_witness_is_linear_in_delta() {
        let a = hbox(&[2.0, 1.0], &[3.0, 2.0]);
        let b = v(&[&[0.0, 0.0], &[0.5, -1.0]]);
        let c1 = solve_vi_strong(&a, &b, 1.5, &tol())
            .unwrap()
            .witness
            .unwrap();
        let c2 = solve_vi_strong(&a, &b, 3.0, &tol())
            .unwrap()
            .witness
            .unwrap();
        for (x, y) in c1.iter().zip(c2.iter()) {
            assert!((2.0 * x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn omega_examples() {
        let r = solve_vi_omega(&v(&[&[2.0, 0.0]]), &v(&[&[0.0, 0.0]]), &tol()).unwrap();
        assert_eq!(r.witness.unwrap().as_slice(), &[2.0, 0.0]);
        assert!(r.residual.abs() < 1e-12);

        let r = solve_vi_omega(&hbox(&[0.0], &[2.0]), &hbox(&[1.0], &[3.0]), &tol()).unwrap();
        assert!(!r.solvable);

        let r = solve_vi_omega(&hbox(&[2.0], &[3.0]), &hbox(&[0.0], &[1.0]), &tol()).unwrap();
        assert!((r.witness.unwrap()[0] - 1.0).abs() < 1e-9);
        assert!(r.residual >= -1e-9);
    }

    #[test]
    fn weak_examples() {
        let r = solve_vi_weak(&hbox(&[1.0], &[2.0]), &hbox(&[0.0], &[1.0]), &tol()).unwrap();
        assert!(r.solvable);
        assert!((r.witness.unwrap()[0] - 1.0).abs() < 1e-12);

        let sq = hbox(&[0.0, 0.0], &[1.0, 1.0]);
        let r = solve_vi_weak(&sq, &sq, &tol()).unwrap();
        assert!(!r.solvable);
        assert_eq!(r.certificate, VICertificate::OriginInterior);

        let r = solve_vi_weak(&v(&[&[3.0, 0.0]]), &sq, &tol()).unwrap();
        assert!(r.solvable && r.residual > 1.0);
    }
}
