//! Origin location, separation of two sets through their difference,
//! distance and nearest points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{add, norm, scale, sub};
use crate::minkdiff::{hrep_minus_hrep_lifted, hrep_minus_vrep_lifted, vrep_minus_vrep};
use crate::solvers::simplex::{self, LpStatus, Problem, VarKind};
use crate::solvers::{project_origin, support_inf, ExtendedReal, ProjectionResult, Witness};
use crate::types::{ConvexSet, HPolyhedron, ToleranceConfig, VPolytope, Vector};

/// Number of seeded random directions tried for a sampled interior margin.
const INTERIOR_SAMPLES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OriginCategory {
    Exterior,
    Boundary,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    /// The margin is `t(c)` for the best direction found, so it bounds the
    /// maximin value from below.
    LowerBound,
}

/// Where the origin sits relative to a set, with the maximin value
/// `t* = max_{|c| = 1} inf_{x in S} <c, x>` and its direction.
#[derive(Debug, Clone, PartialEq)]
pub struct OriginLocation {
    pub category: OriginCategory,
    /// Positive outside, zero on the boundary, negative inside. May be
    /// `-inf` for an interior origin of a set with no bounded direction.
    pub margin: f64,
    /// Unit direction attaining (or bounding) the margin.
    pub direction: Option<Vector>,
    pub exactness: Exactness,
    /// Projection of the origin onto the set.
    pub projection: ProjectionResult,
}

impl OriginLocation {
    fn mirrored(mut self) -> Self {
        self.direction = self.direction.map(|d| d.neg());
        self.projection.point = self.projection.point.neg();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    StronglySeparable,
    NonStronglySeparable,
    Inseparable,
}

/// Outcome of [`separate`]: the hyperplane `<c, x> = gamma` has `A` on the
/// side `<c, a> >= gamma` and `B` on `<c, b> <= gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    pub verdict: Verdict,
    /// Unit normal `c`; `None` when inseparable.
    pub direction: Option<Vector>,
    /// Offset `gamma`; `None` when inseparable.
    pub offset: Option<f64>,
    /// `inf_A <c, a> - sup_B <c, b>`, clamped at zero.
    pub thickness: f64,
    /// Location of the origin relative to `A - B`.
    pub origin_result: OriginLocation,
}

/// Maximizes `inf_{x in S} <c, x>` over `|c|_inf = 1`.
///
/// Runs one LP per fixed coordinate `c_k = +-1`. Returns the best `(c, value)`
/// or `None` when every such `c` has an unbounded infimum.
pub fn linf_maximin(s: &ConvexSet, tol: &ToleranceConfig) -> Result<Option<(Vector, f64)>> {
    let n = s.dim();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for k in 0..n {
        for sign in [1.0, -1.0] {
            let problem = match s {
                ConvexSet::V(p) => maximin_lp_vrep(p, k, sign),
                ConvexSet::H(p) => maximin_lp_rows(p, n, k, sign),
                ConvexSet::Lifted(l) => maximin_lp_rows(l.system(), n, k, sign),
            };
            let sol = simplex::solve(&problem, tol)?;
            if sol.status != LpStatus::Optimal {
                continue;
            }
            let value = sol.x[n];
            if best.as_ref().is_none_or(|(_, v)| value > *v) {
                best = Some((sol.x[..n].to_vec(), value));
            }
        }
    }
    Ok(best.map(|(c, v)| (Vector::from_raw(c), v)))
}

/// Variables `(c, s)`; rows `s <= <c, v_i>` and the box on `c`.
fn maximin_lp_vrep(p: &VPolytope, k: usize, sign: f64) -> Problem {
    let n = p.dim();
    let mut objective = vec![0.0; n + 1];
    objective[n] = -1.0;
    let mut lp = Problem::new(objective, vec![VarKind::Free; n + 1]);
    bound_direction(&mut lp, n, n + 1, k, sign);
    for v in p.vertices() {
        let mut row: Vec<f64> = v.iter().map(|x| -x).collect();
        row.push(1.0);
        lp.add_le(row, 0.0);
    }
    lp
}

/// Variables `(c, s, lambda)`; the infimum over `{Dz <= b}` is dualized:
/// `s <= -b^T lambda` with `D^T lambda = -(c, 0)`, `lambda >= 0`.
fn maximin_lp_rows(system: &HPolyhedron, n: usize, k: usize, sign: f64) -> Problem {
    let r = system.n_rows();
    let width = n + 1 + r;
    let mut objective = vec![0.0; width];
    objective[n] = -1.0;
    let mut kinds = vec![VarKind::Free; n + 1];
    kinds.extend(std::iter::repeat_n(VarKind::NonNeg, r));
    let mut lp = Problem::new(objective, kinds);
    bound_direction(&mut lp, n, width, k, sign);
    let mut row = vec![0.0; width];
    row[n] = 1.0;
    row[n + 1..].copy_from_slice(system.rhs());
    lp.add_le(row, 0.0);
    for j in 0..system.dim() {
        let mut row = vec![0.0; width];
        if j < n {
            row[j] = 1.0;
        }
        for (i, a) in system.rows().iter().enumerate() {
            row[n + 1 + i] = a[j];
        }
        lp.add_eq(row, 0.0);
    }
    lp
}

fn bound_direction(lp: &mut Problem, n: usize, width: usize, k: usize, sign: f64) {
    for i in 0..n {
        let mut row = vec![0.0; width];
        row[i] = 1.0;
        if i == k {
            lp.add_eq(row, sign);
        } else {
            lp.add_le(row.clone(), 1.0);
            row[i] = -1.0;
            lp.add_le(row, 1.0);
        }
    }
}

fn unit(c: &[f64]) -> Vector {
    let nc = norm(c);
    Vector::from_raw(c.iter().map(|x| x / nc).collect())
}

/// Projects the origin onto `S` and decides exterior / boundary / interior.
pub fn classify_origin(s: &ConvexSet, tol: &ToleranceConfig) -> Result<OriginLocation> {
    let projection = project_origin(s, tol)?;
    if projection.distance > tol.feas_tol {
        return Ok(OriginLocation {
            category: OriginCategory::Exterior,
            margin: projection.distance,
            direction: Some(unit(&projection.point)),
            exactness: Exactness::Exact,
            projection,
        });
    }
    match s {
        ConvexSet::H(p) => Ok(classify_inside_hrep(p, projection, tol)),
        _ => classify_inside_generic(s, projection, tol),
    }
}

/// Origin in (or within tolerance of) an H-polyhedron: the nearest
/// constraint plane decides, and its distance is the exact margin.
fn classify_inside_hrep(
    p: &HPolyhedron,
    projection: ProjectionResult,
    tol: &ToleranceConfig,
) -> OriginLocation {
    let (k, radius) = p
        .rows()
        .iter()
        .zip(p.rhs())
        .map(|(a, b)| b / a.norm())
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one row");
    let direction = Some(unit(&p.row(k).iter().map(|v| -v).collect::<Vec<_>>()));
    let (category, margin) = if radius > tol.feas_tol {
        (OriginCategory::Interior, -radius)
    } else {
        (OriginCategory::Boundary, 0.0)
    };
    OriginLocation {
        category,
        margin,
        direction,
        exactness: Exactness::Exact,
        projection,
    }
}

fn classify_inside_generic(
    s: &ConvexSet,
    projection: ProjectionResult,
    tol: &ToleranceConfig,
) -> Result<OriginLocation> {
    let lp = linf_maximin(s, tol)?;
    if let Some((c, value)) = &lp {
        if *value >= -tol.feas_tol {
            return Ok(OriginLocation {
                category: OriginCategory::Boundary,
                margin: 0.0,
                direction: Some(unit(c)),
                exactness: Exactness::Exact,
                projection,
            });
        }
    }
    let mut candidates: Vec<Vector> = lp.into_iter().map(|(c, _)| unit(&c)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(tol.seed);
    while candidates.len() < INTERIOR_SAMPLES {
        let g: Vec<f64> = (0..s.dim())
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        if norm(&g) > 1e-12 {
            candidates.push(unit(&g));
        }
    }
    let mut best: Option<(Vector, f64)> = None;
    for c in candidates {
        let t = support_inf(s, &c, tol)?.to_f64();
        if best.as_ref().is_none_or(|(_, b)| t > *b) {
            best = Some((c, t));
        }
    }
    let (c, t) = best.expect("nonempty candidates");
    Ok(OriginLocation {
        category: OriginCategory::Interior,
        margin: t.min(-f64::MIN_POSITIVE),
        direction: Some(c),
        exactness: Exactness::LowerBound,
        projection,
    })
}

/// `(c*, t*)` of the maximin problem `max_{|c| = 1} inf_{x in S} <c, x>`.
pub fn maximin_direction(s: &ConvexSet, tol: &ToleranceConfig) -> Result<(Vector, f64)> {
    let loc = classify_origin(s, tol)?;
    let c = loc
        .direction
        .ok_or_else(|| Error::numerical("no maximin direction found"))?;
    Ok((c, loc.margin))
}

fn require_plain(s: &ConvexSet) -> Result<()> {
    match s {
        ConvexSet::Lifted(_) => Err(Error::Unsupported(
            "operands must be vertex or half-space sets".into(),
        )),
        _ => Ok(()),
    }
}

fn check_operands(a: &ConvexSet, b: &ConvexSet, tol: &ToleranceConfig) -> Result<()> {
    require_plain(a)?;
    require_plain(b)?;
    Error::check_dim(a.dim(), b.dim())?;
    for s in [a, b] {
        if let ConvexSet::H(p) = s {
            p.ensure_nonempty(tol)?;
        }
    }
    Ok(())
}

/// `A - B` in the representation its operands allow, or `None` when only the
/// reflected difference `B - A` is constructible (vertex minus half-space).
fn difference(a: &ConvexSet, b: &ConvexSet, tol: &ToleranceConfig) -> Result<Option<ConvexSet>> {
    Ok(Some(match (a, b) {
        (ConvexSet::V(l), ConvexSet::V(m)) => vrep_minus_vrep(l, m)?.into(),
        (ConvexSet::H(p), ConvexSet::V(m)) => hrep_minus_vrep_lifted(p, m, tol)?.into(),
        (ConvexSet::H(p), ConvexSet::H(q)) => hrep_minus_hrep_lifted(p, q, tol)?.into(),
        (ConvexSet::V(_), ConvexSet::H(_)) => return Ok(None),
        _ => return Err(Error::Unsupported("lifted operand".into())),
    }))
}

/// Location of the origin relative to `A - B`.
pub(crate) fn locate_difference(
    a: &ConvexSet,
    b: &ConvexSet,
    tol: &ToleranceConfig,
) -> Result<OriginLocation> {
    check_operands(a, b, tol)?;
    match difference(a, b, tol)? {
        Some(d) => classify_origin(&d, tol),
        None => Ok(locate_difference(b, a, tol)?.mirrored()),
    }
}

/// Projection of the origin onto `A - B`.
///
/// For a vertex set minus a half-space set the projection is computed on
/// `B - A` and reflected; the witness then refers to that reflected set.
pub fn project_difference(
    a: &ConvexSet,
    b: &ConvexSet,
    tol: &ToleranceConfig,
) -> Result<ProjectionResult> {
    check_operands(a, b, tol)?;
    match difference(a, b, tol)? {
        Some(d) => project_origin(&d, tol),
        None => {
            let mut r = project_difference(b, a, tol)?;
            r.point = r.point.neg();
            Ok(r)
        }
    }
}

/// `inf_{z in A - B} <c, z> = inf_A <c, a> + inf_B <-c, b>`.
pub fn support_inf_difference(
    a: &ConvexSet,
    b: &ConvexSet,
    c: &[f64],
    tol: &ToleranceConfig,
) -> Result<ExtendedReal> {
    let lo = support_inf(a, c, tol)?;
    let neg: Vec<f64> = c.iter().map(|v| -v).collect();
    let hi = support_inf(b, &neg, tol)?;
    Ok(match (lo, hi) {
        (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => ExtendedReal::Finite(x + y),
        _ => ExtendedReal::NegInfinity,
    })
}

/// Separates `A` from `B` by reducing to the origin versus `A - B`.
pub fn separate(a: &ConvexSet, b: &ConvexSet, tol: &ToleranceConfig) -> Result<SeparationReport> {
    let origin_result = locate_difference(a, b, tol)?;
    let verdict = match origin_result.category {
        OriginCategory::Exterior => Verdict::StronglySeparable,
        OriginCategory::Boundary => Verdict::NonStronglySeparable,
        OriginCategory::Interior => Verdict::Inseparable,
    };
    if verdict == Verdict::Inseparable {
        return Ok(SeparationReport {
            verdict,
            direction: None,
            offset: None,
            thickness: 0.0,
            origin_result,
        });
    }
    let c = origin_result
        .direction
        .clone()
        .ok_or_else(|| Error::numerical("separable set without a direction"))?;
    let inf_a = support_inf(a, &c, tol)?;
    let sup_b = support_inf(b, &c.neg(), tol)?;
    let (ExtendedReal::Finite(inf_a), ExtendedReal::Finite(neg_sup_b)) = (inf_a, sup_b) else {
        return Err(Error::numerical(
            "separating direction has an unbounded support",
        ));
    };
    let sup_b = -neg_sup_b;
    Ok(SeparationReport {
        verdict,
        direction: Some(c),
        offset: Some(0.5 * (inf_a + sup_b)),
        thickness: (inf_a - sup_b).max(0.0),
        origin_result,
    })
}

/// `dist(A, B) = |P_{A-B}(0)|`.
pub fn distance(a: &ConvexSet, b: &ConvexSet, tol: &ToleranceConfig) -> Result<f64> {
    Ok(project_difference(a, b, tol)?.distance)
}

/// Nearest points `(x, y)` with `x in A`, `y in B` and `x - y = P_{A-B}(0)`.
///
/// The pair is checked against `<c, a - x> >= 0` on `A` and `<c, y - b> >= 0`
/// on `B` with `c = x - y`.
pub fn nearest_points(
    a: &ConvexSet,
    b: &ConvexSet,
    tol: &ToleranceConfig,
) -> Result<(Vector, Vector)> {
    check_operands(a, b, tol)?;
    let (x, y) = match (a, b) {
        (ConvexSet::V(l), ConvexSet::V(m)) => {
            let d = vrep_minus_vrep(l, m)?;
            let r = project_origin(&d.into(), tol)?;
            let w = r.convex_weights().expect("vertex projection has weights");
            let mut x = vec![0.0; l.dim()];
            let mut y = vec![0.0; l.dim()];
            for &(idx, lambda) in w {
                let (i, j) = (idx / m.len(), idx % m.len());
                crate::linalg::axpy(&mut x, lambda, &l.vertices()[i]);
                crate::linalg::axpy(&mut y, lambda, &m.vertices()[j]);
            }
            (x, y)
        }
        (ConvexSet::H(_), _) => {
            let d = difference(a, b, tol)?.expect("half-space minuend");
            let r = project_origin(&d, tol)?;
            let (ConvexSet::Lifted(l), Some(Witness::Lifted { aux, .. })) = (&d, &r.witness) else {
                return Err(Error::numerical("lifted projection without witness"));
            };
            let y = l.subtrahend_point(aux)?;
            (add(&r.point, &y), y.into_inner())
        }
        (ConvexSet::V(_), ConvexSet::H(_)) => {
            let (y, x) = nearest_points(b, a, tol)?;
            return Ok((x, y));
        }
        _ => unreachable!("lifted operands rejected above"),
    };
    certify_pair(a, b, &x, &y, tol)?;
    Ok((Vector::from_raw(x), Vector::from_raw(y)))
}

fn certify_pair(
    a: &ConvexSet,
    b: &ConvexSet,
    x: &[f64],
    y: &[f64],
    tol: &ToleranceConfig,
) -> Result<()> {
    let c = sub(x, y);
    let nc = norm(&c);
    let slack = 10.0 * tol.feas_tol * (nc * (1.0 + norm(x) + norm(y))).max(1.0);
    let inf_a = support_inf(a, &c, tol)?.to_f64();
    let inf_neg_b = support_inf(b, &scale(&c, -1.0), tol)?.to_f64();
    let on_a = inf_a - crate::linalg::dot(&c, x);
    let on_b = inf_neg_b + crate::linalg::dot(&c, y);
    if on_a >= -slack && on_b >= -slack {
        Ok(())
    } else {
        Err(Error::numerical(format!(
            "nearest points fail the optimality check ({on_a:.3e}, {on_b:.3e})"
        )))
    }
}
