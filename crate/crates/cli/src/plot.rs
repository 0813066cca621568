//! Vertex and edge lists of planar sets.

use polydiff::{support_inf, ConvexSet, HPolyhedron, ToleranceConfig};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::format::Operand;
use crate::report::vector;

/// Segments used to outline a ball.
const BALL_SEGMENTS: usize = 64;

/// Counter-clockwise convex hull (monotone chain); collinear points dropped.
pub fn hull(points: &[[f64; 2]], eps: f64) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= eps && (a[1] - b[1]).abs() <= eps);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in [pts.clone(), pts.iter().rev().copied().collect()] {
        let start = out.len();
        for p in pass {
            while out.len() >= start + 2 && cross(out[out.len() - 2], out[out.len() - 1], p) <= eps
            {
                out.pop();
            }
            out.push(p);
        }
        out.pop();
    }
    out
}

/// Corners of a bounded planar polyhedron; none when it is empty.
fn hrep_corners(p: &HPolyhedron, tol: &ToleranceConfig) -> CliResult<Vec<[f64; 2]>> {
    if !p.is_feasible(tol)? {
        return Ok(Vec::new());
    }
    let set: ConvexSet = p.clone().into();
    for c in [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]] {
        if support_inf(&set, &c, tol)?.finite().is_none() {
            return Err(CliError::Unsupported("cannot plot an unbounded set".into()));
        }
    }
    let rows = p.rows();
    let b = p.rhs();
    let mut corners = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let det = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0];
            if det.abs() <= 1e-12 {
                continue;
            }
            let x = [
                (b[i] * rows[j][1] - b[j] * rows[i][1]) / det,
                (rows[i][0] * b[j] - rows[j][0] * b[i]) / det,
            ];
            let slack = 10.0 * tol.feas_tol * (1.0 + x[0].abs() + x[1].abs());
            if rows
                .iter()
                .zip(b)
                .all(|(a, bk)| a[0] * x[0] + a[1] * x[1] <= bk + slack)
            {
                corners.push(x);
            }
        }
    }
    Ok(corners)
}

/// Points whose hull is the set.
pub fn outline(op: &Operand, tol: &ToleranceConfig) -> CliResult<Vec<[f64; 2]>> {
    if op.dim() != 2 {
        return Err(CliError::Unsupported(format!(
            "plots need a planar set, got dimension {}",
            op.dim()
        )));
    }
    let pts = match op {
        Operand::V(p) => p.vertices().iter().map(|v| [v[0], v[1]]).collect(),
        Operand::Ball(b) => (0..BALL_SEGMENTS)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / BALL_SEGMENTS as f64;
                [
                    b.center()[0] + b.radius() * t.cos(),
                    b.center()[1] + b.radius() * t.sin(),
                ]
            })
            .collect(),
        Operand::Lifted(_) => {
            return Err(CliError::Unsupported(
                "plot a lifted difference through its operands".into(),
            ))
        }
        other => hrep_corners(&other.as_hrep().expect("polyhedral operand"), tol)?,
    };
    Ok(pts)
}

/// Outline of `{a - b}` from the outlines of both operands.
pub fn difference_outline(
    a: &Operand,
    b: &Operand,
    tol: &ToleranceConfig,
) -> CliResult<Vec<[f64; 2]>> {
    let pa = outline(a, tol)?;
    let pb = outline(b, tol)?;
    Ok(pa
        .iter()
        .flat_map(|x| pb.iter().map(move |y| [x[0] - y[0], x[1] - y[1]]))
        .collect())
}

/// `{"dim": 2, "vertices": [...], "edges": [[i, j], ...]}` for the hull of
/// `points`.
pub fn document(points: &[[f64; 2]], approximate: bool, tol: &ToleranceConfig) -> Value {
    let h = hull(points, tol.feas_tol);
    let edges: Vec<[usize; 2]> = match h.len() {
        0 | 1 => Vec::new(),
        2 => vec![[0, 1]],
        k => (0..k).map(|i| [i, (i + 1) % k]).collect(),
    };
    let mut doc = json!({
        "dim": 2,
        "vertices": h.iter().map(|p| vector(p)).collect::<Vec<_>>(),
        "edges": edges,
    });
    if approximate {
        doc["approximate"] = json!(true);
    }
    doc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_square_grid() {
        let mut pts = Vec::new();
        for i in 0..5 {
            for j in 0..5 {
                pts.push([i as f64 * 0.5 - 1.0, j as f64 * 0.5 - 1.0]);
            }
        }
        let h = hull(&pts, 1e-12);
        assert_eq!(h, vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]);
    }

    #[test]
    fn degenerate_hulls() {
        assert_eq!(hull(&[[1.0, 1.0], [1.0, 1.0]], 1e-12), vec![[1.0, 1.0]]);
        let seg = hull(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]], 1e-12);
        assert_eq!(seg, vec![[0.0, 0.0], [2.0, 2.0]]);
    }

    #[test]
    fn corners_of_a_triangle() {
        let p = HPolyhedron::new(
            vec![vec![-1.0, 0.0], vec![0.0, -1.0], vec![1.0, 1.0]],
            vec![0.0, 0.0, 1.0],
        )
        .unwrap();
        let tol = ToleranceConfig::default();
        let h = hull(&hrep_corners(&p, &tol).unwrap(), 1e-12);
        assert_eq!(h, vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let half = HPolyhedron::new(vec![vec![1.0, 0.0]], vec![1.0]).unwrap();
        assert!(matches!(
            hrep_corners(&half, &tol),
            Err(CliError::Unsupported(_))
        ));
        let empty =
            HPolyhedron::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0]], vec![0.0, -1.0]).unwrap();
        assert!(hrep_corners(&empty, &tol).unwrap().is_empty());
    }
}
