//! Brute-force and analytic reference computations for testing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::linalg::{axpy, norm};
use crate::types::{BoxSet, VPolytope, Vector};

/// Axis-aligned box with closed per-axis intervals; ends may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBoxOracle {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl IntervalBoxOracle {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Error::check_dim(lower.len(), upper.len())?;
        if lower.is_empty() {
            return Err(Error::InvalidInput("empty box".into()));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if l.is_nan() || u.is_nan() || *l == f64::INFINITY || *u == f64::NEG_INFINITY {
                return Err(Error::InvalidInput(format!("bad interval [{l}, {u}]")));
            }
            if l > u {
                return Err(Error::EmptySet);
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol)
    }

    /// `None` if some end is infinite.
    pub fn to_box(&self) -> Option<BoxSet> {
        let finite = self.lower.iter().chain(&self.upper).all(|v| v.is_finite());
        finite.then(|| BoxSet::new(self.lower.clone(), self.upper.clone()).expect("validated"))
    }
}

impl From<&BoxSet> for IntervalBoxOracle {
    fn from(b: &BoxSet) -> Self {
        Self {
            lower: b.lower().to_vec(),
            upper: b.upper().to_vec(),
        }
    }
}

/// Per-axis `[a_lo - b_hi, a_hi - b_lo]`.
pub fn box_diff_oracle(a: &IntervalBoxOracle, b: &IntervalBoxOracle) -> Result<IntervalBoxOracle> {
    Error::check_dim(a.dim(), b.dim())?;
    let lower = a.lower.iter().zip(&b.upper).map(|(x, y)| x - y).collect();
    let upper = a.upper.iter().zip(&b.lower).map(|(x, y)| x - y).collect();
    Ok(IntervalBoxOracle { lower, upper })
}

/// Euclidean norm of the per-axis gaps.
pub fn box_distance_oracle(a: &IntervalBoxOracle, b: &IntervalBoxOracle) -> Result<f64> {
    Error::check_dim(a.dim(), b.dim())?;
    let gaps: Vec<f64> = (0..a.dim())
        .map(|i| {
            (a.lower[i] - b.upper[i])
                .max(b.lower[i] - a.upper[i])
                .max(0.0)
        })
        .collect();
    Ok(norm(&gaps))
}

/// Seeded random convex combinations of the generators, with exponential
/// weights normalized to sum one.
pub fn sample_vrep(p: &VPolytope, count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let w: Vec<f64> = (0..p.len()).map(|_| Exp1.sample(&mut rng)).collect();
            let total: f64 = w.iter().sum();
            let mut x = vec![0.0; p.dim()];
            for (wi, v) in w.iter().zip(p.vertices()) {
                axpy(&mut x, wi / total, v);
            }
            Vector::from_raw(x)
        })
        .collect()
}

/// Minimum of `|sum a_i v_i|` over the simplex grid `a_i in step * N`.
///
/// At most four generators and `step <= 1e-2`.
pub fn grid_min_norm_oracle(p: &VPolytope, step: f64) -> Result<f64> {
    if p.len() > 4 {
        return Err(Error::InvalidInput(format!(
            "grid oracle supports at most 4 generators, got {}",
            p.len()
        )));
    }
    if !(step > 0.0 && step <= 1e-2) {
        return Err(Error::InvalidInput(format!(
            "step must be in (0, 1e-2], got {step}"
        )));
    }
    let ticks = (1.0 / step).round() as usize;
    let verts: Vec<&[f64]> = p.vertices().iter().map(|v| v.as_slice()).collect();
    let mut best = f64::INFINITY;
    let mut counts = vec![0usize; verts.len()];
    grid_walk(&verts, ticks, ticks, 0, &mut counts, &mut best);
    Ok(best)
}

fn grid_walk(
    verts: &[&[f64]],
    ticks: usize,
    left: usize,
    i: usize,
    counts: &mut [usize],
    best: &mut f64,
) {
    if i + 1 == verts.len() {
        counts[i] = left;
        let mut x = vec![0.0; verts[0].len()];
        for (c, v) in counts.iter().zip(verts) {
            axpy(&mut x, *c as f64 / ticks as f64, v);
        }
        *best = best.min(norm(&x));
        return;
    }
    for c in 0..=left {
        counts[i] = c;
        grid_walk(verts, ticks, left - c, i + 1, counts, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::ToleranceConfig;

    fn b(lo: &[f64], hi: &[f64]) -> IntervalBoxOracle {
        IntervalBoxOracle::new(lo.to_vec(), hi.to_vec()).unwrap()
    }

    #[test]
    fn box_difference() {
        assert_eq!(
            box_diff_oracle(&b(&[0.0], &[1.0]), &b(&[0.0], &[1.0])).unwrap(),
            b(&[-1.0], &[1.0])
        );
        assert_eq!(
            box_diff_oracle(&b(&[2.0], &[3.0]), &b(&[0.0], &[1.0])).unwrap(),
            b(&[1.0], &[3.0])
        );
        let sq = b(&[0.0, 0.0], &[1.0, 1.0]);
        assert_eq!(
            box_diff_oracle(&sq, &sq).unwrap(),
            b(&[-1.0, -1.0], &[1.0, 1.0])
        );
        let half = b(&[f64::NEG_INFINITY], &[1.0]);
        let ray = b(&[0.0], &[f64::INFINITY]);
        assert_eq!(
            box_diff_oracle(&half, &ray).unwrap(),
            b(&[f64::NEG_INFINITY], &[1.0])
        );
    }

    #[test]
    fn box_distance() {
        assert_eq!(
            box_distance_oracle(&b(&[2.0], &[3.0]), &b(&[0.0], &[1.0])).unwrap(),
            1.0
        );
        let d = box_distance_oracle(&b(&[2.0, 2.0], &[3.0, 3.0]), &b(&[0.0, 0.0], &[1.0, 1.0]))
            .unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            box_distance_oracle(&b(&[0.0], &[2.0]), &b(&[1.0], &[3.0])).unwrap(),
            0.0
        );
    }

    #[test]
    fn invalid_intervals() {
        assert!(matches!(
            IntervalBoxOracle::new(vec![1.0], vec![0.0]),
            Err(Error::EmptySet)
        ));
        assert!(IntervalBoxOracle::new(vec![f64::NAN], vec![0.0]).is_err());
    }

    #[test]
    fn samples_are_deterministic_and_inside() {
        let p = VPolytope::new(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap();
        let a = sample_vrep(&p, 50, 7);
        assert_eq!(a, sample_vrep(&p, 50, 7));
        assert_eq!(a, sample_vrep(&p, 50, 7));
        assert_ne!(a, sample_vrep(&p, 50, 8));
        let tol = ToleranceConfig::default();
        assert!(a.iter().all(|x| p.contains(x, &tol).unwrap()));

        let single = VPolytope::new(vec![vec![1.5, -2.0]]).unwrap();
        assert!(sample_vrep(&single, 5, 1)
            .iter()
            .all(|x| x.as_slice() == [1.5, -2.0]));
    }

    #[test]
    fn grid_oracle_examples() {
        let p = VPolytope::new(vec![vec![3.0, 0.0]]).unwrap();
        assert_eq!(grid_min_norm_oracle(&p, 1e-2).unwrap(), 3.0);
        let seg = VPolytope::new(vec![vec![1.0, -1.0], vec![1.0, 1.0]]).unwrap();
        assert!((grid_min_norm_oracle(&seg, 1e-3).unwrap() - 1.0).abs() <= 2e-3);
        let tri = VPolytope::new(vec![vec![2.0, 1.0], vec![1.0, 2.0], vec![3.0, 3.0]]).unwrap();
        let g = grid_min_norm_oracle(&tri, 1e-3).unwrap();
        assert!((g - 2.1213).abs() <= 5e-3);
        // analytic: projection onto the segment (2,1)-(1,2) is (1.5, 1.5)
        assert!((g - 3.0 / 2f64.sqrt()).abs() <= 5e-3);
    }

    #[test]
    fn grid_oracle_limits() {
        let five = VPolytope::new(vec![vec![1.0]; 5]).unwrap();
        assert!(grid_min_norm_oracle(&five, 1e-2).is_err());
        let p = VPolytope::new(vec![vec![1.0]]).unwrap();
        assert!(grid_min_norm_oracle(&p, 0.1).is_err());
    }
}
