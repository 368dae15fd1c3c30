//! Linear programs over small dense data: inscribed balls and redundancy
//! removal.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

use super::linalg::{dist2, dot, norm};
use crate::error::{Error, Result};

/// Largest ball inside `{x : a_i . x <= b_i}` for unit normals `a_i`.
///
/// Returns `None` when the region is empty or the LP fails.
pub(crate) fn chebyshev(halfspaces: &[(&[f64], f64)], dim: usize) -> Option<(Vec<f64>, f64)> {
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let center: Vec<_> = (0..dim)
        .map(|_| problem.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let radius = problem.add_var(1.0, (0.0, f64::INFINITY));
    for (a, b) in halfspaces {
        let scale = norm(a);
        let mut terms: Vec<_> = center.iter().zip(a.iter()).map(|(&v, &c)| (v, c / scale)).collect();
        terms.push((radius, 1.0));
        problem.add_constraint(terms.as_slice(), ComparisonOp::Le, b / scale);
    }
    let outcome = problem.solve().ok()?;
    let solution = outcome.solution()?;
    let c: Vec<f64> = center.iter().map(|&v| solution.var_value(v)).collect();
    Some((c, solution.var_value(radius)))
}

/// Whether `target` lies within `tol` (L1 residual) of the hull of `others`.
fn in_hull_of(target: &[f64], others: &[&[f64]], dim: usize, tol: f64) -> bool {
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let weights: Vec<_> = others.iter().map(|_| problem.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let slack: Vec<_> = (0..dim)
        .map(|_| (problem.add_var(1.0, (0.0, f64::INFINITY)), problem.add_var(1.0, (0.0, f64::INFINITY))))
        .collect();
    for k in 0..dim {
        let mut terms: Vec<_> = weights.iter().zip(others).map(|(&w, p)| (w, p[k])).collect();
        terms.push((slack[k].0, 1.0));
        terms.push((slack[k].1, -1.0));
        problem.add_constraint(terms.as_slice(), ComparisonOp::Eq, target[k]);
    }
    let ones: Vec<_> = weights.iter().map(|&w| (w, 1.0)).collect();
    problem.add_constraint(ones.as_slice(), ComparisonOp::Eq, 1.0);
    match problem.solve() {
        Ok(outcome) => outcome.solution().is_some_and(|s| s.objective() <= tol),
        Err(_) => false,
    }
}

/// Rank of the affine hull of a point set (Gram-Schmidt on differences).
pub(crate) fn affine_rank(coords: &[f64], dim: usize, tol: f64) -> usize {
    let Some(origin) = coords.get(..dim) else { return 0 };
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for p in coords.chunks_exact(dim).skip(1) {
        let mut r: Vec<f64> = p.iter().zip(origin).map(|(a, b)| a - b).collect();
        for b in &basis {
            let c = dot(&r, b);
            r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let l = norm(&r);
        if l > tol {
            r.iter_mut().for_each(|x| *x /= l);
            basis.push(r);
            if basis.len() == dim {
                break;
            }
        }
    }
    basis.len()
}

/// Extreme points of a point cloud by LP redundancy removal; works in any
/// dimension without hull combinatorics.
pub(crate) fn extreme_points(coords: &[f64], dim: usize, tol: f64) -> Result<Vec<f64>> {
    if affine_rank(coords, dim, tol) < dim {
        return Err(Error::DegenerateInput { dim });
    }
    let mut kept: Vec<&[f64]> = Vec::new();
    for p in coords.chunks_exact(dim) {
        if !kept.iter().any(|q| dist2(p, q) <= tol * tol) {
            kept.push(p);
        }
    }
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<&[f64]> = kept.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| *p).collect();
        if in_hull_of(kept[i], &others, dim, tol) {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(kept.concat())
}

/// Whether `p` lies in the convex hull of the point cloud.
pub(crate) fn hull_contains(coords: &[f64], dim: usize, p: &[f64], tol: f64) -> bool {
    let pts: Vec<&[f64]> = coords.chunks_exact(dim).collect();
    in_hull_of(p, &pts, dim, tol)
}
