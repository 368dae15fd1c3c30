//! Upper bound on the inverse roundness `q_K` via John normalisation by the
//! minimum-volume enclosing ellipsoid.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{apply_affine, chebyshev_ball, enclosing_ball, AffineMap, ConvexBody};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundnessOptions {
    /// Stop when `max_i kappa_i / d - 1` falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for RoundnessOptions {
    fn default() -> Self {
        RoundnessOptions { tolerance: 1e-7, max_iterations: 200_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundnessEstimate {
    /// `min(R / r, n)` (`√n` for centrally symmetric bodies); an upper bound
    /// on `q_K`, since John's theorem caps `q_K` by the same value.
    pub q_upper: f64,
    /// Maps the enclosing ellipsoid onto the unit ball.
    pub normalizing_map: AffineMap,
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub iterations: usize,
}

/// Khachiyan's barycentric coordinate ascent with Todd-Yildirim away steps
/// on the points `q_i` (columns). Returns the weights.
fn khachiyan(q: &DMatrix<f64>, opts: &RoundnessOptions) -> Result<(DVector<f64>, usize)> {
    let (d, m) = (q.nrows(), q.ncols());
    let df = d as f64;
    let mut u = DVector::from_element(m, 1.0 / m as f64);
    for it in 0..opts.max_iterations {
        let mut x = DMatrix::zeros(d, d);
        for i in 0..m {
            let c = q.column(i);
            x.ger(u[i], &c, &c, 1.0);
        }
        let chol = x.cholesky().ok_or(Error::DegenerateInput { dim: d })?;
        let solved = chol.solve(q);
        let kappa: Vec<f64> = (0..m).map(|i| q.column(i).dot(&solved.column(i))).collect();
        let (j, kmax) = kappa.iter().copied().enumerate().fold((0, f64::MIN), |b, (i, v)| if v > b.1 { (i, v) } else { b });
        let (a, kmin) = kappa
            .iter()
            .copied()
            .enumerate()
            .filter(|&(i, _)| u[i] > 0.0)
            .fold((0, f64::MAX), |b, (i, v)| if v < b.1 { (i, v) } else { b });
        let up = kmax / df - 1.0;
        let down = 1.0 - kmin / df;
        if up <= opts.tolerance && down <= opts.tolerance {
            return Ok((u, it));
        }
        if up >= down {
            let step = (kmax - df) / (df * (kmax - 1.0));
            u *= 1.0 - step;
            u[j] += step;
        } else {
            let ua = u[a];
            let step = ((df - kmin) / (df * (kmin - 1.0))).min(ua / (1.0 - ua));
            u *= 1.0 + step;
            u[a] -= step;
            if u[a] < 1e-300 {
                u[a] = 0.0;
            }
        }
    }
    Err(Error::EllipsoidNotConverged { iterations: opts.max_iterations })
}

/// MVEE normalisation followed by `R / r` of the image, capped by John's bound.
///
/// With `symmetric_hint` on a centrally symmetric body the ellipsoid is
/// centred at the vertex mean, which is exact for such bodies.
pub fn inverse_roundness_with(body: &ConvexBody, symmetric_hint: bool, opts: &RoundnessOptions) -> Result<RoundnessEstimate> {
    let n = body.dim();
    let m = body.vertex_count();
    let centred = symmetric_hint && body.is_centrally_symmetric();
    let (center, shape, iterations) = if centred {
        let c = body.vertex_mean();
        let mut q = DMatrix::zeros(n, m);
        for (i, v) in body.vertices().enumerate() {
            for t in 0..n {
                q[(t, i)] = v[t] - c[t];
            }
        }
        let (u, it) = khachiyan(&q, opts)?;
        let mut s = DMatrix::zeros(n, n);
        for i in 0..m {
            let col = q.column(i);
            s.ger(u[i], &col, &col, 1.0);
        }
        (c, s * n as f64, it)
    } else {
        let mut q = DMatrix::from_element(n + 1, m, 1.0);
        for (i, v) in body.vertices().enumerate() {
            for t in 0..n {
                q[(t, i)] = v[t];
            }
        }
        let (u, it) = khachiyan(&q, opts)?;
        let pts = q.rows(0, n);
        let c = pts * &u;
        let mut s = DMatrix::zeros(n, n);
        for i in 0..m {
            let d = pts.column(i) - &c;
            s.ger(u[i], &d, &d, 1.0);
        }
        (c, s * n as f64, it)
    };
    // Ellipsoid {x : (x-c)^T S^{-1} (x-c) <= 1}; with S = L L^T the map
    // x -> L^{-1}(x - c) sends it to the unit ball.
    let chol = shape.cholesky().ok_or(Error::SingularMatrix)?;
    let l_inv = chol.l().try_inverse().ok_or(Error::SingularMatrix)?;
    let shift = -(&l_inv * &center);
    let map = AffineMap { matrix: l_inv, shift };
    let image = apply_affine(body, &map)?;
    let r = chebyshev_ball(&image)?.radius;
    let big_r = enclosing_ball(&image)?.radius;
    let john = if body.is_centrally_symmetric() { (n as f64).sqrt() } else { n as f64 };
    Ok(RoundnessEstimate { q_upper: (big_r / r).min(john), normalizing_map: map, r, big_r, iterations })
}

pub fn inverse_roundness(body: &ConvexBody, symmetric_hint: bool) -> Result<RoundnessEstimate> {
    inverse_roundness_with(body, symmetric_hint, &RoundnessOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_is_round() {
        let disc = ConvexBody::regular_polygon(128, 1.0).unwrap();
        assert!(inverse_roundness(&disc, false).unwrap().q_upper <= 1.0 + 1e-2);
    }

    #[test]
    fn cube_gives_sqrt_n() {
        for n in 2..=4 {
            let cube = ConvexBody::cube(n, -1.0, 1.0).unwrap();
            for hint in [false, true] {
                let q = inverse_roundness(&cube, hint).unwrap().q_upper;
                assert!((q - (n as f64).sqrt()).abs() < 1e-4, "n={n}: {q}");
            }
        }
    }

    #[test]
    fn simplex_gives_n() {
        let s = ConvexBody::standard_simplex(3).unwrap();
        let q = inverse_roundness(&s, false).unwrap().q_upper;
        assert!((q - 3.0).abs() < 1e-4, "{q}");
    }

    #[test]
    fn skewed_box_normalises() {
        let b = ConvexBody::axis_box(&[0.0, 0.0], &[10.0, 0.1], "thin").unwrap();
        let q = inverse_roundness(&b, false).unwrap().q_upper;
        assert!((q - 2f64.sqrt()).abs() < 1e-4);
    }
}
