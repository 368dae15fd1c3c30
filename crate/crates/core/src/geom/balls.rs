use serde::Serialize;

use super::body::{ConvexBody, Vector};
use super::linalg::{dist2, dot, solve_in_place};
use super::lp;
use crate::error::{Error, Result};

/// Euclidean ball.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ball {
    pub center: Vector,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        dist2(self.center.as_slice(), p).sqrt() <= self.radius + tol
    }
}

/// Largest inscribed ball, from a linear program over the facets.
pub fn chebyshev_ball(body: &ConvexBody) -> Result<Ball> {
    let facets = body.facets()?;
    let planes: Vec<(&[f64], f64)> = facets.iter().map(|f| (f.normal.as_slice(), f.offset)).collect();
    let (center, radius) = lp::chebyshev(&planes, body.dim()).ok_or(Error::DegenerateInput { dim: body.dim() })?;
    if !(radius > 0.0) {
        return Err(Error::DegenerateInput { dim: body.dim() });
    }
    Ok(Ball { center: Vector::from_vec(center), radius })
}

/// Circumscribed sphere of affinely independent points within their
/// affine hull.
fn circumball(points: &[&[f64]], dim: usize) -> Option<(Vec<f64>, f64)> {
    let p0 = points.first()?;
    let k = points.len() - 1;
    if k == 0 {
        return Some((p0.to_vec(), 0.0));
    }
    let q: Vec<Vec<f64>> = points[1..].iter().map(|p| p.iter().zip(p0.iter()).map(|(a, b)| a - b).collect()).collect();
    let mut gram = vec![0.0; k * k];
    let mut rhs = vec![0.0; k];
    for i in 0..k {
        for j in 0..k {
            gram[i * k + j] = 2.0 * dot(&q[i], &q[j]);
        }
        rhs[i] = dot(&q[i], &q[i]);
    }
    let scale = gram.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    solve_in_place(&mut gram, &mut rhs, k, 1e-13 * scale)?;
    let mut c = p0.to_vec();
    for (alpha, qi) in rhs.iter().zip(&q) {
        for t in 0..dim {
            c[t] += alpha * qi[t];
        }
    }
    let r = dist2(&c, p0).sqrt();
    Some((c, r))
}

struct Miniball<'a> {
    pts: Vec<&'a [f64]>,
    dim: usize,
    tol: f64,
    center: Vec<f64>,
    radius: f64,
}

impl<'a> Miniball<'a> {
    /// Move-to-front recursion: smallest ball containing `pts[..end]` with
    /// `support` on its boundary.
    fn mtf(&mut self, end: usize, support: &mut Vec<&'a [f64]>) {
        match circumball(support, self.dim) {
            Some((c, r)) => {
                self.center = c;
                self.radius = r;
            }
            None => return,
        }
        if support.len() == self.dim + 1 {
            return;
        }
        let mut i = 0;
        while i < end {
            let p = self.pts[i];
            if dist2(&self.center, p).sqrt() > self.radius + self.tol {
                support.push(p);
                self.mtf(i, support);
                support.pop();
                let moved = self.pts.remove(i);
                self.pts.insert(0, moved);
            }
            i += 1;
        }
    }
}

/// Smallest ball containing all vertices.
pub fn enclosing_ball(body: &ConvexBody) -> Result<Ball> {
    let dim = body.dim();
    let pts: Vec<&[f64]> = body.vertices().collect();
    let mut mb = Miniball { pts: pts.clone(), dim, tol: 1e-12 * (1.0 + body.tolerance() * 1e9), center: Vec::new(), radius: 0.0 };
    let mut support = vec![pts[0]];
    let end = mb.pts.len();
    mb.mtf(end, &mut support);
    // Close any rounding gap so that every vertex is covered.
    let radius = pts.iter().map(|p| dist2(&mb.center, p).sqrt()).fold(mb.radius, f64::max);
    Ok(Ball { center: Vector::from_vec(mb.center), radius })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_radii() {
        let cube = ConvexBody::cube(3, -1.0, 1.0).unwrap();
        let inner = chebyshev_ball(&cube).unwrap();
        let outer = enclosing_ball(&cube).unwrap();
        assert!((inner.radius - 1.0).abs() < 1e-9);
        assert!((outer.radius - 3f64.sqrt()).abs() < 1e-9);
        assert!(outer.center.norm() < 1e-9);
    }

    #[test]
    fn square_radii() {
        let sq = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        assert!((chebyshev_ball(&sq).unwrap().radius - 0.5).abs() < 1e-9);
        assert!((enclosing_ball(&sq).unwrap().radius - 0.5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn obtuse_triangle_ball_is_diameter_ball() {
        let t = ConvexBody::from_flat(2, &[0.0, 0.0, 4.0, 0.0, 2.0, 0.5], "t").unwrap();
        let b = enclosing_ball(&t).unwrap();
        assert!((b.radius - 2.0).abs() < 1e-12);
        assert!((b.center[0] - 2.0).abs() < 1e-12 && b.center[1].abs() < 1e-12);
    }
}
