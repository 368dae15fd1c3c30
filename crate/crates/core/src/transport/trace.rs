//! The boundary trace inequality in the plane,
//! `(C_0 n R / 2r) ∫_K |∇f| >= inf_c ∫_{∂K} |f - c|`, for piecewise-linear `f`.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::brenier::TRACE_CONSTANT;
use crate::error::{Error, Result};
use crate::geom::intersect::polygon_ccw;
use crate::geom::{chebyshev_ball, random_body, ConvexBody, RngSeed};

/// Triangulation of a convex polygon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    /// Boundary vertices in counter-clockwise order.
    pub boundary: Vec<usize>,
}

impl TriangleMesh {
    /// Fan from `center` over the polygon, each fan triangle split into `m²`
    /// congruent pieces with `m` chosen so that no edge exceeds `max_edge`.
    pub fn fan(body: &ConvexBody, center: [f64; 2], max_edge: f64) -> Result<Self> {
        if body.dim() != 2 {
            return Err(Error::NotTwoDimensional { dim: body.dim() });
        }
        if !(max_edge > 0.0) {
            return Err(Error::InvalidArgument("max_edge must be positive".into()));
        }
        let poly = polygon_ccw(body);
        let sides = poly.len();
        let len = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
        let longest = (0..sides)
            .map(|i| {
                let (p, q) = (poly[i], poly[(i + 1) % sides]);
                len(p, q).max(len(center, p)).max(len(center, q))
            })
            .fold(0.0, f64::max);
        let m = ((longest / max_edge).ceil() as usize).max(1);

        let mut vertices = vec![center];
        let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
        // Points on spoke `s` are keyed (s, k, 0); interior points (i, a, b).
        let mut id = |tri: usize, a: usize, b: usize| -> usize {
            let key = match (a, b) {
                (0, 0) => return 0,
                (a, 0) => (tri, a, 0),
                (0, b) => ((tri + 1) % sides, b, 0),
                _ => (tri, a, b),
            };
            *index.entry(key).or_insert_with(|| {
                let (p, q) = (poly[tri], poly[(tri + 1) % sides]);
                let (sa, sb) = (a as f64 / m as f64, b as f64 / m as f64);
                vertices.push([
                    center[0] + sa * (p[0] - center[0]) + sb * (q[0] - center[0]),
                    center[1] + sa * (p[1] - center[1]) + sb * (q[1] - center[1]),
                ]);
                vertices.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(sides * m * m);
        let mut boundary = Vec::with_capacity(sides * m);
        for tri in 0..sides {
            for a in 0..m {
                for b in 0..m - a {
                    triangles.push([id(tri, a, b), id(tri, a + 1, b), id(tri, a, b + 1)]);
                    if a + b + 2 <= m {
                        triangles.push([id(tri, a + 1, b), id(tri, a + 1, b + 1), id(tri, a, b + 1)]);
                    }
                }
            }
            for a in (1..=m).rev() {
                boundary.push(id(tri, a, m - a));
            }
        }
        Ok(TriangleMesh { vertices, triangles, boundary })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceCheck {
    /// `(C_0 n R / 2r) ∫ |∇f|`.
    pub lhs: f64,
    /// `∫_{∂K} |f - c|` at the minimising `c`.
    pub rhs: f64,
    pub median: f64,
    pub gradient_integral: f64,
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub holds: bool,
}

/// `∫ |f - c|` along a segment of length `len` on which `f` is linear.
fn segment_abs_integral(f0: f64, f1: f64, c: f64, len: f64) -> f64 {
    let (a, b) = (f0 - c, f1 - c);
    if a * b >= 0.0 {
        len * (a + b).abs() / 2.0
    } else {
        len * (a * a + b * b) / (2.0 * (a - b).abs())
    }
}

/// Length-weighted median of a piecewise-linear boundary trace.
fn trace_median(segments: &[(f64, f64, f64)]) -> f64 {
    let total: f64 = segments.iter().map(|s| s.2).sum();
    let half = total / 2.0;
    // Boundary length where f < c (strict) or f <= c.
    let below = |c: f64, strict: bool| -> f64 {
        segments
            .iter()
            .map(|&(f0, f1, len)| {
                let (lo, hi) = (f0.min(f1), f0.max(f1));
                if hi == lo {
                    if lo < c || (!strict && lo == c) { len } else { 0.0 }
                } else {
                    len * ((c - lo) / (hi - lo)).clamp(0.0, 1.0)
                }
            })
            .sum()
    };
    let mut xs: Vec<f64> = segments.iter().flat_map(|s| [s.0, s.1]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    for (k, &x) in xs.iter().enumerate() {
        let (lt, le) = (below(x, true), below(x, false));
        if lt <= half && half <= le {
            return x;
        }
        if let Some(&next) = xs.get(k + 1) {
            let hi = below(next, true);
            if le < half && half < hi {
                return x + (next - x) * (half - le) / (hi - le);
            }
        }
    }
    xs[xs.len() / 2]
}

/// Checks the trace inequality for the interpolant of `values` on `mesh`.
///
/// `r` is the Chebyshev radius and `R` the largest vertex distance from the
/// Chebyshev centre, so both balls share a centre.
pub fn trace_inequality_check(body: &ConvexBody, mesh: &TriangleMesh, values: &[f64]) -> Result<TraceCheck> {
    if body.dim() != 2 {
        return Err(Error::NotTwoDimensional { dim: body.dim() });
    }
    if values.len() != mesh.vertices.len() {
        return Err(Error::DimensionMismatch { left: values.len(), right: mesh.vertices.len() });
    }
    let inner = chebyshev_ball(body)?;
    let c = [inner.center[0], inner.center[1]];
    let big_r = body.vertices().map(|v| (v[0] - c[0]).hypot(v[1] - c[1])).fold(0.0, f64::max);
    let mut gradient_integral = 0.0;
    for t in &mesh.triangles {
        let [p, q, s] = t.map(|i| mesh.vertices[i]);
        let (e1, e2) = ([q[0] - p[0], q[1] - p[1]], [s[0] - p[0], s[1] - p[1]]);
        let det = e1[0] * e2[1] - e1[1] * e2[0];
        let (d1, d2) = (values[t[1]] - values[t[0]], values[t[2]] - values[t[0]]);
        let gx = (d1 * e2[1] - d2 * e1[1]) / det;
        let gy = (e1[0] * d2 - e2[0] * d1) / det;
        gradient_integral += gx.hypot(gy) * det.abs() / 2.0;
    }
    let b = &mesh.boundary;
    let segments: Vec<(f64, f64, f64)> = (0..b.len())
        .map(|i| {
            let (u, w) = (b[i], b[(i + 1) % b.len()]);
            let (pu, pw) = (mesh.vertices[u], mesh.vertices[w]);
            (values[u], values[w], (pu[0] - pw[0]).hypot(pu[1] - pw[1]))
        })
        .collect();
    let median = trace_median(&segments);
    let rhs = segments.iter().map(|&(f0, f1, len)| segment_abs_integral(f0, f1, median, len)).sum();
    let lhs = TRACE_CONSTANT * 2.0 * big_r / (2.0 * inner.radius) * gradient_integral;
    Ok(TraceCheck { lhs, rhs, median, gradient_integral, r: inner.radius, big_r, holds: lhs >= rhs * (1.0 - 1e-12) })
}

/// Trace check for `f` sampled on a fan mesh with edges at most `R/32`.
pub fn trace_inequality_for(body: &ConvexBody, f: impl Fn([f64; 2]) -> f64) -> Result<TraceCheck> {
    let mesh = standard_mesh(body)?;
    let values: Vec<f64> = mesh.vertices.iter().map(|&p| f(p)).collect();
    trace_inequality_check(body, &mesh, &values)
}

fn standard_mesh(body: &ConvexBody) -> Result<TriangleMesh> {
    if body.dim() != 2 {
        return Err(Error::NotTwoDimensional { dim: body.dim() });
    }
    let inner = chebyshev_ball(body)?;
    let c = [inner.center[0], inner.center[1]];
    let big_r = body.vertices().map(|v| (v[0] - c[0]).hypot(v[1] - c[1])).fold(0.0, f64::max);
    TriangleMesh::fan(body, c, big_r / 32.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceSuiteReport {
    pub instances: usize,
    pub violations: usize,
    /// Smallest `lhs / rhs` over instances with `rhs > 0`.
    pub min_ratio: f64,
    pub min_ratio_index: Option<usize>,
}

/// Random polygons with three kinds of test functions in rotation: random
/// vertex values, random affine functions, and steep `tanh` ridges across a
/// random chord.
pub fn trace_suite(count: usize, seed: u64) -> Result<TraceSuiteReport> {
    let base = RngSeed::new(seed, 0);
    let checks: Vec<TraceCheck> = (0..count)
        .into_par_iter()
        .map(|i| {
            let s = base.derive(i as u64);
            let mut rng = s.with_stream(1).rng();
            let points = rng.random_range(3..=12);
            let body = random_body(2, points, false, s)?;
            let mesh = standard_mesh(&body)?;
            let values: Vec<f64> = match i % 3 {
                0 => mesh.vertices.iter().map(|_| rng.random_range(-1.0..1.0)).collect(),
                1 => {
                    let (a, b, c): (f64, f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random());
                    mesh.vertices.iter().map(|p| a * p[0] + b * p[1] + c).collect()
                }
                _ => {
                    let angle = rng.random_range(0.0..std::f64::consts::TAU);
                    let (dx, dy) = (angle.cos(), angle.sin());
                    let proj: Vec<f64> = mesh.vertices.iter().map(|p| dx * p[0] + dy * p[1]).collect();
                    let (lo, hi) = proj.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
                    let cut = lo + rng.random_range(0.02..0.98) * (hi - lo);
                    let steep = 10f64.powf(rng.random_range(0.0..2.0)) / (hi - lo);
                    proj.iter().map(|x| (steep * (x - cut)).tanh()).collect()
                }
            };
            trace_inequality_check(&body, &mesh, &values)
        })
        .collect::<Result<_>>()?;
    let mut min_ratio = f64::INFINITY;
    let mut min_ratio_index = None;
    for (i, c) in checks.iter().enumerate() {
        if c.rhs > 0.0 && c.lhs / c.rhs < min_ratio {
            min_ratio = c.lhs / c.rhs;
            min_ratio_index = Some(i);
        }
    }
    Ok(TraceSuiteReport { instances: count, violations: checks.iter().filter(|c| !c.holds).count(), min_ratio, min_ratio_index })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_is_conforming() {
        let sq = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let mesh = TriangleMesh::fan(&sq, [0.5, 0.5], 0.1).unwrap();
        let area: f64 = mesh
            .triangles
            .iter()
            .map(|t| {
                let [p, q, s] = t.map(|i| mesh.vertices[i]);
                ((q[0] - p[0]) * (s[1] - p[1]) - (q[1] - p[1]) * (s[0] - p[0])) / 2.0
            })
            .sum();
        assert!((area - 1.0).abs() < 1e-12, "{area}");
        let mut edges: HashMap<(usize, usize), i32> = HashMap::new();
        for t in &mesh.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *edges.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let border = edges.values().filter(|&&c| c == 1).count();
        assert_eq!(border, mesh.boundary.len());
        assert!(edges.values().all(|&c| c <= 2));
    }

    #[test]
    fn constant_function() {
        let sq = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let c = trace_inequality_for(&sq, |_| 3.0).unwrap();
        assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
        assert!(c.holds);
    }

    #[test]
    fn disc_with_linear_function() {
        let disc = ConvexBody::regular_polygon(512, 1.0).unwrap();
        let c = trace_inequality_for(&disc, |p| p[0]).unwrap();
        let area = disc.volume().unwrap();
        assert!((c.gradient_integral - area).abs() < 1e-9);
        assert!(c.median.abs() < 1e-12);
        assert!((c.rhs - 4.0).abs() < 1e-3, "{}", c.rhs);
        let ratio = c.lhs / c.rhs;
        assert!((ratio - TRACE_CONSTANT * std::f64::consts::PI / 4.0).abs() < 1e-2, "{ratio}");
    }

    #[test]
    fn median_minimises_boundary_deviation() {
        let segs = [(0.0, 1.0, 1.0), (1.0, 5.0, 0.5), (5.0, 5.0, 2.0), (5.0, 0.0, 0.3)];
        let m = trace_median(&segs);
        let g = |c: f64| segs.iter().map(|&(a, b, l)| segment_abs_integral(a, b, c, l)).sum::<f64>();
        for d in [1e-3, 1e-2, 0.1] {
            assert!(g(m) <= g(m + d) + 1e-12 && g(m) <= g(m - d) + 1e-12);
        }
    }

    #[test]
    fn three_dimensional_bodies_are_refused() {
        let cube = ConvexBody::cube(3, 0.0, 1.0).unwrap();
        assert!(matches!(trace_inequality_for(&cube, |_| 0.0), Err(Error::NotTwoDimensional { dim: 3 })));
    }

    #[test]
    fn small_suite_has_no_violations() {
        let r = trace_suite(30, 4).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.min_ratio > 1.0);
    }
}
