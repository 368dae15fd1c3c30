//! Maximal overlap `max_x |K ∩ (x + λL)|` and the relative asymmetry built
//! on it.
//!
//! The objective is maximised by Nelder-Mead from several starts. Its
//! `1/n`-th power is concave on its support, so local search from a start
//! with positive overlap reaches the global maximum up to tolerance.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::intersect::{clip_polygon, polygon_ccw, halfspace_volume, polygon_area, Halfspaces};
use crate::geom::linalg::dot;
use crate::geom::random::sample_flat;
use crate::geom::{enclosing_ball, ConvexBody, RngSeed, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapOptions {
    /// Convergence when the simplex diameter drops below `rel_tol * R`.
    pub rel_tol: f64,
    /// Evaluation budget per start.
    pub max_evals: usize,
    /// Highest dimension handled by exact intersection volumes.
    pub exact_dim: usize,
    /// Sample count for the Monte-Carlo intersection above `exact_dim`.
    pub mc_samples: usize,
    pub seed: RngSeed,
    /// Add starts at the centroid difference perturbed by `±0.1 R` along
    /// each axis; otherwise the centroid start alone is used.
    pub axis_starts: bool,
}

impl Default for OverlapOptions {
    fn default() -> Self {
        OverlapOptions { rel_tol: 1e-6, max_evals: 4000, exact_dim: 4, mc_samples: 200_000, seed: RngSeed::new(0, 0), axis_starts: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapResult {
    pub max_overlap: f64,
    pub shift: Vector,
    /// Whether the winning start met the diameter criterion within budget.
    pub converged: bool,
    /// Overlap at the centroid-difference start.
    pub start_value: f64,
    pub evaluations: usize,
}

enum Kernel {
    Planar { polygon: Vec<[f64; 2]>, normals: Vec<[f64; 2]>, offsets: Vec<f64> },
    Exact { k_planes: Halfspaces, l_normals: Vec<f64>, l_offsets: Vec<f64>, k_center: Vec<f64>, l_center: Vec<f64> },
    Sampled { samples: Vec<f64>, l_normals: Vec<f64>, l_offsets: Vec<f64>, k_volume: f64 },
}

/// Evaluates `x -> |K ∩ (x + λL)|` for a fixed pair and scale.
pub struct OverlapEngine {
    dim: usize,
    kernel: Kernel,
    scale: f64,
    start: Vec<f64>,
    volume_cap: f64,
}

impl OverlapEngine {
    pub fn new(k: &ConvexBody, l: &ConvexBody, lambda: f64, opts: &OverlapOptions) -> Result<Self> {
        let dim = k.dim();
        if l.dim() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: l.dim() });
        }
        let l_facets = l.facets()?;
        let mut l_normals = Vec::with_capacity(l_facets.len() * dim);
        let mut l_offsets = Vec::with_capacity(l_facets.len());
        for f in l_facets {
            l_normals.extend_from_slice(f.normal.as_slice());
            l_offsets.push(lambda * f.offset);
        }
        let k_center = k.centroid()?;
        let l_center = l.centroid()? * lambda;
        let start: Vec<f64> = (&k_center - &l_center).iter().copied().collect();
        let scale = enclosing_ball(k)?.radius.max(lambda * enclosing_ball(l)?.radius);
        let volume_cap = k.volume()?.min(lambda.powi(dim as i32) * l.volume()?);

        let kernel = if dim == 2 {
            Kernel::Planar {
                polygon: polygon_ccw(k),
                normals: l_facets.iter().map(|f| [f.normal[0], f.normal[1]]).collect(),
                offsets: l_offsets,
            }
        } else if dim <= opts.exact_dim {
            let mut k_planes = Halfspaces::new(dim);
            for f in k.facets()? {
                k_planes.push(f.normal.as_slice(), f.offset);
            }
            Kernel::Exact {
                k_planes,
                l_normals,
                l_offsets,
                k_center: k_center.iter().copied().collect(),
                l_center: l_center.iter().copied().collect(),
            }
        } else {
            Kernel::Sampled {
                samples: sample_flat(k, opts.mc_samples, opts.seed)?,
                l_normals,
                l_offsets,
                k_volume: k.volume()?,
            }
        };
        Ok(OverlapEngine { dim, kernel, scale, start, volume_cap })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Length scale of the pair (largest enclosing radius).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `centroid(K) - centroid(λL)`.
    pub fn centroid_shift(&self) -> &[f64] {
        &self.start
    }

    pub fn overlap(&self, shift: &[f64]) -> f64 {
        let dim = self.dim;
        let v = match &self.kernel {
            Kernel::Planar { polygon, normals, offsets } => {
                let mut cur = polygon.clone();
                let mut next = Vec::with_capacity(cur.len() + normals.len());
                for (a, b) in normals.iter().zip(offsets) {
                    clip_polygon(&cur, *a, b + a[0] * shift[0] + a[1] * shift[1], &mut next);
                    std::mem::swap(&mut cur, &mut next);
                    if cur.len() < 3 {
                        return 0.0;
                    }
                }
                polygon_area(&cur)
            }
            Kernel::Exact { k_planes, l_normals, l_offsets, k_center, l_center } => {
                let mut h = k_planes.clone();
                for (a, b) in l_normals.chunks_exact(dim).zip(l_offsets) {
                    h.push(a, b + dot(a, shift));
                }
                let lc: Vec<f64> = l_center.iter().zip(shift).map(|(c, s)| c + s).collect();
                let mid: Vec<f64> = lc.iter().zip(k_center).map(|(a, b)| 0.5 * (a + b)).collect();
                halfspace_volume(&h, &[mid.as_slice(), k_center.as_slice(), lc.as_slice()], self.scale)
            }
            Kernel::Sampled { samples, l_normals, l_offsets, k_volume } => {
                let shifted: Vec<f64> = l_normals
                    .chunks_exact(dim)
                    .zip(l_offsets)
                    .map(|(a, b)| b + dot(a, shift))
                    .collect();
                let total = samples.len() / dim;
                let hits = samples
                    .chunks_exact(dim)
                    .filter(|y| l_normals.chunks_exact(dim).zip(&shifted).all(|(a, b)| dot(a, y) <= *b))
                    .count();
                k_volume * hits as f64 / total as f64
            }
        };
        v.min(self.volume_cap)
    }

    /// Maximises the overlap from the centroid difference and, with
    /// `axis_starts`, its `2n` axis perturbations. The best run is restarted
    /// once from a fresh simplex.
    pub fn maximize(&self, opts: &OverlapOptions) -> OverlapResult {
        let n = self.dim;
        let delta = 0.1 * self.scale;
        let mut starts = vec![self.start.clone()];
        for k in (0..n).filter(|_| opts.axis_starts) {
            for sign in [1.0, -1.0] {
                let mut s = self.start.clone();
                s[k] += sign * delta;
                starts.push(s);
            }
        }
        let runs: Vec<(f64, Vec<f64>, bool, usize)> = starts
            .par_iter()
            .map(|s| nelder_mead(|x| self.overlap(x), s, delta, opts.rel_tol * self.scale, opts.max_evals))
            .collect();
        let mut best = 0;
        for (i, r) in runs.iter().enumerate() {
            if r.0 > runs[best].0 {
                best = i;
            }
        }
        let mut evaluations: usize = runs.iter().map(|r| r.3).sum();
        let (mut value, mut x, mut converged, _) = runs.into_iter().nth(best).expect("at least one start");
        let again = nelder_mead(|y| self.overlap(y), &x, 0.1 * delta, opts.rel_tol * self.scale, opts.max_evals);
        evaluations += again.3;
        if again.0 >= value {
            (value, x, converged) = (again.0, again.1, again.2);
        }
        OverlapResult {
            max_overlap: value,
            shift: Vector::from_vec(x),
            converged,
            start_value: self.overlap(&self.start),
            evaluations,
        }
    }
}

/// Nelder-Mead maximisation with a memo on a fine grid. Returns the best
/// value, its point, whether the diameter criterion was met, and the number
/// of distinct evaluations.
fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    tol: f64,
    max_evals: usize,
) -> (f64, Vec<f64>, bool, usize) {
    let n = x0.len();
    let grid = (tol * 1e-3).max(f64::MIN_POSITIVE);
    let mut memo: HashMap<Vec<i64>, f64> = HashMap::new();
    let mut eval = |x: &[f64]| -> f64 {
        let key: Vec<i64> = x.iter().map(|v| (v / grid).round() as i64).collect();
        *memo.entry(key).or_insert_with(|| -f(x))
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for k in 0..n {
        let mut x = x0.to_vec();
        x[k] += step;
        let v = eval(&x);
        simplex.push((x, v));
    }
    let mut evals = n + 1;
    let mut converged = false;
    let combine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect() };

    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter < tol {
            converged = true;
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for t in 0..n {
                centroid[t] += x[t] / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflected = combine(&centroid, &worst.0, -1.0);
        let fr = eval(&reflected);
        evals += 1;
        if fr < simplex[0].1 {
            let expanded = combine(&centroid, &worst.0, -2.0);
            let fe = eval(&expanded);
            evals += 1;
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst.1 {
            let c = combine(&centroid, &reflected, 0.5);
            let v = eval(&c);
            (c, v)
        } else {
            let c = combine(&centroid, &worst.0, 0.5);
            let v = eval(&c);
            (c, v)
        };
        evals += 1;
        if fc < worst.1.min(fr) {
            simplex[n] = (contracted, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for (x, v) in simplex.iter_mut().skip(1) {
            *x = combine(&best, x, 0.5);
            *v = eval(x);
        }
        evals += n;
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, v) = simplex.swap_remove(0);
    (-v, x, converged, evals)
}

/// Relative asymmetry of a pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Asymmetry {
    /// `|K Δ (x + λL)| / |K|` at the best shift, in `[0, 2]`.
    pub value: f64,
    pub max_overlap: f64,
    pub optimal_shift: Vector,
    /// `λ = (|K| / |L|)^{1/n}`.
    pub scale_lambda: f64,
    pub converged: bool,
}

/// `A(K, L) = min_x |K Δ (x + λL)| / |K|` with `λ^n |L| = |K|`.
pub fn relative_asymmetry(k: &ConvexBody, l: &ConvexBody, opts: &OverlapOptions) -> Result<Asymmetry> {
    let n = k.dim() as f64;
    let vk = k.volume()?;
    let lambda = (vk / l.volume()?).powf(1.0 / n);
    let engine = OverlapEngine::new(k, l, lambda, opts)?;
    let best = engine.maximize(opts);
    let value = ((2.0 * vk - 2.0 * best.max_overlap) / vk).clamp(0.0, 2.0);
    Ok(Asymmetry {
        value,
        max_overlap: best.max_overlap,
        optimal_shift: best.shift,
        scale_lambda: lambda,
        converged: best.converged,
    })
}

/// `M(K, L) = max_x |K ∩ (L + x)|`.
pub fn dar_overlap(k: &ConvexBody, l: &ConvexBody, opts: &OverlapOptions) -> Result<OverlapResult> {
    let engine = OverlapEngine::new(k, l, 1.0, opts)?;
    Ok(engine.maximize(opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> OverlapOptions {
        OverlapOptions::default()
    }

    #[test]
    fn identical_bodies_have_zero_asymmetry() {
        let k = ConvexBody::regular_polygon(7, 1.0).unwrap();
        let a = relative_asymmetry(&k, &k, &opts()).unwrap();
        assert!(a.value < 1e-6);
        assert!(a.optimal_shift.norm() < 1e-4);
    }

    #[test]
    fn flat_rectangle_against_square() {
        let k = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let l = ConvexBody::axis_box(&[0.0, 0.0], &[2.0, 0.5], "l").unwrap();
        let a = relative_asymmetry(&k, &l, &opts()).unwrap();
        assert!((a.scale_lambda - 1.0).abs() < 1e-12);
        assert!((a.max_overlap - 0.5).abs() < 1e-9);
        assert!((a.value - 1.0).abs() < 1e-9);
        let m = dar_overlap(&k, &l, &opts()).unwrap();
        assert!((m.max_overlap - 0.5).abs() < 1e-9);
    }

    #[test]
    fn slightly_long_box() {
        let k = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let l = ConvexBody::axis_box(&[0.0, 0.0], &[1.0, 1.1], "l").unwrap();
        let a = relative_asymmetry(&k, &l, &opts()).unwrap();
        let expected = 2.0 * (1.0 - 1.1f64.powf(-0.5));
        assert!((a.value - expected).abs() < 1e-7, "{} vs {expected}", a.value);
    }

    #[test]
    fn three_dimensional_boxes_match_closed_form() {
        let k = ConvexBody::cube(3, 0.0, 1.0).unwrap();
        let l = ConvexBody::axis_box(&[0.0; 3], &[1.0, 1.2, 1.2], "l").unwrap();
        let a = relative_asymmetry(&k, &l, &opts()).unwrap();
        // λL = [0,λ] x [0,1.2λ]^2 with λ^3 1.44 = 1; overlap λ · 1 · 1.
        let lambda = 1.44f64.powf(-1.0 / 3.0);
        assert!((a.max_overlap - lambda).abs() < 1e-7);
    }

    #[test]
    fn sampled_kernel_is_close_in_five_dimensions() {
        let k = ConvexBody::cube(5, 0.0, 1.0).unwrap();
        let l = ConvexBody::cube(5, 0.0, 1.0).unwrap();
        let o = OverlapOptions { mc_samples: 20_000, ..opts() };
        let engine = OverlapEngine::new(&k, &l, 1.0, &o).unwrap();
        let v = engine.overlap(&[0.5, 0.0, 0.0, 0.0, 0.0]);
        assert!((v - 0.5).abs() < 0.02);
    }

    #[test]
    fn centroid_start_matches_multistart() {
        let single = OverlapOptions { axis_starts: false, ..opts() };
        for (n, seed) in [(2, 1), (2, 2), (3, 3), (3, 4)] {
            let k = crate::geom::random_body(n, n + 4, false, RngSeed::new(seed, 0)).unwrap();
            let l = crate::geom::random_body(n, n + 3, false, RngSeed::new(seed, 1)).unwrap();
            let a = relative_asymmetry(&k, &l, &opts()).unwrap().value;
            let b = relative_asymmetry(&k, &l, &single).unwrap().value;
            assert!((a - b).abs() < 1e-5, "n={n}: {a} vs {b}");
        }
    }
}
