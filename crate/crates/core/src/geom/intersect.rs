//! Volumes of halfspace intersections.
//!
//! The plane uses polygon clipping. Higher dimensions go through polar
//! duality: with `c` strictly inside, the facets of the hull of the dual
//! points `a_i / (b_i - a_i . c)` are in bijection with the vertices of the
//! primal polytope.

use super::body::ConvexBody;
use super::hull::quickhull;
use super::linalg::{det_in_place, dot, factorial};
use super::lp;

/// Halfspaces `a_i . x <= b_i` with unit normals, stored flat.
#[derive(Debug, Clone, Default)]
pub(crate) struct Halfspaces {
    pub dim: usize,
    pub normals: Vec<f64>,
    pub offsets: Vec<f64>,
}

impl Halfspaces {
    pub fn new(dim: usize) -> Self {
        Halfspaces { dim, normals: Vec::new(), offsets: Vec::new() }
    }

    pub fn push(&mut self, normal: &[f64], offset: f64) {
        self.normals.extend_from_slice(normal);
        self.offsets.push(offset);
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn normal(&self, i: usize) -> &[f64] {
        &self.normals[i * self.dim..(i + 1) * self.dim]
    }

    /// `min_i (b_i - a_i . p)`.
    pub fn min_slack(&self, p: &[f64]) -> f64 {
        (0..self.len())
            .map(|i| self.offsets[i] - dot(self.normal(i), p))
            .fold(f64::INFINITY, f64::min)
    }

    fn chebyshev(&self) -> Option<(Vec<f64>, f64)> {
        let planes: Vec<(&[f64], f64)> = (0..self.len()).map(|i| (self.normal(i), self.offsets[i])).collect();
        lp::chebyshev(&planes, self.dim)
    }
}

/// Area of a convex polygon (counter-clockwise or clockwise) by the
/// shoelace formula.
pub(crate) fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    let m = poly.len();
    if m < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..m {
        let a = poly[i];
        let b = poly[(i + 1) % m];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s.abs()
}

/// Vertices of a planar body in counter-clockwise order.
pub(crate) fn polygon_ccw(body: &ConvexBody) -> Vec<[f64; 2]> {
    let c = body.vertex_mean();
    let mut pts: Vec<[f64; 2]> = body.vertices().map(|v| [v[0], v[1]]).collect();
    pts.sort_by(|a, b| {
        let ta = (a[1] - c[1]).atan2(a[0] - c[0]);
        let tb = (b[1] - c[1]).atan2(b[0] - c[0]);
        ta.total_cmp(&tb)
    });
    pts
}

/// Clips a convex polygon by the halfspace `normal . x <= offset`.
pub(crate) fn clip_polygon(poly: &[[f64; 2]], normal: [f64; 2], offset: f64, out: &mut Vec<[f64; 2]>) {
    out.clear();
    let m = poly.len();
    for i in 0..m {
        let p = poly[i];
        let q = poly[(i + 1) % m];
        let dp = normal[0] * p[0] + normal[1] * p[1] - offset;
        let dq = normal[0] * q[0] + normal[1] * q[1] - offset;
        if dp <= 0.0 {
            out.push(p);
        }
        if (dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0) {
            let t = dp / (dp - dq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
}

/// Volume of `{x : a_i . x <= b_i}` in dimension >= 3, assumed bounded.
///
/// `candidates` are cheap guesses for an interior point; an LP is solved
/// only when none of them is comfortably inside. `scale` is a length scale
/// of the region, used to decide when it is negligibly thin.
pub(crate) fn halfspace_volume(h: &Halfspaces, candidates: &[&[f64]], scale: f64) -> f64 {
    let dim = h.dim;
    let mut best: Option<(&[f64], f64)> = None;
    for c in candidates {
        let s = h.min_slack(c);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((c, s));
        }
    }
    let thin = 1e-10 * (1.0 + scale);
    let center: Vec<f64> = match best {
        Some((c, s)) if s > 1e-2 * scale => c.to_vec(),
        _ => match h.chebyshev() {
            Some((c, r)) if r > thin => c,
            _ => return 0.0,
        },
    };

    let mut dual = Vec::with_capacity(h.len() * dim);
    let mut max_norm: f64 = 0.0;
    for i in 0..h.len() {
        let a = h.normal(i);
        let s = h.offsets[i] - dot(a, &center);
        let mut nn = 0.0;
        for &x in a {
            dual.push(x / s);
            nn += (x / s) * (x / s);
        }
        max_norm = max_norm.max(nn.sqrt());
    }
    let Ok(dual_hull) = quickhull(&dual, dim, 1e-11 * (1.0 + max_norm)) else {
        return 0.0;
    };
    let mut primal = Vec::with_capacity(dual_hull.simplices.len() * dim);
    for s in &dual_hull.simplices {
        // The dual hull contains the origin, so offsets are positive.
        if s.offset <= 0.0 {
            return 0.0;
        }
        for k in 0..dim {
            primal.push(s.normal[k] / s.offset);
        }
    }
    flag_volume(&dual_hull.simplices, &primal, dim)
}

/// Volume of the polar body from its barycentric subdivision.
///
/// A face of the dual boundary with vertex set `I` corresponds to the primal
/// face spanned by the primal vertices of all dual simplices containing
/// `I`. Each maximal chain of such faces, read as a flag from a facet down
/// to a vertex, contributes the simplex spanned by the origin and the face
/// centroids. Coordinates are relative to the interior point.
fn flag_volume(simplices: &[super::hull::HullSimplex], primal: &[f64], dim: usize) -> f64 {
    let full = (1usize << dim) - 1;
    let mut slot_of: std::collections::HashMap<u128, usize> = std::collections::HashMap::with_capacity(simplices.len() * full);
    let mut sums: Vec<f64> = Vec::new();
    let mut counts: Vec<f64> = Vec::new();
    // slots[s * full + mask - 1]: centroid index of the face `mask` of simplex `s`.
    let mut slots = vec![0usize; simplices.len() * full];
    let mut sorted = vec![0usize; dim];
    for (s, simplex) in simplices.iter().enumerate() {
        sorted.copy_from_slice(&simplex.verts);
        sorted.sort_unstable();
        let v = &primal[s * dim..(s + 1) * dim];
        for mask in 1..=full {
            let key = (0..dim)
                .filter(|b| mask >> b & 1 == 1)
                .fold(0u128, |k, b| (k << 16) | (sorted[b] as u128 + 1));
            let next = counts.len();
            let slot = *slot_of.entry(key).or_insert(next);
            if slot == next {
                sums.extend_from_slice(v);
                counts.push(1.0);
            } else {
                sums[slot * dim..(slot + 1) * dim].iter_mut().zip(v).for_each(|(a, b)| *a += b);
                counts[slot] += 1.0;
            }
            slots[s * full + mask - 1] = slot;
        }
    }
    for (slot, c) in counts.iter().enumerate() {
        sums[slot * dim..(slot + 1) * dim].iter_mut().for_each(|x| *x /= c);
    }

    let mut perm: Vec<usize> = (0..dim).collect();
    let mut m = vec![0.0; dim * dim];
    let mut total = 0.0;
    for s in 0..simplices.len() {
        perm.iter_mut().enumerate().for_each(|(i, p)| *p = i);
        loop {
            let mut mask = 0usize;
            for (row, &b) in perm.iter().enumerate() {
                mask |= 1 << b;
                let slot = slots[s * full + mask - 1];
                m[row * dim..(row + 1) * dim].copy_from_slice(&sums[slot * dim..(slot + 1) * dim]);
            }
            total += det_in_place(&mut m, dim).abs();
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    total / factorial(dim)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube_planes(dim: usize, lo: f64, hi: f64, h: &mut Halfspaces) {
        for k in 0..dim {
            let mut e = vec![0.0; dim];
            e[k] = 1.0;
            h.push(&e, hi);
            e[k] = -1.0;
            h.push(&e, -lo);
        }
    }

    #[test]
    fn overlapping_cubes() {
        for dim in 3..=5 {
            let mut h = Halfspaces::new(dim);
            cube_planes(dim, 0.0, 1.0, &mut h);
            cube_planes(dim, 0.5, 1.5, &mut h);
            let c = vec![0.75; dim];
            let v = halfspace_volume(&h, &[&c], 1.0);
            assert!((v - 0.5f64.powi(dim as i32)).abs() < 1e-12, "dim {dim}: {v}");
        }
    }

    #[test]
    fn lp_fallback_and_empty() {
        let mut h = Halfspaces::new(3);
        cube_planes(3, 0.0, 1.0, &mut h);
        cube_planes(3, 0.9, 1.9, &mut h);
        let far = vec![5.0; 3];
        let v = halfspace_volume(&h, &[&far], 1.0);
        assert!((v - 1e-3).abs() < 1e-12);
        let mut e = Halfspaces::new(3);
        cube_planes(3, 0.0, 1.0, &mut e);
        cube_planes(3, 2.0, 3.0, &mut e);
        assert_eq!(halfspace_volume(&e, &[&far], 1.0), 0.0);
    }

    /// Independent path: hull of the primal vertices, then cone volumes.
    fn volume_by_primal_hull(h: &Halfspaces, c: &[f64]) -> f64 {
        let dim = h.dim;
        let mut dual = Vec::new();
        for i in 0..h.len() {
            let s = h.offsets[i] - dot(h.normal(i), c);
            dual.extend(h.normal(i).iter().map(|x| x / s));
        }
        let dh = quickhull(&dual, dim, 1e-11).unwrap();
        let primal: Vec<f64> = dh.simplices.iter().flat_map(|s| (0..dim).map(move |k| c[k] + s.normal[k] / s.offset)).collect();
        let ph = quickhull(&primal, dim, 1e-11).unwrap();
        crate::geom::hull::hull_volume(&ph, &primal, dim)
    }

    #[test]
    fn flags_agree_with_primal_hull_on_random_polytopes() {
        use rand::Rng;
        let mut rng = crate::geom::RngSeed::new(11, 0).rng();
        for dim in 3..=4 {
            for _ in 0..20 {
                let mut h = Halfspaces::new(dim);
                cube_planes(dim, -0.8, 0.8, &mut h);
                for _ in 0..(3 * dim + 4) {
                    let mut a: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
                    let l = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                    a.iter_mut().for_each(|x| *x /= l);
                    h.push(&a, rng.random_range(0.3..1.0));
                }
                let c = vec![0.0; dim];
                let fast = halfspace_volume(&h, &[&c], 1.0);
                let slow = volume_by_primal_hull(&h, &c);
                assert!((fast - slow).abs() < 1e-10 * slow.max(1.0), "dim {dim}: {fast} vs {slow}");
            }
        }
    }

    #[test]
    fn clipping_square() {
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let mut out = Vec::new();
        clip_polygon(&sq, [1.0, 1.0], 1.0, &mut out);
        assert!((polygon_area(&out) - 0.5).abs() < 1e-15);
    }
}
