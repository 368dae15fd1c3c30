//! Quickhull in arbitrary dimension over flat coordinate buffers.
//!
//! The boundary is kept as a simplicial complex: every face holds exactly
//! `dim` vertex indices and the face across each of its ridges. Coplanar
//! pieces of a true facet survive as separate simplices and are merged later
//! by [`crate::geom::body`].

use std::collections::{HashMap, VecDeque};

use super::linalg::{dot, hyperplane, norm};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct HullSimplex {
    pub verts: Vec<usize>,
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Hull {
    pub simplices: Vec<HullSimplex>,
    /// A point strictly inside the hull (centroid of the seed simplex).
    pub interior: Vec<f64>,
}

struct Face {
    verts: Vec<usize>,
    neighbors: Vec<usize>,
    normal: Vec<f64>,
    offset: f64,
    outside: Vec<usize>,
    furthest: usize,
    furthest_dist: f64,
    alive: bool,
}

#[inline]
fn point(pts: &[f64], dim: usize, i: usize) -> &[f64] {
    &pts[i * dim..(i + 1) * dim]
}

/// Picks `dim + 1` affinely independent points greedily by distance to the
/// affine hull of the points chosen so far.
fn seed_simplex(pts: &[f64], dim: usize, count: usize, eps: f64) -> Result<Vec<usize>> {
    let mut chosen = Vec::with_capacity(dim + 1);
    let mut first = 0;
    for i in 1..count {
        if point(pts, dim, i)[0] < point(pts, dim, first)[0] {
            first = i;
        }
    }
    chosen.push(first);
    let origin = point(pts, dim, first).to_vec();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    let mut residual = vec![0.0; dim];
    for _ in 0..dim {
        let mut best = None;
        let mut best_d = eps;
        for i in 0..count {
            let p = point(pts, dim, i);
            for k in 0..dim {
                residual[k] = p[k] - origin[k];
            }
            for b in &basis {
                let c = dot(&residual, b);
                for k in 0..dim {
                    residual[k] -= c * b[k];
                }
            }
            let d = norm(&residual);
            if d > best_d {
                best_d = d;
                best = Some(i);
            }
        }
        let Some(i) = best else {
            return Err(Error::DegenerateInput { dim });
        };
        let p = point(pts, dim, i);
        let mut dir: Vec<f64> = (0..dim).map(|k| p[k] - origin[k]).collect();
        for b in &basis {
            let c = dot(&dir, b);
            for k in 0..dim {
                dir[k] -= c * b[k];
            }
        }
        let l = norm(&dir);
        dir.iter_mut().for_each(|v| *v /= l);
        basis.push(dir);
        chosen.push(i);
    }
    Ok(chosen)
}

fn make_plane(pts: &[f64], dim: usize, verts: &[usize], interior: &[f64]) -> Option<(Vec<f64>, f64)> {
    let refs: Vec<&[f64]> = verts.iter().map(|&v| point(pts, dim, v)).collect();
    let (mut normal, mut offset) = hyperplane(&refs, dim)?;
    if dot(&normal, interior) > offset {
        normal.iter_mut().for_each(|v| *v = -*v);
        offset = -offset;
    }
    Some((normal, offset))
}

/// Convex hull of `count` points stored row-major in `pts`.
///
/// Points within `eps` of the current hull are treated as inside.
pub(crate) fn quickhull(pts: &[f64], dim: usize, eps: f64) -> Result<Hull> {
    let count = pts.len() / dim;
    if dim < 2 || count < dim + 1 {
        return Err(Error::DegenerateInput { dim });
    }
    let seed = seed_simplex(pts, dim, count, eps)?;
    let mut interior = vec![0.0; dim];
    for &s in &seed {
        for (k, c) in point(pts, dim, s).iter().enumerate() {
            interior[k] += c / (dim + 1) as f64;
        }
    }

    let mut faces: Vec<Face> = Vec::new();
    for omit in 0..=dim {
        let verts: Vec<usize> = (0..=dim).filter(|&j| j != omit).map(|j| seed[j]).collect();
        // Face `omit` meets face `j` across the ridge that drops seed[j].
        let neighbors: Vec<usize> = (0..=dim).filter(|&j| j != omit).collect();
        let (normal, offset) =
            make_plane(pts, dim, &verts, &interior).ok_or(Error::DegenerateInput { dim })?;
        faces.push(Face {
            verts,
            neighbors,
            normal,
            offset,
            outside: Vec::new(),
            furthest: usize::MAX,
            furthest_dist: 0.0,
            alive: true,
        });
    }

    let mut in_seed = vec![false; count];
    for &s in &seed {
        in_seed[s] = true;
    }
    for i in 0..count {
        if in_seed[i] {
            continue;
        }
        assign(&mut faces, 0..=dim, pts, dim, i, eps);
    }

    let mut queue: VecDeque<usize> = (0..=dim).collect();
    let mut visible_mark: Vec<u32> = vec![0; faces.len()];
    let mut stamp = 0u32;
    let mut stack = Vec::new();
    let mut visible = Vec::new();
    let mut ridge_map: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();

    while let Some(fi) = queue.pop_front() {
        if !faces[fi].alive || faces[fi].outside.is_empty() {
            continue;
        }
        let apex = faces[fi].furthest;
        let p = point(pts, dim, apex).to_vec();

        stamp += 1;
        visible.clear();
        stack.clear();
        stack.push(fi);
        visible_mark[fi] = stamp;
        while let Some(f) = stack.pop() {
            visible.push(f);
            for k in 0..dim {
                let nb = faces[f].neighbors[k];
                if visible_mark[nb] == stamp || visible_mark[nb] == stamp.wrapping_neg() {
                    continue;
                }
                let d = dot(&faces[nb].normal, &p) - faces[nb].offset;
                if d > eps {
                    visible_mark[nb] = stamp;
                    stack.push(nb);
                } else {
                    // Tag as examined-but-hidden for this round.
                    visible_mark[nb] = stamp.wrapping_neg();
                }
            }
        }

        let first_new = faces.len();
        ridge_map.clear();
        for &v in &visible {
            for k in 0..dim {
                let nb = faces[v].neighbors[k];
                if visible_mark[nb] == stamp {
                    continue;
                }
                let mut verts = faces[v].verts.clone();
                verts[k] = apex;
                let (normal, offset) = match make_plane(pts, dim, &verts, &interior) {
                    Some(h) => h,
                    None => return Err(Error::DegenerateInput { dim }),
                };
                let id = faces.len();
                let mut neighbors = vec![usize::MAX; dim];
                neighbors[k] = nb;
                if let Some(slot) = faces[nb].neighbors.iter().position(|&x| x == v) {
                    faces[nb].neighbors[slot] = id;
                }
                for j in 0..dim {
                    if j == k {
                        continue;
                    }
                    let mut key: Vec<usize> =
                        verts.iter().enumerate().filter(|&(t, _)| t != j && t != k).map(|(_, &x)| x).collect();
                    key.sort_unstable();
                    match ridge_map.remove(&key) {
                        Some((other, slot)) => {
                            neighbors[j] = other;
                            faces[other].neighbors[slot] = id;
                        }
                        None => {
                            ridge_map.insert(key, (id, j));
                        }
                    }
                }
                faces.push(Face {
                    verts,
                    neighbors,
                    normal,
                    offset,
                    outside: Vec::new(),
                    furthest: usize::MAX,
                    furthest_dist: 0.0,
                    alive: true,
                });
                visible_mark.push(0);
            }
        }
        debug_assert!(ridge_map.is_empty(), "unmatched ridges in new cone");

        let mut orphans = Vec::new();
        for &v in &visible {
            faces[v].alive = false;
            orphans.append(&mut faces[v].outside);
        }
        let end = faces.len();
        for q in orphans {
            if q != apex {
                assign(&mut faces, first_new..end, pts, dim, q, eps);
            }
        }
        for id in first_new..end {
            if !faces[id].outside.is_empty() {
                queue.push_back(id);
            }
        }
    }

    let simplices = faces
        .into_iter()
        .filter(|f| f.alive)
        .map(|f| HullSimplex { verts: f.verts, normal: f.normal, offset: f.offset })
        .collect();
    Ok(Hull { simplices, interior })
}

fn assign(
    faces: &mut [Face],
    range: impl Iterator<Item = usize>,
    pts: &[f64],
    dim: usize,
    q: usize,
    eps: f64,
) {
    let p = point(pts, dim, q);
    for f in range {
        let d = dot(&faces[f].normal, p) - faces[f].offset;
        if d > eps {
            let face = &mut faces[f];
            face.outside.push(q);
            if d > face.furthest_dist {
                face.furthest_dist = d;
                face.furthest = q;
            }
            return;
        }
    }
}

#[cfg(test)]
/// Volume enclosed by a hull (cones from the interior point).
pub(crate) fn hull_volume(hull: &Hull, pts: &[f64], dim: usize) -> f64 {
    let mut total = 0.0;
    let mut m = vec![0.0; dim * dim];
    for s in &hull.simplices {
        for (r, &v) in s.verts.iter().enumerate() {
            let p = point(pts, dim, v);
            for c in 0..dim {
                m[r * dim + c] = p[c] - hull.interior[c];
            }
        }
        total += super::linalg::det_in_place(&mut m, dim).abs();
    }
    total / super::linalg::factorial(dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(dim: usize) -> Vec<f64> {
        let mut pts = Vec::new();
        for mask in 0..(1usize << dim) {
            for k in 0..dim {
                pts.push(((mask >> k) & 1) as f64);
            }
        }
        pts
    }

    #[test]
    fn cube_volumes_are_one() {
        for dim in 2..=5 {
            let pts = cube(dim);
            let hull = quickhull(&pts, dim, 1e-10).unwrap();
            assert!((hull_volume(&hull, &pts, dim) - 1.0).abs() < 1e-12, "dim {dim}");
        }
    }

    #[test]
    fn interior_points_never_become_vertices() {
        let mut pts = cube(3);
        pts.extend_from_slice(&[0.5, 0.5, 0.5, 0.2, 0.7, 0.4]);
        let hull = quickhull(&pts, 3, 1e-10).unwrap();
        for s in &hull.simplices {
            assert!(s.verts.iter().all(|&v| v < 8));
        }
    }

    #[test]
    fn flat_input_is_rejected() {
        let pts = vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0];
        assert_eq!(quickhull(&pts, 3, 1e-10).unwrap_err(), Error::DegenerateInput { dim: 3 });
    }

    #[test]
    fn every_simplex_has_neighbors_consistent_orientation() {
        let pts = cube(4);
        let hull = quickhull(&pts, 4, 1e-10).unwrap();
        for s in &hull.simplices {
            for i in 0..16 {
                let p = &pts[i * 4..i * 4 + 4];
                assert!(dot(&s.normal, p) - s.offset <= 1e-10);
            }
        }
    }
}
