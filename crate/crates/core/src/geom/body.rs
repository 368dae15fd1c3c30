use std::sync::{Arc, OnceLock};

use nalgebra::DVector;

use super::hull::{quickhull, HullSimplex};
use super::linalg::{dot, facet_simplex_measure, factorial};
use super::lp;
use crate::error::{Error, Result};

/// A point or direction of `R^n`.
pub type Vector = DVector<f64>;

/// Largest dimension for which facets, exact volumes and exact
/// intersections are computed unless overridden.
pub const DEFAULT_EXACT_DIM_CAP: usize = 6;

/// One facet of a polytope: `normal . x <= offset` with `normal` a unit
/// vector, together with its `(n-1)`-dimensional measure and the indices of
/// the body's vertices lying on it.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Vector,
    pub offset: f64,
    pub measure: f64,
    pub vertices: Vec<usize>,
}

#[derive(Debug)]
pub(crate) struct Boundary {
    pub facets: Vec<Facet>,
    /// Boundary triangulation, vertex indices into the body.
    pub volume: f64,
    pub centroid: Vec<f64>,
}

/// Compact convex body with non-empty interior, stored by its extreme points.
///
/// The facet description is derived on first use and cached; bodies are
/// immutable and can be shared between threads.
#[derive(Debug, Clone)]
pub struct ConvexBody {
    dim: usize,
    coords: Vec<f64>,
    label: String,
    exact_cap: usize,
    tol: f64,
    boundary: OnceLock<std::result::Result<Arc<Boundary>, Error>>,
}

/// Scale-aware geometric tolerance for point sets of radius `radius`.
pub(crate) fn geometric_tolerance(radius: f64) -> f64 {
    1e-9 * (1.0 + radius)
}

fn spread(coords: &[f64], dim: usize) -> f64 {
    let count = coords.len() / dim;
    let mut mean = vec![0.0; dim];
    for p in coords.chunks_exact(dim) {
        for k in 0..dim {
            mean[k] += p[k] / count as f64;
        }
    }
    coords
        .chunks_exact(dim)
        .map(|p| super::linalg::dist2(p, &mean).sqrt())
        .fold(0.0, f64::max)
}

fn validate_points(coords: &[f64], dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be at least 2, got {dim}")));
    }
    if !coords.len().is_multiple_of(dim) {
        return Err(Error::InvalidArgument("coordinate buffer is not a multiple of the dimension".into()));
    }
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidArgument("non-finite coordinate".into()));
    }
    if coords.len() / dim < dim + 1 {
        return Err(Error::DegenerateInput { dim });
    }
    Ok(())
}

/// Groups boundary simplices by supporting hyperplane.
fn merge_facets(simplices: &[HullSimplex], tol: f64) -> (Vec<(Vec<f64>, f64)>, Vec<usize>) {
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut owner = Vec::with_capacity(simplices.len());
    for s in simplices {
        let found = planes
            .iter()
            .position(|(n, off)| (off - s.offset).abs() <= tol && dot(n, &s.normal) > 1.0 - 1e-9);
        match found {
            Some(i) => owner.push(i),
            None => {
                planes.push((s.normal.clone(), s.offset));
                owner.push(planes.len() - 1);
            }
        }
    }
    (planes, owner)
}

fn normals_rank(normals: &[&[f64]], dim: usize) -> usize {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for n in normals {
        let mut r = n.to_vec();
        for b in &basis {
            let c = dot(&r, b);
            r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let l = dot(&r, &r).sqrt();
        if l > 1e-7 {
            r.iter_mut().for_each(|x| *x /= l);
            basis.push(r);
            if basis.len() == dim {
                break;
            }
        }
    }
    basis.len()
}

struct HullResult {
    coords: Vec<f64>,
    boundary: Boundary,
}

/// Hull of a point cloud reduced to extreme points, with merged facets.
fn hull_with_facets(input: &[f64], dim: usize, tol: f64) -> Result<HullResult> {
    let mut pts = input.to_vec();
    for _round in 0..3 {
        let hull = quickhull(&pts, dim, tol)?;
        let (planes, owner) = merge_facets(&hull.simplices, tol);
        let count = pts.len() / dim;
        let mut on_planes: Vec<Vec<usize>> = vec![Vec::new(); count];
        let mut used = vec![false; count];
        for (s, &f) in hull.simplices.iter().zip(&owner) {
            for &v in &s.verts {
                used[v] = true;
                if !on_planes[v].contains(&f) {
                    on_planes[v].push(f);
                }
            }
        }
        let mut keep = vec![false; count];
        let mut dropped = false;
        for v in 0..count {
            if !used[v] {
                continue;
            }
            let normals: Vec<&[f64]> = on_planes[v].iter().map(|&f| planes[f].0.as_slice()).collect();
            if normals_rank(&normals, dim) == dim {
                keep[v] = true;
            } else {
                dropped = true;
            }
        }
        if dropped {
            pts = pts
                .chunks_exact(dim)
                .enumerate()
                .filter(|(i, _)| keep[*i])
                .flat_map(|(_, p)| p.iter().copied())
                .collect();
            continue;
        }

        // Re-index to the extreme points only.
        let mut remap = vec![usize::MAX; count];
        let mut coords = Vec::new();
        for v in 0..count {
            if keep[v] {
                remap[v] = coords.len() / dim;
                coords.extend_from_slice(&pts[v * dim..(v + 1) * dim]);
            }
        }
        let point = |i: usize| &coords[i * dim..(i + 1) * dim];
        let mut facets: Vec<Facet> = planes
            .iter()
            .map(|(n, off)| Facet {
                normal: Vector::from_column_slice(n),
                offset: *off,
                measure: 0.0,
                vertices: Vec::new(),
            })
            .collect();
        let mut volume = 0.0;
        let mut centroid = vec![0.0; dim];
        let mut cone = vec![0.0; dim * dim];
        for (s, &f) in hull.simplices.iter().zip(&owner) {
            let verts: Vec<usize> = s.verts.iter().map(|&v| remap[v]).collect();
            let refs: Vec<&[f64]> = verts.iter().map(|&v| point(v)).collect();
            facets[f].measure += facet_simplex_measure(&refs, &planes[f].0, dim);
            for (r, p) in refs.iter().enumerate() {
                for c in 0..dim {
                    cone[r * dim + c] = p[c] - hull.interior[c];
                }
            }
            let vol = super::linalg::det_in_place(&mut cone, dim).abs() / factorial(dim);
            volume += vol;
            for c in 0..dim {
                let mut s = hull.interior[c];
                for p in &refs {
                    s += p[c];
                }
                centroid[c] += vol * s / (dim + 1) as f64;
            }
            for &v in &verts {
                if !facets[f].vertices.contains(&v) {
                    facets[f].vertices.push(v);
                }
            }
        }
        for f in &mut facets {
            f.vertices.sort_unstable();
        }
        centroid.iter_mut().for_each(|c| *c /= volume);
        return Ok(HullResult {
            coords,
            boundary: Boundary {
                facets,
                volume,
                centroid,
            },
        });
    }
    Err(Error::DegenerateInput { dim })
}

impl ConvexBody {
    /// Convex hull of a flat, row-major point buffer.
    pub fn from_flat(dim: usize, coords: &[f64], label: impl Into<String>) -> Result<Self> {
        Self::from_flat_with_cap(dim, coords, label, DEFAULT_EXACT_DIM_CAP)
    }

    /// As [`ConvexBody::from_flat`] with an explicit exact-geometry dimension cap.
    pub fn from_flat_with_cap(
        dim: usize,
        coords: &[f64],
        label: impl Into<String>,
        exact_cap: usize,
    ) -> Result<Self> {
        validate_points(coords, dim)?;
        let tol = geometric_tolerance(spread(coords, dim));
        let label = label.into();
        if dim <= exact_cap {
            let HullResult { coords, boundary } = hull_with_facets(coords, dim, tol)?;
            let body = ConvexBody {
                dim,
                coords,
                label,
                exact_cap,
                tol,
                boundary: OnceLock::new(),
            };
            let _ = body.boundary.set(Ok(Arc::new(boundary)));
            Ok(body)
        } else {
            let coords = lp::extreme_points(coords, dim, tol)?;
            Ok(ConvexBody { dim, coords, label, exact_cap, tol, boundary: OnceLock::new() })
        }
    }

    /// Convex hull of a list of points.
    pub fn from_points(points: &[Vector], label: impl Into<String>) -> Result<Self> {
        let dim = points.first().map(|p| p.len()).ok_or(Error::DegenerateInput { dim: 0 })?;
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { left: dim, right: bad.len() });
        }
        let flat: Vec<f64> = points.iter().flat_map(|p| p.iter().copied()).collect();
        Self::from_flat(dim, &flat, label)
    }

    /// Builds a body from points already known to be in convex position
    /// (images of extreme points under an affine bijection, for example).
    pub(crate) fn from_extreme_flat(dim: usize, coords: Vec<f64>, label: String, exact_cap: usize) -> Self {
        let tol = geometric_tolerance(spread(&coords, dim));
        ConvexBody { dim, coords, label, exact_cap, tol, boundary: OnceLock::new() }
    }

    /// Axis-aligned box `prod [lower_i, upper_i]`.
    pub fn axis_box(lower: &[f64], upper: &[f64], label: impl Into<String>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch { left: lower.len(), right: upper.len() });
        }
        let dim = lower.len();
        if lower.iter().zip(upper).any(|(a, b)| !(b > a)) {
            return Err(Error::DegenerateInput { dim });
        }
        let mut coords = Vec::with_capacity(dim << dim);
        for mask in 0..(1usize << dim) {
            for k in 0..dim {
                coords.push(if (mask >> k) & 1 == 1 { upper[k] } else { lower[k] });
            }
        }
        Self::from_flat(dim, &coords, label)
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::axis_box(&vec![lo; dim], &vec![hi; dim], format!("cube[{lo},{hi}]^{dim}"))
    }

    /// `conv{0, e_1, ..., e_n}`.
    pub fn standard_simplex(dim: usize) -> Result<Self> {
        let mut coords = vec![0.0; dim];
        for i in 0..dim {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            coords.extend(e);
        }
        Self::from_flat(dim, &coords, format!("simplex^{dim}"))
    }

    /// Regular `sides`-gon inscribed in the circle of radius `radius`.
    pub fn regular_polygon(sides: usize, radius: f64) -> Result<Self> {
        let coords: Vec<f64> = (0..sides)
            .flat_map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / sides as f64;
                [radius * t.cos(), radius * t.sin()]
            })
            .collect();
        Self::from_flat(2, &coords, format!("{sides}-gon(r={radius})"))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn exact_cap(&self) -> usize {
        self.exact_cap
    }

    /// Membership and facet tolerance used for this body.
    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn vertex_vectors(&self) -> Vec<Vector> {
        self.vertices().map(Vector::from_column_slice).collect()
    }

    pub(crate) fn flat(&self) -> &[f64] {
        &self.coords
    }

    pub(crate) fn boundary(&self) -> Result<&Boundary> {
        let cached = self.boundary.get_or_init(|| {
            if self.dim > self.exact_cap {
                return Err(Error::MethodUnavailable { what: "facet enumeration", dim: self.dim });
            }
            hull_with_facets(&self.coords, self.dim, self.tol).map(|h| Arc::new(h.boundary))
        });
        match cached {
            Ok(b) => Ok(b.as_ref()),
            Err(e) => Err(e.clone()),
        }
    }

    /// Facet (halfspace) description, computed on first use.
    pub fn facets(&self) -> Result<&[Facet]> {
        self.boundary().map(|b| b.facets.as_slice())
    }

    pub fn has_facets(&self) -> bool {
        self.facets().is_ok()
    }

    /// Support function `sup { x . direction : x in K }`.
    pub fn support(&self, direction: &[f64]) -> Result<f64> {
        if direction.len() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: direction.len() });
        }
        if direction.iter().all(|&d| d == 0.0) {
            return Err(Error::ZeroDirection);
        }
        Ok(self.support_unchecked(direction))
    }

    pub(crate) fn support_unchecked(&self, direction: &[f64]) -> f64 {
        self.vertices().map(|v| dot(v, direction)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Mean of the vertices.
    pub fn vertex_mean(&self) -> Vector {
        let count = self.vertex_count() as f64;
        let mut m = Vector::zeros(self.dim);
        for v in self.vertices() {
            for k in 0..self.dim {
                m[k] += v[k] / count;
            }
        }
        m
    }

    /// Centre of mass of the solid body.
    pub fn centroid(&self) -> Result<Vector> {
        self.boundary().map(|b| Vector::from_column_slice(&b.centroid))
    }

    /// Membership test against the facet description.
    pub fn contains(&self, p: &[f64]) -> Result<bool> {
        let tol = self.tol;
        Ok(self
            .facets()?
            .iter()
            .all(|f| dot(f.normal.as_slice(), p) - f.offset <= tol))
    }

    /// Signed slack `min_F (offset_F - normal_F . p)`; positive inside.
    pub fn slack(&self, p: &[f64]) -> Result<f64> {
        Ok(self
            .facets()?
            .iter()
            .map(|f| f.offset - dot(f.normal.as_slice(), p))
            .fold(f64::INFINITY, f64::min))
    }

    pub fn translated(&self, shift: &[f64]) -> Self {
        let coords: Vec<f64> = self
            .vertices()
            .flat_map(|v| v.iter().zip(shift).map(|(a, b)| a + b))
            .collect();
        ConvexBody::from_extreme_flat(self.dim, coords, self.label.clone(), self.exact_cap)
    }

    pub fn scaled(&self, t: f64) -> Self {
        let coords: Vec<f64> = self.coords.iter().map(|c| c * t).collect();
        ConvexBody::from_extreme_flat(self.dim, coords, self.label.clone(), self.exact_cap)
    }

    /// Whether the vertex set equals its reflection through the vertex mean.
    pub fn is_centrally_symmetric(&self) -> bool {
        let c = self.vertex_mean();
        let radius = self.vertices().map(|v| super::linalg::dist2(v, c.as_slice()).sqrt()).fold(0.0, f64::max);
        let tol = 1e-7 * (1.0 + radius);
        self.vertices().all(|v| {
            let mirrored: Vec<f64> = v.iter().zip(c.iter()).map(|(x, m)| 2.0 * m - x).collect();
            self.vertices().any(|w| super::linalg::dist2(w, &mirrored).sqrt() <= tol)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_center_point_keeps_four_vertices() {
        let coords = [0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.5, 0.5];
        let body = ConvexBody::from_flat(2, &coords, "square").unwrap();
        assert_eq!(body.vertex_count(), 4);
        assert_eq!(body.facets().unwrap().len(), 4);
    }

    #[test]
    fn edge_midpoints_are_removed() {
        let coords = [0.5, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.5];
        let body = ConvexBody::from_flat(2, &coords, "square").unwrap();
        assert_eq!(body.vertex_count(), 4);
    }

    #[test]
    fn cube_has_eight_vertices_six_facets() {
        let cube = ConvexBody::cube(3, 0.0, 1.0).unwrap();
        assert_eq!(cube.vertex_count(), 8);
        let facets = cube.facets().unwrap();
        assert_eq!(facets.len(), 6);
        for f in facets {
            assert!((f.measure - 1.0).abs() < 1e-12);
            assert_eq!(f.vertices.len(), 4);
        }
    }

    #[test]
    fn every_facet_supported_by_dim_vertices() {
        let body = ConvexBody::standard_simplex(4).unwrap();
        for f in body.facets().unwrap() {
            assert!(f.vertices.len() >= 4);
            for v in body.vertices() {
                assert!(dot(f.normal.as_slice(), v) <= f.offset + 1e-12);
            }
        }
    }

    #[test]
    fn support_examples() {
        let cube = ConvexBody::cube(3, -1.0, 1.0).unwrap();
        assert_eq!(cube.support(&[1.0, 0.0, 0.0]).unwrap(), 1.0);
        let square = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        assert_eq!(square.support(&[1.0, 1.0]).unwrap(), 2.0);
        assert_eq!(square.support(&[0.0, 0.0]).unwrap_err(), Error::ZeroDirection);
    }

    #[test]
    fn centroid_of_simplex() {
        let s = ConvexBody::standard_simplex(3).unwrap();
        let c = s.centroid().unwrap();
        for k in 0..3 {
            assert!((c[k] - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_detection() {
        assert!(ConvexBody::cube(3, -1.0, 2.0).unwrap().is_centrally_symmetric());
        assert!(!ConvexBody::standard_simplex(3).unwrap().is_centrally_symmetric());
    }
}
