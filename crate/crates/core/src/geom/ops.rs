use nalgebra::DMatrix;
use serde::Serialize;

use super::body::{ConvexBody, Vector};
use crate::error::{Error, Result};

/// `x -> matrix * x + shift`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineMap {
    pub matrix: DMatrix<f64>,
    pub shift: Vector,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        AffineMap { matrix: DMatrix::identity(n, n), shift: Vector::zeros(n) }
    }

    pub fn linear(matrix: DMatrix<f64>) -> Self {
        let n = matrix.nrows();
        AffineMap { matrix, shift: Vector::zeros(n) }
    }

    pub fn apply(&self, x: &[f64]) -> Vector {
        &self.matrix * Vector::from_column_slice(x) + &self.shift
    }

    /// Whether the linear part is numerically singular.
    pub fn is_singular(&self) -> bool {
        let n = self.matrix.nrows();
        let scale = self.matrix.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let det = self.matrix.determinant();
        !(det.abs() > 1e-13 * scale.powi(n as i32)) || !det.is_finite()
    }
}

/// `K + L = {x + y}`: hull of all pairwise vertex sums.
pub fn minkowski_sum(k: &ConvexBody, l: &ConvexBody) -> Result<ConvexBody> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch { left: k.dim(), right: l.dim() });
    }
    let mut sums = Vec::with_capacity(k.vertex_count() * l.vertex_count() * k.dim());
    for a in k.vertices() {
        for b in l.vertices() {
            sums.extend(a.iter().zip(b).map(|(x, y)| x + y));
        }
    }
    ConvexBody::from_flat_with_cap(
        k.dim(),
        &sums,
        format!("{}+{}", k.label(), l.label()),
        k.exact_cap().min(l.exact_cap()),
    )
}

/// Image `T(K)` under a nonsingular affine map.
pub fn apply_affine(k: &ConvexBody, t: &AffineMap) -> Result<ConvexBody> {
    let n = k.dim();
    if t.matrix.nrows() != n || t.matrix.ncols() != n || t.shift.len() != n {
        return Err(Error::DimensionMismatch { left: n, right: t.matrix.nrows() });
    }
    if t.is_singular() {
        return Err(Error::SingularMatrix);
    }
    let coords: Vec<f64> = k.vertices().flat_map(|v| t.apply(v).iter().copied().collect::<Vec<_>>()).collect();
    Ok(ConvexBody::from_extreme_flat(n, coords, k.label().to_string(), k.exact_cap()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_add_to_square() {
        let s = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let sum = minkowski_sum(&s, &s).unwrap();
        assert_eq!(sum.vertex_count(), 4);
        assert!((sum.volume().unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn box_sum_volume() {
        let k = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let l = ConvexBody::axis_box(&[0.0, 0.0], &[1.0, 1.1], "l").unwrap();
        assert!((minkowski_sum(&k, &l).unwrap().volume().unwrap() - 4.2).abs() < 1e-12);
    }

    #[test]
    fn shear_preserves_area() {
        let s = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let t = AffineMap::linear(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]));
        assert!((apply_affine(&s, &t).unwrap().volume().unwrap() - 1.0).abs() < 1e-12);
        let sing = AffineMap::linear(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]));
        assert_eq!(apply_affine(&s, &sing).unwrap_err(), Error::SingularMatrix);
    }
}
