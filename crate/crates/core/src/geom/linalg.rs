//! Small dense kernels on flat row-major buffers.
//!
//! The hull and volume code calls these in tight loops, so they avoid
//! allocation where they can and never go through `nalgebra`.

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Determinant of an `n x n` row-major matrix, destroying the buffer.
pub(crate) fn det_in_place(m: &mut [f64], n: usize) -> f64 {
    debug_assert_eq!(m.len(), n * n);
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot = col;
        let mut best = m[col * n + col].abs();
        for row in col + 1..n {
            let v = m[row * n + col].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        let p = m[col * n + col];
        det *= p;
        for row in col + 1..n {
            let f = m[row * n + col] / p;
            if f != 0.0 {
                for k in col + 1..n {
                    m[row * n + k] -= f * m[col * n + k];
                }
            }
        }
    }
    det
}

#[cfg(test)]
pub(crate) fn det(m: &[f64], n: usize) -> f64 {
    let mut buf = m.to_vec();
    det_in_place(&mut buf, n)
}

/// Solves `a x = b` for square `a` by partial pivoting. Returns `None` when
/// a pivot falls below `tiny` in magnitude.
pub(crate) fn solve_in_place(a: &mut [f64], b: &mut [f64], n: usize, tiny: f64) -> Option<()> {
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col * n + col].abs();
        for row in col + 1..n {
            let v = a[row * n + col].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best <= tiny {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let p = a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] / p;
            if f != 0.0 {
                for k in col..n {
                    a[row * n + k] -= f * a[col * n + k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s -= a[col * n + k] * b[k];
        }
        b[col] = s / a[col * n + col];
    }
    Some(())
}

/// Unit normal and offset of the hyperplane through `n` points of `R^n`
/// (generalized cross product of the edge vectors). `None` if the points are
/// affinely dependent at the given tolerance.
pub(crate) fn hyperplane(points: &[&[f64]], n: usize) -> Option<(Vec<f64>, f64)> {
    debug_assert_eq!(points.len(), n);
    let rows = n - 1;
    let mut edges = vec![0.0; rows * n];
    for r in 0..rows {
        for c in 0..n {
            edges[r * n + c] = points[r + 1][c] - points[0][c];
        }
    }
    let mut normal = vec![0.0; n];
    let mut minor = vec![0.0; rows * rows];
    for skip in 0..n {
        for r in 0..rows {
            let mut cc = 0;
            for c in 0..n {
                if c != skip {
                    minor[r * rows + cc] = edges[r * n + c];
                    cc += 1;
                }
            }
        }
        let d = if rows == 0 { 1.0 } else { det_in_place(&mut minor, rows) };
        normal[skip] = if skip % 2 == 0 { d } else { -d };
    }
    let len = norm(&normal);
    if !(len > 0.0) || !len.is_finite() {
        return None;
    }
    normal.iter_mut().for_each(|v| *v /= len);
    let offset = dot(&normal, points[0]);
    Some((normal, offset))
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// `(n-1)`-dimensional measure of the simplex spanned by `n` points lying in
/// a hyperplane with unit normal `normal`.
pub(crate) fn facet_simplex_measure(points: &[&[f64]], normal: &[f64], n: usize) -> f64 {
    let mut m = vec![0.0; n * n];
    for r in 0..n - 1 {
        for c in 0..n {
            m[r * n + c] = points[r + 1][c] - points[0][c];
        }
    }
    m[(n - 1) * n..].copy_from_slice(normal);
    det_in_place(&mut m, n).abs() / factorial(n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_of_permutation_and_triangular() {
        let m = [0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 3.0];
        assert_eq!(det(&m, 3), -3.0);
        let t = [2.0, 5.0, 7.0, 0.0, 3.0, 1.0, 0.0, 0.0, 4.0];
        assert!((det(&t, 3) - 24.0).abs() < 1e-12);
    }

    #[test]
    fn hyperplane_through_axis_points() {
        let pts: Vec<Vec<f64>> = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let (n, off) = hyperplane(&refs, 3).unwrap();
        let s = 1.0 / 3f64.sqrt();
        let sign = n[0].signum();
        for v in &n {
            assert!((v * sign - s).abs() < 1e-12);
        }
        assert!((off * sign - s).abs() < 1e-12);
    }

    #[test]
    fn hyperplane_rejects_collinear() {
        let pts: Vec<Vec<f64>> = vec![vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0], vec![2.0, 2.0, 2.0]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        assert!(hyperplane(&refs, 3).is_none());
    }

    #[test]
    fn solve_small_system() {
        let mut a = vec![2.0, 1.0, 1.0, 3.0];
        let mut b = vec![3.0, 5.0];
        solve_in_place(&mut a, &mut b, 2, 1e-300).unwrap();
        assert!((b[0] - 0.8).abs() < 1e-12 && (b[1] - 1.4).abs() < 1e-12);
    }
}
