use crate::error::Result;
use crate::geom::{ConvexBody, Vector};

/// `L` translated so that the origin is interior: unchanged when it already
/// is, otherwise recentred at its centroid.
fn centred(l: &ConvexBody) -> Result<std::borrow::Cow<'_, ConvexBody>> {
    let origin = vec![0.0; l.dim()];
    if l.slack(&origin)? > l.tolerance() {
        return Ok(std::borrow::Cow::Borrowed(l));
    }
    let c: Vector = -l.centroid()?;
    Ok(std::borrow::Cow::Owned(l.translated(c.as_slice())))
}

/// Anisotropic perimeter `P_L(E) = sum_F |F| h_L(nu_F)` over the facets of `E`.
pub fn anisotropic_perimeter(e: &ConvexBody, l: &ConvexBody) -> Result<f64> {
    if e.dim() != l.dim() {
        return Err(crate::Error::DimensionMismatch { left: e.dim(), right: l.dim() });
    }
    let l = centred(l)?;
    Ok(e
        .facets()?
        .iter()
        .map(|f| f.measure * l.support_unchecked(f.normal.as_slice()))
        .sum())
}

/// Wulff lower bound `n |E|^{(n-1)/n} |L|^{1/n}`.
pub fn wulff_minimum(e: &ConvexBody, l: &ConvexBody) -> Result<f64> {
    let n = e.dim() as f64;
    Ok(n * e.volume()?.powf((n - 1.0) / n) * l.volume()?.powf(1.0 / n))
}

/// Isoperimetric deficit `delta(E) = P_L(E) / (n |E|^{(n-1)/n} |L|^{1/n}) - 1`.
pub fn isoperimetric_deficit(e: &ConvexBody, l: &ConvexBody) -> Result<f64> {
    Ok(anisotropic_perimeter(e, l)? / wulff_minimum(e, l)? - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_against_itself() {
        let l = ConvexBody::cube(2, -1.0, 1.0).unwrap();
        assert!((anisotropic_perimeter(&l, &l).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn square_against_disc() {
        let disc = ConvexBody::regular_polygon(256, 1.0).unwrap();
        let sq = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        assert!((anisotropic_perimeter(&sq, &disc).unwrap() - 4.0).abs() < 1e-3);
        // Polygon correction: |disc| is slightly below pi.
        let delta = isoperimetric_deficit(&sq, &disc).unwrap();
        assert!((delta - (2.0 / std::f64::consts::PI.sqrt() - 1.0)).abs() < 1e-3);
    }

    #[test]
    fn hand_sum_for_rectangle_weight() {
        let e = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let l = ConvexBody::axis_box(&[0.0, 0.0], &[1.0, 2.0], "l").unwrap();
        // Recentred weight [-1/2,1/2] x [-1,1]: two unit edges with normals
        // +-e1 (weight 1/2) and two with +-e2 (weight 1).
        let hand = 0.5 + 0.5 + 1.0 + 1.0;
        assert!((anisotropic_perimeter(&e, &l).unwrap() - hand).abs() < 1e-12);
    }

    #[test]
    fn homothet_has_zero_deficit() {
        let l = ConvexBody::standard_simplex(3).unwrap();
        let e = l.scaled(3.0).translated(&[1.0, -2.0, 0.5]);
        assert!(isoperimetric_deficit(&e, &l).unwrap().abs() < 1e-9);
    }
}
