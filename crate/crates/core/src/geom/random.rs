use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::body::{ConvexBody, Vector};
use super::linalg::dot;
use super::rng::RngSeed;
use crate::error::{Error, Result};

const ATTEMPTS: u64 = 8;

/// Hull of `n_points` standard-normal samples; with `symmetric`, the
/// samples are united with their negatives.
pub fn random_body(dim: usize, n_points: usize, symmetric: bool, seed: RngSeed) -> Result<ConvexBody> {
    if n_points < dim + 1 && !(symmetric && 2 * n_points > dim) {
        return Err(Error::DegenerateInput { dim });
    }
    let mut rng = seed.rng();
    let mut last = Error::DegenerateInput { dim };
    for _ in 0..ATTEMPTS {
        let mut coords: Vec<f64> = (0..n_points * dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        if symmetric {
            let neg: Vec<f64> = coords.iter().map(|x| -x).collect();
            coords.extend(neg);
        }
        let label = format!(
            "random(n={dim},points={n_points},{}seed={},stream={})",
            if symmetric { "symmetric," } else { "" },
            seed.seed,
            seed.stream
        );
        match ConvexBody::from_flat(dim, &coords, label) {
            Ok(body) => return Ok(body),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Uniform samples of `K` by bounding-box rejection.
pub(crate) fn sample_flat(k: &ConvexBody, count: usize, seed: RngSeed) -> Result<Vec<f64>> {
    let dim = k.dim();
    let facets = k.facets()?;
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for v in k.vertices() {
        for t in 0..dim {
            lo[t] = lo[t].min(v[t]);
            hi[t] = hi[t].max(v[t]);
        }
    }
    let mut rng = seed.rng();
    let mut out = Vec::with_capacity(count * dim);
    let mut p = vec![0.0; dim];
    while out.len() < count * dim {
        for t in 0..dim {
            p[t] = rng.random_range(lo[t]..hi[t]);
        }
        if facets.iter().all(|f| dot(f.normal.as_slice(), &p) <= f.offset) {
            out.extend_from_slice(&p);
        }
    }
    Ok(out)
}

/// `count` uniform samples of `body`.
pub fn uniform_samples(body: &ConvexBody, count: usize, seed: RngSeed) -> Result<Vec<Vector>> {
    let dim = body.dim();
    Ok(sample_flat(body, count, seed)?.chunks(dim).map(Vector::from_row_slice).collect())
}

const HALTON_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// `count` points of a randomly shifted Halton sequence over the bounding
/// box, kept when inside `body`. Each point is uniform on the body while
/// the set covers it far more evenly than independent draws.
pub fn quasi_uniform_samples(body: &ConvexBody, count: usize, seed: RngSeed) -> Result<Vec<Vector>> {
    let dim = body.dim();
    if dim > HALTON_BASES.len() {
        return Err(Error::MethodUnavailable { what: "Halton sampling", dim });
    }
    let facets = body.facets()?;
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for v in body.vertices() {
        for t in 0..dim {
            lo[t] = lo[t].min(v[t]);
            hi[t] = hi[t].max(v[t]);
        }
    }
    let mut rng = seed.rng();
    let shift: Vec<f64> = (0..dim).map(|_| rng.random()).collect();
    let mut out = Vec::with_capacity(count);
    let mut p = vec![0.0; dim];
    let mut index = 1u64;
    while out.len() < count {
        for t in 0..dim {
            let x = (radical_inverse(index, HALTON_BASES[t]) + shift[t]).fract();
            p[t] = lo[t] + x * (hi[t] - lo[t]);
        }
        index += 1;
        if facets.iter().all(|f| dot(f.normal.as_slice(), &p) <= f.offset) {
            out.push(Vector::from_column_slice(&p));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_points_give_triangle() {
        let t = random_body(2, 3, false, RngSeed::new(5, 0)).unwrap();
        assert_eq!(t.vertex_count(), 3);
    }

    #[test]
    fn symmetric_bodies_are_symmetric() {
        for s in 0..5 {
            let b = random_body(3, 10, true, RngSeed::new(s, 1)).unwrap();
            assert!(b.is_centrally_symmetric());
            assert!(b.vertex_mean().norm() < 1e-12);
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let a = random_body(4, 20, false, RngSeed::new(42, 7)).unwrap();
        let b = random_body(4, 20, false, RngSeed::new(42, 7)).unwrap();
        assert_eq!(a.flat(), b.flat());
    }
}
