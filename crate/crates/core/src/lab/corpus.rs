//! Reproducible random test pairs.

use crate::error::Result;
use crate::geom::{random_body, ConvexBody, RngSeed};

/// Vertex-cloud size for pair `index` in dimension `n`; kept small in
/// higher dimensions where overlap evaluation dominates.
fn cloud_size(n: usize, index: u64) -> usize {
    let extra = if n <= 2 { 10 } else if n == 3 { 6 } else { 3 };
    n + 1 + (index as usize % (extra + 1))
}

/// Pair `index` of the corpus keyed by `seed`: two independent Gaussian hulls.
pub fn corpus_pair(n: usize, seed: u64, index: u64) -> Result<(ConvexBody, ConvexBody)> {
    let key = RngSeed::new(seed, n as u64).derive(index);
    let k = random_body(n, cloud_size(n, index), false, key.derive(0))?;
    let l = random_body(n, cloud_size(n, index / 3 + 1), false, key.derive(1))?;
    Ok((k, l))
}

/// A centrally symmetric body for pair `index`.
pub fn corpus_symmetric(n: usize, seed: u64, index: u64) -> Result<ConvexBody> {
    let key = RngSeed::new(seed, n as u64).derive(index);
    random_body(n, n + index as usize % 3, true, key.derive(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_reproducible_and_distinct() {
        let (a, b) = corpus_pair(3, 7, 4).unwrap();
        let (c, _) = corpus_pair(3, 7, 4).unwrap();
        let coords = |x: &ConvexBody| x.vertices().flatten().copied().collect::<Vec<f64>>();
        assert_eq!(coords(&a), coords(&c));
        assert_ne!(coords(&a), coords(&b));
        assert!(corpus_symmetric(4, 7, 1).unwrap().is_centrally_symmetric());
    }
}
