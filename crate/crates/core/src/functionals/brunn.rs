use serde::Serialize;

use super::overlap::{relative_asymmetry, OverlapOptions};
use crate::error::Result;
use crate::geom::{minkowski_sum, ConvexBody, Vector};

/// Volume-side quantities of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BmQuantities {
    /// `|K+L|^{1/n} / (|K|^{1/n} + |L|^{1/n}) - 1`.
    pub beta: f64,
    /// `max(|K|/|L|, |L|/|K|)`.
    pub sigma: f64,
    pub volume_k: f64,
    pub volume_l: f64,
    pub volume_sum: f64,
}

pub fn bm_quantities(k: &ConvexBody, l: &ConvexBody) -> Result<BmQuantities> {
    let sum = minkowski_sum(k, l)?;
    let n = k.dim() as f64;
    let (vk, vl, vs) = (k.volume()?, l.volume()?, sum.volume()?);
    Ok(BmQuantities {
        beta: vs.powf(1.0 / n) / (vk.powf(1.0 / n) + vl.powf(1.0 / n)) - 1.0,
        sigma: (vk / vl).max(vl / vk),
        volume_k: vk,
        volume_l: vl,
        volume_sum: vs,
    })
}

/// Every pair functional at once.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BodyPairMetrics {
    pub sigma: f64,
    pub asymmetry: f64,
    pub bm_deficit: f64,
    pub optimal_shift: Vector,
    pub scale_lambda: f64,
    pub converged: bool,
}

pub fn pair_metrics(k: &ConvexBody, l: &ConvexBody, opts: &OverlapOptions) -> Result<BodyPairMetrics> {
    let bm = bm_quantities(k, l)?;
    let a = relative_asymmetry(k, l, opts)?;
    Ok(BodyPairMetrics {
        sigma: bm.sigma,
        asymmetry: a.value,
        bm_deficit: bm.beta,
        optimal_shift: a.optimal_shift,
        scale_lambda: a.scale_lambda,
        converged: a.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_pair_deficit() {
        let k = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let l = ConvexBody::axis_box(&[0.0, 0.0], &[1.0, 1.1], "l").unwrap();
        let q = bm_quantities(&k, &l).unwrap();
        let expected = 4.2f64.sqrt() / (1.0 + 1.1f64.sqrt()) - 1.0;
        assert!((q.beta - expected).abs() < 1e-14);
        assert!((q.beta - 2.83e-4).abs() < 1e-6);
        assert!((q.sigma - 1.1).abs() < 1e-12);
    }

    #[test]
    fn homothets_have_zero_deficit() {
        let k = ConvexBody::standard_simplex(3).unwrap();
        let l = k.scaled(2.5).translated(&[3.0, 0.0, -1.0]);
        assert!(bm_quantities(&k, &l).unwrap().beta.abs() < 1e-9);
        let m = pair_metrics(&k, &k, &OverlapOptions::default()).unwrap();
        assert!(m.bm_deficit.abs() < 1e-12 && m.asymmetry < 1e-6 && m.sigma == 1.0);
    }
}
