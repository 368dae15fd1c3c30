//! Random search for pairs that force a large Brunn-Minkowski constant.
//!
//! Any pair gives `C >= A² / (β σ^{1/n})`; the search maximises this over a
//! prior mixing independent hulls, small perturbations of a single hull and
//! the box family.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{bm_quantities, relative_asymmetry, OverlapOptions};
use crate::geom::{random_body, ConvexBody, RngSeed};

use super::boxes::box_pair;
use super::verify::bm_constant;

/// Pairs with `β` below this are dropped: the ratio is rounding noise there.
pub const MIN_DEFICIT: f64 = 1e-12;

/// Number of entries kept.
pub const TOP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Independent,
    NearHomothetic,
    Boxes,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchEntry {
    pub index: u64,
    pub family: Family,
    /// `ε` for boxes, the relative vertex noise for perturbed hulls.
    pub parameter: f64,
    pub c_lower: f64,
    /// `c_lower / 400n⁶`.
    pub fraction_of_bound: f64,
    pub beta: f64,
    pub asymmetry: f64,
    pub sigma: f64,
    pub k: String,
    pub l: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub budget: usize,
    pub seed: u64,
    pub evaluated: usize,
    pub skipped: usize,
    pub best: Vec<SearchEntry>,
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi / lo).ln()).exp()
}

fn draw(n: usize, index: u64, key: RngSeed) -> Result<(Family, f64, ConvexBody, ConvexBody)> {
    let mut rng = key.rng();
    match index % 3 {
        0 => {
            let k = random_body(n, n + 1 + rng.random_range(0..2 * n), false, key.derive(0))?;
            let l = random_body(n, n + 1 + rng.random_range(0..2 * n), false, key.derive(1))?;
            Ok((Family::Independent, f64::NAN, k, l))
        }
        1 => {
            let k = random_body(n, n + 1 + rng.random_range(0..2 * n), false, key.derive(0))?;
            let noise = log_uniform(&mut rng, 1e-3, 0.2);
            let coords: Vec<f64> =
                k.vertices().flatten().map(|x| x + noise * rng.sample::<f64, _>(StandardNormal)).collect();
            let l = ConvexBody::from_flat(n, &coords, format!("perturbed({},noise={noise:.3e})", k.label()))?;
            Ok((Family::NearHomothetic, noise, k, l))
        }
        _ => {
            let eps = log_uniform(&mut rng, 1e-3, 0.3);
            let (k, l) = box_pair(n, eps)?;
            Ok((Family::Boxes, eps, k, l))
        }
    }
}

/// Evaluates `budget` pairs and keeps the [`TOP`] largest lower bounds.
pub fn worst_case_search(n: usize, budget: usize, seed: u64, opts: &OverlapOptions) -> Result<SearchReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("search needs n >= 2, got {n}")));
    }
    let root = RngSeed::new(seed, 0x5ea7c4);
    let scored: Vec<Result<Option<SearchEntry>>> = (0..budget as u64)
        .into_par_iter()
        .map(|index| {
            let (family, parameter, k, l) = draw(n, index, root.derive(index))?;
            let bm = bm_quantities(&k, &l)?;
            if bm.beta < MIN_DEFICIT {
                return Ok(None);
            }
            let a = relative_asymmetry(&k, &l, opts)?.value;
            let c_lower = a * a / (bm.beta * bm.sigma.powf(1.0 / n as f64));
            Ok(Some(SearchEntry {
                index,
                family,
                parameter,
                c_lower,
                fraction_of_bound: c_lower / bm_constant(n),
                beta: bm.beta,
                asymmetry: a,
                sigma: bm.sigma,
                k: k.label().to_owned(),
                l: l.label().to_owned(),
            }))
        })
        .collect();
    let mut best = Vec::new();
    let mut skipped = 0;
    for s in scored {
        match s? {
            Some(e) => best.push(e),
            None => skipped += 1,
        }
    }
    let evaluated = best.len();
    best.sort_by(|a, b| b.c_lower.total_cmp(&a.c_lower).then(a.index.cmp(&b.index)));
    best.truncate(TOP);
    Ok(SearchReport { n, budget, seed, evaluated, skipped, best })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_planar_search() {
        let r = worst_case_search(2, 60, 3, &OverlapOptions::default()).unwrap();
        assert_eq!(r.evaluated + r.skipped, 60);
        assert_eq!(r.best.len(), TOP);
        assert!(r.best.windows(2).all(|w| w[0].c_lower >= w[1].c_lower));
        assert!(r.best[0].c_lower > 25.0 && r.best[0].c_lower < bm_constant(2), "{:?}", r.best[0]);
        let again = worst_case_search(2, 60, 3, &OverlapOptions::default()).unwrap();
        assert_eq!(r, again);
    }
}
