//! The chain of mean inequalities that bounds `Π(1 + ελ_i)` from below
//! by the Brunn-Minkowski defect terms.
//!
//! Throughout, `t_i = ελ_i / (1 + ελ_i)`, `u = (Π t_i)^{1/2n}`,
//! `v = √(εμ / (1 + εμ))` and `μ^n = Π λ_i`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::RngSeed;

/// Relative tolerance for the product constraint `Π λ_i = μ^n`.
pub const PRODUCT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainSample {
    pub eigenvalues: Vec<f64>,
    pub mu: f64,
    pub epsilon: f64,
    #[serde(rename = "U")]
    pub big_u: f64,
    #[serde(rename = "V")]
    pub big_v: f64,
    #[serde(rename = "W")]
    pub big_w: f64,
    pub u: f64,
    pub v: f64,
}

impl ChainSample {
    /// Validates `λ_i > 0`, `ελ_i <= 1/2` and `Π λ_i = μ^n`.
    pub fn new(eigenvalues: Vec<f64>, mu: f64, epsilon: f64) -> Result<Self> {
        if eigenvalues.is_empty() || !(mu > 0.0) || !(epsilon > 0.0) {
            return Err(Error::InvalidArgument("need eigenvalues, mu > 0 and epsilon > 0".into()));
        }
        for (index, &value) in eigenvalues.iter().enumerate() {
            if !(value > 0.0) {
                return Err(Error::NegativeEntry { index, value });
            }
            if epsilon * value > 0.5 {
                return Err(Error::OutOfRegime { index, product: epsilon * value });
            }
        }
        let n = eigenvalues.len() as f64;
        let log_product: f64 = eigenvalues.iter().map(|l| l.ln()).sum();
        if (log_product - n * mu.ln()).abs() > PRODUCT_TOLERANCE {
            return Err(Error::ProductConstraint { product: log_product.exp(), expected: mu.powf(n) });
        }
        let big_u = eigenvalues.iter().map(|&l| epsilon * (l - mu).powi(2) / (l + mu)).sum();
        let big_v = eigenvalues.iter().map(|&l| (l - mu).powi(2)).sum::<f64>().sqrt();
        let big_w = eigenvalues.iter().map(|&l| l + mu).sum();
        let log_t: f64 = eigenvalues.iter().map(|&l| (epsilon * l / (1.0 + epsilon * l)).ln()).sum();
        let u = (log_t / (2.0 * n)).exp();
        let v = (epsilon * mu / (1.0 + epsilon * mu)).sqrt();
        Ok(ChainSample { eigenvalues, mu, epsilon, big_u, big_v, big_w, u, v })
    }

    /// Sample with `μ` set to the geometric mean of the eigenvalues.
    pub fn from_eigenvalues(eigenvalues: Vec<f64>, epsilon: f64) -> Result<Self> {
        let n = eigenvalues.len().max(1) as f64;
        let mu = if eigenvalues.iter().all(|&l| l > 0.0) {
            (eigenvalues.iter().map(|l| l.ln()).sum::<f64>() / n).exp()
        } else {
            f64::NAN
        };
        if mu.is_nan() {
            let (index, &value) = eigenvalues.iter().enumerate().find(|(_, &l)| !(l > 0.0)).unwrap_or((0, &f64::NAN));
            return Err(Error::NegativeEntry { index, value });
        }
        Self::new(eigenvalues, mu, epsilon)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    fn roots(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues.iter().map(|&l| (self.epsilon * l / (1.0 + self.epsilon * l)).sqrt())
    }

    /// `Π (1 + ελ_i)`.
    pub fn product(&self) -> f64 {
        self.eigenvalues.iter().map(|&l| 1.0 + self.epsilon * l).product()
    }
}

/// `lesser <= greater`, with `margin = greater - lesser`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub lesser: f64,
    pub greater: f64,
    pub margin: f64,
    pub holds: bool,
}

impl Comparison {
    fn new(lesser: f64, greater: f64) -> Self {
        let tol = 1e-12 * lesser.abs().max(greater.abs()).max(1.0);
        Comparison { lesser, greater, margin: greater - lesser, holds: greater - lesser >= -tol }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    /// `GM(t) <= AM(t) - (1/n) Σ(√t_i - u)²`.
    pub stable_amgm_on_ratios: Comparison,
    /// `GM(1/(1+ελ)) <= AM(1/(1+ελ))`.
    pub amgm_on_complements: Comparison,
    /// `(1+εμ) / P^{1/n} <= 1 - (1/n) Σ(√t_i - u)²`.
    pub combined_with_u: Comparison,
    /// `1 - (1/n) Σ(√t_i - u)² <= 1`.
    pub combined_at_most_one: Comparison,
    /// `u <= v`.
    pub u_below_v: Comparison,
    /// `Σ(√t_i - v)² <= Σ(√t_i - u)²`.
    pub v_spread_below_u_spread: Comparison,
    /// `nu + nv <= 2 Σ √t_i`.
    pub root_sum_two_means: Comparison,
    /// `nv <= Σ √t_i`.
    pub root_sum_above_v: Comparison,
    /// `(1+εμ) / P^{1/n} <= 1 - (1/n) Σ(√t_i - v)²`.
    pub combined_with_v: Comparison,
    /// Smallest margin of `ε(λ_i-μ)² / (2.1(λ_i+μ)) <= (√t_i - v)²`;
    /// this per-term estimate needs `ε` small and can fail in the regime.
    pub per_term_estimate: Comparison,
    /// `(1+εμ)^n / (1 - U/(2.1n))^n <= P`.
    pub product_reciprocal_form: Comparison,
    /// `(1+εμ)^n (1 + U/(2.1n))^n <= P`.
    pub product_power_form: Comparison,
    /// `(1+εμ)^n (1 + U/2.1) <= P`.
    pub product_linear_form: Comparison,
    /// `W <= √n V + 2nμ`.
    pub w_bound: Comparison,
}

/// Names of the displayed inequalities, in chain order.
pub const DISPLAYED: [&str; 13] = [
    "stable-amgm-on-ratios",
    "amgm-on-complements",
    "combined-with-u",
    "combined-at-most-one",
    "u-below-v",
    "v-spread-below-u-spread",
    "root-sum-two-means",
    "root-sum-above-v",
    "combined-with-v",
    "product-reciprocal-form",
    "product-power-form",
    "product-linear-form",
    "w-bound",
];

impl ChainReport {
    /// Every displayed inequality of the chain; the per-term estimate is
    /// reported separately.
    pub fn displayed(&self) -> [(&'static str, Comparison); 13] {
        let values = [
            self.stable_amgm_on_ratios,
            self.amgm_on_complements,
            self.combined_with_u,
            self.combined_at_most_one,
            self.u_below_v,
            self.v_spread_below_u_spread,
            self.root_sum_two_means,
            self.root_sum_above_v,
            self.combined_with_v,
            self.product_reciprocal_form,
            self.product_power_form,
            self.product_linear_form,
            self.w_bound,
        ];
        std::array::from_fn(|i| (DISPLAYED[i], values[i]))
    }

    pub fn all_displayed_hold(&self) -> bool {
        self.displayed().iter().all(|(_, c)| c.holds)
    }
}

pub fn chain_evaluate(s: &ChainSample) -> ChainReport {
    let n = s.dim() as f64;
    let eps = s.epsilon;
    let roots: Vec<f64> = s.roots().collect();
    let t: Vec<f64> = roots.iter().map(|r| r * r).collect();
    let gm_t = s.u * s.u;
    let am_t = t.iter().sum::<f64>() / n;
    let spread_u = roots.iter().map(|r| (r - s.u).powi(2)).sum::<f64>();
    let spread_v = roots.iter().map(|r| (r - s.v).powi(2)).sum::<f64>();
    let comp: Vec<f64> = s.eigenvalues.iter().map(|&l| 1.0 / (1.0 + eps * l)).collect();
    let gm_comp = (comp.iter().map(|c| c.ln()).sum::<f64>() / n).exp();
    let am_comp = comp.iter().sum::<f64>() / n;
    let p = s.product();
    let left = (1.0 + eps * s.mu) / p.powf(1.0 / n);
    let sum_roots: f64 = roots.iter().sum();
    let base = (1.0 + eps * s.mu).powf(n);
    let per_term = s
        .eigenvalues
        .iter()
        .zip(&roots)
        .map(|(&l, r)| Comparison::new(eps * (l - s.mu).powi(2) / (2.1 * (l + s.mu)), (r - s.v).powi(2)))
        .min_by(|a, b| a.margin.total_cmp(&b.margin))
        .expect("nonempty");
    let shrink = s.big_u / (2.1 * n);
    ChainReport {
        stable_amgm_on_ratios: Comparison::new(gm_t, am_t - spread_u / n),
        amgm_on_complements: Comparison::new(gm_comp, am_comp),
        combined_with_u: Comparison::new(left, 1.0 - spread_u / n),
        combined_at_most_one: Comparison::new(1.0 - spread_u / n, 1.0),
        u_below_v: Comparison::new(s.u, s.v),
        v_spread_below_u_spread: Comparison::new(spread_v, spread_u),
        root_sum_two_means: Comparison::new(n * s.u + n * s.v, 2.0 * sum_roots),
        root_sum_above_v: Comparison::new(n * s.v, sum_roots),
        combined_with_v: Comparison::new(left, 1.0 - spread_v / n),
        per_term_estimate: per_term,
        product_reciprocal_form: Comparison::new(base / (1.0 - shrink).powf(n), p),
        product_power_form: Comparison::new(base * (1.0 + shrink).powf(n), p),
        product_linear_form: Comparison::new(base * (1.0 + s.big_u / 2.1), p),
        w_bound: Comparison::new(s.big_w, n.sqrt() * s.big_v + 2.0 * n * s.mu),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainSuiteConfig {
    pub count: usize,
    pub min_dim: usize,
    pub max_dim: usize,
    pub seed: u64,
}

impl Default for ChainSuiteConfig {
    fn default() -> Self {
        ChainSuiteConfig { count: 100_000, min_dim: 2, max_dim: 10, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckTally {
    pub name: &'static str,
    pub violations: usize,
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainSuiteReport {
    pub samples: usize,
    pub tallies: Vec<CheckTally>,
    /// Violations of the per-term estimate, which is not a displayed
    /// inequality and needs smaller `ε` than the regime guarantees.
    pub per_term_violations: usize,
}

impl ChainSuiteReport {
    pub fn violations_of(&self, name: &str) -> Option<usize> {
        self.tallies.iter().find(|t| t.name == name).map(|t| t.violations)
    }
}

/// Random in-regime samples: eigenvalues log-uniform in `[0.1, 10]`,
/// `μ` their geometric mean, `ε` uniform in `(0, 1/(2 max λ)]`.
pub fn chain_suite(config: &ChainSuiteConfig) -> Result<ChainSuiteReport> {
    if config.min_dim < 1 || config.max_dim < config.min_dim {
        return Err(Error::InvalidArgument("empty dimension range".into()));
    }
    const CHUNK: usize = 4096;
    let base = RngSeed::new(config.seed, 0);
    let reports: Vec<Vec<ChainReport>> = (0..config.count.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = base.derive(c as u64).rng();
            let end = ((c + 1) * CHUNK).min(config.count);
            (c * CHUNK..end)
                .map(|_| {
                    let n = rng.random_range(config.min_dim..=config.max_dim);
                    let lambda: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(-1.0..=1.0))).collect();
                    let top = lambda.iter().copied().fold(0.0, f64::max);
                    let eps = (1.0 - rng.random::<f64>()) / (2.0 * top);
                    chain_evaluate(&ChainSample::from_eigenvalues(lambda, eps).expect("in regime"))
                })
                .collect()
        })
        .collect();
    let mut tallies: Vec<CheckTally> = DISPLAYED
        .iter()
        .map(|&name| CheckTally { name, violations: 0, worst_margin: f64::INFINITY })
        .collect();
    let mut per_term_violations = 0;
    for r in reports.iter().flatten() {
        for (tally, (_, c)) in tallies.iter_mut().zip(r.displayed()) {
            tally.violations += usize::from(!c.holds);
            tally.worst_margin = tally.worst_margin.min(c.margin);
        }
        per_term_violations += usize::from(!r.per_term_estimate.holds);
    }
    Ok(ChainSuiteReport { samples: config.count, tallies, per_term_violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meanineq::{root_ratio_check, stable_amgm};
    use proptest::prelude::*;

    #[test]
    fn equal_eigenvalues_are_equality_cases() {
        let s = ChainSample::new(vec![1.5; 3], 1.5, 0.2).unwrap();
        assert_eq!((s.big_u, s.big_v), (0.0, 0.0));
        let r = chain_evaluate(&s);
        assert!(r.all_displayed_hold());
        assert!(r.combined_with_v.margin.abs() < 1e-14);
        assert!(r.u_below_v.margin.abs() < 1e-14);
        assert!(r.product_linear_form.margin.abs() < 1e-13);
    }

    #[test]
    fn two_dimensional_example() {
        let s = ChainSample::new(vec![2.0, 0.5], 1.0, 0.2).unwrap();
        assert!((s.product() - 1.54).abs() < 1e-14);
        assert!((s.big_u - 0.1).abs() < 1e-14);
        let r = chain_evaluate(&s);
        assert!(r.all_displayed_hold(), "{r:#?}");
        assert!((r.product_linear_form.lesser - 1.44 * (1.0 + 0.1 / 2.1)).abs() < 1e-12);
        // The per-term estimate is too strong at this ε for λ = 0.5.
        assert!(!r.per_term_estimate.holds);
    }

    #[test]
    fn regime_and_product_are_enforced() {
        assert!(matches!(ChainSample::new(vec![2.0, 0.5], 1.0, 0.3), Err(Error::OutOfRegime { index: 0, .. })));
        assert!(matches!(ChainSample::new(vec![2.0, 0.6], 1.0, 0.1), Err(Error::ProductConstraint { .. })));
    }

    #[test]
    fn small_suite_has_no_combined_violations() {
        let r = chain_suite(&ChainSuiteConfig { count: 5000, seed: 3, ..Default::default() }).unwrap();
        assert_eq!(r.violations_of("combined-with-v"), Some(0));
        assert_eq!(r.violations_of("combined-with-u"), Some(0));
        assert_eq!(r.violations_of("w-bound"), Some(0));
    }

    proptest! {
        #[test]
        fn two_mean_sum_follows_from_its_parts(
            lambda in prop::collection::vec(0.1f64..10.0, 2..8),
            frac in 0.01f64..1.0,
        ) {
            let top = lambda.iter().copied().fold(0.0, f64::max);
            let s = ChainSample::from_eigenvalues(lambda.clone(), frac / (2.0 * top)).unwrap();
            let r = chain_evaluate(&s);
            let x: Vec<f64> = lambda.iter().map(|l| s.epsilon * l).collect();
            let roots = root_ratio_check(&x).unwrap();
            let t: Vec<f64> = x.iter().map(|v| v / (1.0 + v)).collect();
            let sqrt_t: Vec<f64> = t.iter().map(|v| v.sqrt()).collect();
            let am_part = stable_amgm(&sqrt_t).unwrap();
            let n = lambda.len() as f64;
            prop_assert!(roots.holds(1e-12));
            prop_assert!(am_part.arith_mean * n >= n * s.u - 1e-12);
            prop_assert!((roots.rhs - n * s.v).abs() < 1e-12);
            prop_assert!(r.root_sum_two_means.holds);
        }
    }
}
