//! Stable arithmetic-geometric mean inequalities.
//!
//! For `x_1, ..., x_n >= 0` with geometric mean `x`, three defect terms are
//! bounded by `AM - GM`:
//!
//! * `(1/n) Σ (√x_i - √x)²`, sharp for `(1, 0, ..., 0)`;
//! * `(1/2n) Σ (x_i - x)² / (x_i + x)`, a weaker but rational form;
//! * `(1/(n(n-1))) Σ_{i<j} (√x_i - √x_j)²`, an identity when `n = 2`.
//!
//! Inputs are scaled by their largest entry before evaluation; every
//! quantity is 1-homogeneous so results are scaled back exactly.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{minkowski_sum, ConvexBody, RngSeed};

/// Residual tolerance used for equality classification (unit scale).
pub const EQUALITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanDefect {
    pub tuple: Vec<f64>,
    pub geo_mean: f64,
    pub arith_mean: f64,
    /// `(1/n) Σ (√x_i - √x)²`.
    pub defect_sqrt_gm: f64,
    /// `(1/2n) Σ (x_i - x)² / (x_i + x)`, with `0/0 = 0`.
    pub defect_ratio: f64,
    /// `(1/(n(n-1))) Σ_{i<j} (√x_i - √x_j)²`.
    pub defect_pairwise: f64,
    /// Largest entry; all other fields were computed on `tuple / scale`.
    pub scale: f64,
}

impl MeanDefect {
    /// `AM - GM - defect` for the three defects, relative to the largest entry.
    pub fn relative_residuals(&self) -> [f64; 3] {
        if self.scale == 0.0 {
            return [0.0; 3];
        }
        let gap = (self.arith_mean - self.geo_mean) / self.scale;
        [
            gap - self.defect_sqrt_gm / self.scale,
            gap - self.defect_ratio / self.scale,
            gap - self.defect_pairwise / self.scale,
        ]
    }
}

fn geometric_mean_unit(y: &[f64]) -> f64 {
    if y.contains(&0.0) {
        return 0.0;
    }
    (y.iter().map(|v| v.ln()).sum::<f64>() / y.len() as f64).exp()
}

/// All three defects of a nonnegative tuple.
pub fn stable_amgm(tuple: &[f64]) -> Result<MeanDefect> {
    if tuple.len() < 2 {
        return Err(Error::InvalidArgument("tuple needs at least two entries".into()));
    }
    for (index, &value) in tuple.iter().enumerate() {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::NegativeEntry { index, value });
        }
    }
    let n = tuple.len() as f64;
    let scale = tuple.iter().copied().fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(MeanDefect {
            tuple: tuple.to_vec(),
            geo_mean: 0.0,
            arith_mean: 0.0,
            defect_sqrt_gm: 0.0,
            defect_ratio: 0.0,
            defect_pairwise: 0.0,
            scale,
        });
    }
    let y: Vec<f64> = tuple.iter().map(|v| v / scale).collect();
    let gm = geometric_mean_unit(&y);
    let am = y.iter().sum::<f64>() / n;
    let sgm = gm.sqrt();
    let d22 = y.iter().map(|v| (v.sqrt() - sgm).powi(2)).sum::<f64>() / n;
    let d23 = y
        .iter()
        .map(|&v| if v + gm == 0.0 { 0.0 } else { (v - gm).powi(2) / (v + gm) })
        .sum::<f64>()
        / (2.0 * n);
    let mut pair = 0.0;
    for i in 0..y.len() {
        for j in i + 1..y.len() {
            pair += (y[i].sqrt() - y[j].sqrt()).powi(2);
        }
    }
    let d24 = pair / (n * (n - 1.0));
    Ok(MeanDefect {
        tuple: tuple.to_vec(),
        geo_mean: gm * scale,
        arith_mean: am * scale,
        defect_sqrt_gm: d22 * scale,
        defect_ratio: d23 * scale,
        defect_pairwise: d24 * scale,
        scale,
    })
}

/// Which defect's equality cases to classify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefectForm {
    /// Distances to the square root of the geometric mean.
    SqrtGeometricMean,
    /// Pairwise distances of square roots.
    Pairwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EqualityCase {
    None,
    AllEqual,
    SomeZero,
    NEqualsTwo,
    AllButOneZero,
}

/// Equality case of the chosen inequality, decided by its residual.
pub fn classify_equality(defect: &MeanDefect, form: DefectForm) -> EqualityCase {
    let n = defect.tuple.len();
    let [r22, _, r24] = defect.relative_residuals();
    let scale = defect.scale;
    let tiny = EQUALITY_TOLERANCE * scale;
    let all_equal = || {
        let lo = defect.tuple.iter().copied().fold(f64::INFINITY, f64::min);
        scale - lo <= tiny
    };
    match form {
        DefectForm::SqrtGeometricMean => {
            if r22.abs() > EQUALITY_TOLERANCE {
                EqualityCase::None
            } else if defect.tuple.iter().any(|&v| v <= tiny) && !all_equal() {
                EqualityCase::SomeZero
            } else if all_equal() {
                EqualityCase::AllEqual
            } else {
                EqualityCase::SomeZero
            }
        }
        DefectForm::Pairwise => {
            if n == 2 {
                EqualityCase::NEqualsTwo
            } else if r24.abs() > EQUALITY_TOLERANCE {
                EqualityCase::None
            } else if all_equal() {
                EqualityCase::AllEqual
            } else if defect.tuple.iter().filter(|&&v| v > tiny).count() <= 1 {
                EqualityCase::AllButOneZero
            } else {
                EqualityCase::None
            }
        }
    }
}

/// Both sides of `Σ √(x_i/(1+x_i)) >= n √(x/(1+x))` for entries in `[0, 1/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootRatioCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl RootRatioCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs >= self.rhs - tol
    }
}

/// The root-ratio inequality; entries outside `[0, 1/2]` are refused since
/// the inequality can fail there.
pub fn root_ratio_check(tuple: &[f64]) -> Result<RootRatioCheck> {
    if tuple.is_empty() {
        return Err(Error::InvalidArgument("empty tuple".into()));
    }
    for (index, &value) in tuple.iter().enumerate() {
        if !(0.0..=0.5).contains(&value) {
            return Err(Error::OutOfRangeEntry { index, value });
        }
    }
    let x = geometric_mean_unit(tuple);
    let lhs = tuple.iter().map(|v| (v / (1.0 + v)).sqrt()).sum();
    let rhs = tuple.len() as f64 * (x / (1.0 + x)).sqrt();
    Ok(RootRatioCheck { lhs, rhs })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitRow {
    pub epsilon: f64,
    /// `Π (x_i + ε)`, the volume of `[0,ε]^n + Π [0, x_i]`.
    pub product: f64,
    /// `(GM + ε)^n`.
    pub power: f64,
    pub residual: f64,
    pub residual_over_epsilon: f64,
}

/// The box pair `[0,ε]^n`, `Π[0,x_i]` under shrinking `ε`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmGmLimitReport {
    pub rows: Vec<LimitRow>,
    /// `Π(x_i+ε) >= (GM+ε)^n` at every `ε`.
    pub finite_inequality_holds: bool,
    /// `e_{n-1}(x) - n GM^{n-1}`, the exact first-order coefficient;
    /// nonnegative by AM-GM applied to the products `Π_{j≠i} x_j`.
    pub first_order_coefficient: f64,
    /// `|residual/ε - coefficient|` at the smallest `ε`.
    pub limit_error: f64,
}

/// Brunn-Minkowski on axis boxes, read as AM-GM in the limit `ε -> 0`.
///
/// Sum volumes come from the geometry kernel in dimensions it handles
/// exactly and from the closed-form product above that.
pub fn bm_to_amgm_limit(tuple: &[f64], epsilons: &[f64]) -> Result<AmGmLimitReport> {
    for (index, &value) in tuple.iter().enumerate() {
        if !(value > 0.0) {
            return Err(Error::NegativeEntry { index, value });
        }
    }
    if epsilons.windows(2).any(|w| !(w[1] < w[0])) || epsilons.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidArgument("epsilons must be positive and decreasing".into()));
    }
    let n = tuple.len();
    let gm = geometric_mean_unit(tuple);
    let l = (n <= crate::geom::DEFAULT_EXACT_DIM_CAP)
        .then(|| ConvexBody::axis_box(&vec![0.0; n], tuple, "box"))
        .transpose()?;
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let product = match &l {
            Some(l) => minkowski_sum(&ConvexBody::cube(n, 0.0, eps)?, l)?.volume()?,
            None => tuple.iter().map(|x| x + eps).product(),
        };
        let power = (gm + eps).powi(n as i32);
        let residual = product - power;
        rows.push(LimitRow { epsilon: eps, product, power, residual, residual_over_epsilon: residual / eps });
    }
    let e_minus_one: f64 = (0..n)
        .map(|i| tuple.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).product::<f64>())
        .sum();
    let coefficient = e_minus_one - n as f64 * gm.powi(n as i32 - 1);
    let tol = 1e-12 * rows.iter().map(|r| r.product).fold(1.0, f64::max);
    Ok(AmGmLimitReport {
        finite_inequality_holds: rows.iter().all(|r| r.residual >= -tol),
        limit_error: rows.last().map_or(f64::NAN, |r| (r.residual_over_epsilon - coefficient).abs()),
        first_order_coefficient: coefficient,
        rows,
    })
}

/// Summary statistics of a residual sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantiles {
    pub min: f64,
    pub p01: f64,
    pub p50: f64,
    pub p99: f64,
    pub max: f64,
}

impl Quantiles {
    pub fn of(values: &mut [f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        values.sort_by(f64::total_cmp);
        let at = |q: f64| values[((values.len() - 1) as f64 * q).round() as usize];
        Some(Quantiles { min: values[0], p01: at(0.01), p50: at(0.5), p99: at(0.99), max: values[values.len() - 1] })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub count: usize,
    /// Fixed tuple length, or `None` for uniform lengths in `2..=16`
    /// (`2..=10` for the root-ratio tuples).
    pub n: Option<usize>,
    pub seed: u64,
    /// Tolerance on relative residuals.
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub check: &'static str,
    pub tuple: Vec<f64>,
    pub residual: f64,
    pub seed: u64,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub tuples: usize,
    pub violations: usize,
    pub residual_sqrt_gm: Option<Quantiles>,
    pub residual_ratio: Option<Quantiles>,
    pub residual_pairwise: Option<Quantiles>,
    pub residual_defect_order: Option<Quantiles>,
    pub residual_root_ratio: Option<Quantiles>,
    /// First offending instances, at most ten.
    pub offending: Vec<Violation>,
}

const CHUNK: usize = 4096;

/// Randomised check of all stable mean inequalities.
///
/// AM-GM tuples are log-uniform over `[1e-6, 1e6]`; the root-ratio tuples
/// are uniform over `[0, 1/2]`. Chunks use derived streams, so the report is
/// independent of thread count.
pub fn amgm_suite(config: &SuiteConfig) -> SuiteReport {
    let chunks = config.count.div_ceil(CHUNK);
    let base = RngSeed::new(config.seed, 0);
    let per_chunk: Vec<([Vec<f64>; 5], Vec<Violation>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = base.derive(c as u64).rng();
            let mut res: [Vec<f64>; 5] = Default::default();
            let mut bad = Vec::new();
            let end = ((c + 1) * CHUNK).min(config.count);
            for index in c * CHUNK..end {
                let n = config.n.unwrap_or_else(|| rng.random_range(2..=16));
                let tuple: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(-6.0..6.0))).collect();
                let d = stable_amgm(&tuple).expect("positive tuple");
                let r = d.relative_residuals();
                let order = (d.defect_sqrt_gm - d.defect_ratio) / d.scale;
                let m = config.n.unwrap_or_else(|| rng.random_range(2..=10));
                let small: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..=0.5)).collect();
                let rr = root_ratio_check(&small).expect("entries in range");
                let checks = [
                    ("sqrt-gm", r[0], &tuple),
                    ("ratio", r[1], &tuple),
                    ("pairwise", r[2], &tuple),
                    ("defect-order", order, &tuple),
                    ("root-ratio", rr.lhs - rr.rhs, &small),
                ];
                for (k, (name, value, t)) in checks.into_iter().enumerate() {
                    res[k].push(value);
                    if value < -config.tolerance {
                        bad.push(Violation { check: name, tuple: t.clone(), residual: value, seed: config.seed, index });
                    }
                }
            }
            (res, bad)
        })
        .collect();
    let mut all: [Vec<f64>; 5] = Default::default();
    let mut offending = Vec::new();
    let mut violations = 0;
    for (res, bad) in per_chunk {
        for (k, v) in res.into_iter().enumerate() {
            all[k].extend(v);
        }
        violations += bad.len();
        offending.extend(bad.into_iter().take(10usize.saturating_sub(offending.len())));
    }
    let [mut a, mut b, mut c, mut d, mut e] = all;
    SuiteReport {
        tuples: config.count,
        violations,
        residual_sqrt_gm: Quantiles::of(&mut a),
        residual_ratio: Quantiles::of(&mut b),
        residual_pairwise: Quantiles::of(&mut c),
        residual_defect_order: Quantiles::of(&mut d),
        residual_root_ratio: Quantiles::of(&mut e),
        offending,
    }
}
