//! The box family `K = [0,1]^n`, `L = [0,1]^m × [0,1+ε]^{n-m}` with
//! `m = ⌊n/2⌋`, and the lower bound it gives on the best Brunn-Minkowski
//! constant.
//!
//! For boxes sharing a corner the optimal translate is the aligned one, so
//! everything has a closed form:
//!
//! ```text
//! β = (2((1+ε/2)^α - 1) - ((1+ε)^α - 1)) / (1 + (1+ε)^α),   α = (n-m)/n
//! A = 2 (1 - (1+ε)^{-αm})
//! σ = (1+ε)^{n-m}
//! c = A² / (β σ^{1/n})  ->  32 m (n-m)  as ε -> 0
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::ConvexBody;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxRow {
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    pub beta: f64,
    pub asymmetry: f64,
    pub sigma: f64,
    pub c_lower: f64,
}

fn check(n: usize, epsilon: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("box family needs n >= 2, got {n}")));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive and finite, got {epsilon}")));
    }
    Ok(())
}

/// The pair `(K, L)` as polytopes.
pub fn box_pair(n: usize, epsilon: f64) -> Result<(ConvexBody, ConvexBody)> {
    check(n, epsilon)?;
    let m = n / 2;
    let upper: Vec<f64> = (0..n).map(|i| if i < m { 1.0 } else { 1.0 + epsilon }).collect();
    Ok((
        ConvexBody::cube(n, 0.0, 1.0)?.with_label(format!("cube(n={n})")),
        ConvexBody::axis_box(&vec![0.0; n], &upper, format!("box(n={n},m={m},eps={epsilon})"))?,
    ))
}

/// Closed-form row, accurate for small `ε` through `expm1`/`ln_1p`.
pub fn box_row(n: usize, epsilon: f64) -> Result<BoxRow> {
    check(n, epsilon)?;
    let m = n / 2;
    let alpha = (n - m) as f64 / n as f64;
    let full = epsilon.ln_1p();
    let grow = (alpha * full).exp_m1();
    let beta = (2.0 * (alpha * (0.5 * epsilon).ln_1p()).exp_m1() - grow) / (2.0 + grow);
    let asymmetry = -2.0 * (-alpha * m as f64 * full).exp_m1();
    let sigma = ((n - m) as f64 * full).exp();
    let c_lower = asymmetry * asymmetry / (beta * (alpha * full).exp());
    Ok(BoxRow { n, m, epsilon, beta, asymmetry, sigma, c_lower })
}

/// `lim_{ε->0} c = 32 m (n-m)`.
pub fn box_limit(n: usize) -> f64 {
    let m = n / 2;
    32.0 * (m * (n - m)) as f64
}

/// Value at `x = 0` of the interpolating polynomial through `(x_i, y_i)`.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let k = xs.len();
    for level in 1..k {
        for i in 0..k - level {
            let (a, b) = (xs[i], xs[i + level]);
            p[i] = (b * p[i] - a * p[i + 1]) / (b - a);
        }
    }
    p.first().copied().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimSummary {
    pub n: usize,
    pub m: usize,
    /// Polynomial extrapolation of `c(ε)` to `ε = 0`.
    pub extrapolated: f64,
    pub exact_limit: f64,
    /// `max c / min c - 1` over the supplied `ε`.
    pub spread: f64,
    /// `A / (nε)` at the smallest `ε`.
    pub asymmetry_over_n_eps: f64,
}

/// Least-squares fit `log c ≈ a + p log n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Standard error of the exponent; absent with two points.
    pub stderr: Option<f64>,
    /// `exponent ± 2 stderr`.
    pub band: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureTable {
    pub rows: Vec<BoxRow>,
    pub dims: Vec<DimSummary>,
    /// Absent when fewer than two dimensions were requested.
    pub fit: Option<ExponentFit>,
}

pub fn fit_exponent(ns: &[usize], values: &[f64]) -> Option<ExponentFit> {
    let k = ns.len();
    if k < 2 {
        return None;
    }
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / k as f64, ys.iter().sum::<f64>() / k as f64);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let stderr = (k > 2).then(|| {
        let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - exponent * x).powi(2)).sum();
        (ssr / (k - 2) as f64 / sxx).sqrt()
    });
    Some(ExponentFit { exponent, intercept, stderr, band: stderr.map(|s| [exponent - 2.0 * s, exponent + 2.0 * s]) })
}

/// Tabulates the family for every `n` and `ε`, extrapolates each `n` to
/// `ε = 0` and fits the growth exponent across `n`.
pub fn box_conjecture_experiment(dims: &[usize], epsilons: &[f64]) -> Result<ConjectureTable> {
    if dims.is_empty() || epsilons.is_empty() {
        return Err(Error::InvalidArgument("need at least one dimension and one epsilon".into()));
    }
    let mut eps = epsilons.to_vec();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for &n in dims {
        let block = eps.iter().map(|&e| box_row(n, e)).collect::<Result<Vec<_>>>()?;
        let cs: Vec<f64> = block.iter().map(|r| r.c_lower).collect();
        let (lo, hi) = cs.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &c| (lo.min(c), hi.max(c)));
        summaries.push(DimSummary {
            n,
            m: n / 2,
            extrapolated: extrapolate_to_zero(&eps, &cs),
            exact_limit: box_limit(n),
            spread: hi / lo - 1.0,
            asymmetry_over_n_eps: block[0].asymmetry / (n as f64 * eps[0]),
        });
        rows.extend(block);
    }
    let ns: Vec<usize> = summaries.iter().map(|s| s.n).collect();
    let limits: Vec<f64> = summaries.iter().map(|s| s.extrapolated).collect();
    Ok(ConjectureTable { rows, fit: fit_exponent(&ns, &limits), dims: summaries })
}

/// CSV with header `n,m,epsilon,beta,asymmetry,sigma,c_lower`.
pub fn rows_to_csv(rows: &[BoxRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
