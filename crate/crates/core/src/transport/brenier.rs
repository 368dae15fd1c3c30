use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{inverse_roundness, relative_asymmetry, OverlapOptions};
use crate::geom::linalg::dist2;
use crate::geom::{quasi_uniform_samples, uniform_samples, AffineMap, ConvexBody, RngSeed, Vector};

/// Largest sample count accepted by the exact assignment solver.
pub const MAX_ASSIGNMENT_SAMPLES: usize = 4096;

/// `2√2 / ln 2`.
pub const TRACE_CONSTANT: f64 = 2.0 * std::f64::consts::SQRT_2 / std::f64::consts::LN_2;

/// Optimal matching of equal-size uniform samples of `K` and `L`.
#[derive(Debug, Clone)]
pub struct DiscreteMap {
    pub sources: Vec<Vector>,
    pub targets: Vec<Vector>,
    /// `assignment[i]` is the target matched to source `i`.
    pub assignment: Vec<usize>,
    /// Mean squared displacement.
    pub cost: f64,
    /// `|L| / |K|`.
    pub volume_ratio: f64,
    source_body: ConvexBody,
}

/// Dense linear assignment by shortest augmenting paths: one Dijkstra
/// search per row over the columns not yet scanned, then a dual update.
/// Returns the column of each row.
fn assign_dense(n: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    const NONE: usize = usize::MAX;
    let mut u = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut col_of_row = vec![NONE; n];
    let mut row_of_col = vec![NONE; n];
    let mut path = vec![NONE; n];
    let mut shortest = vec![f64::INFINITY; n];
    let mut remaining: Vec<usize> = Vec::with_capacity(n);
    let mut scanned_rows = Vec::with_capacity(n);
    let mut scanned_cols = Vec::with_capacity(n);
    for start in 0..n {
        remaining.clear();
        remaining.extend((0..n).rev());
        shortest.iter_mut().for_each(|d| *d = f64::INFINITY);
        scanned_rows.clear();
        scanned_cols.clear();
        let mut min_val = 0.0;
        let mut i = start;
        let sink = loop {
            scanned_rows.push(i);
            let (ui, mut lowest, mut index) = (u[i], f64::INFINITY, 0);
            for (it, &j) in remaining.iter().enumerate() {
                let r = min_val + cost(i, j) - ui - v[j];
                if r < shortest[j] {
                    path[j] = i;
                    shortest[j] = r;
                }
                if shortest[j] < lowest || (shortest[j] == lowest && row_of_col[j] == NONE) {
                    lowest = shortest[j];
                    index = it;
                }
            }
            min_val = lowest;
            let j = remaining.swap_remove(index);
            scanned_cols.push(j);
            if row_of_col[j] == NONE {
                break j;
            }
            i = row_of_col[j];
        };
        u[start] += min_val;
        for &r in &scanned_rows[1..] {
            u[r] += min_val - shortest[col_of_row[r]];
        }
        for &c in &scanned_cols {
            v[c] -= min_val - shortest[c];
        }
        let mut j = sink;
        loop {
            let i = path[j];
            row_of_col[j] = i;
            std::mem::swap(&mut j, &mut col_of_row[i]);
            if i == start {
                break;
            }
        }
    }
    col_of_row
}

/// How the two sample clouds are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// Randomly shifted Halton points; local fits are far less noisy.
    #[default]
    LowDiscrepancy,
    /// Independent uniform draws.
    Independent,
}

/// Squared-distance optimal matching between `n_samples` low-discrepancy
/// uniform points of `K` and of `L`.
pub fn discrete_brenier(k: &ConvexBody, l: &ConvexBody, n_samples: usize, seed: RngSeed) -> Result<DiscreteMap> {
    discrete_brenier_with(k, l, n_samples, seed, Sampling::default())
}

/// As [`discrete_brenier`], with a choice of sampler. The two clouds use
/// distinct streams of `seed`.
pub fn discrete_brenier_with(
    k: &ConvexBody,
    l: &ConvexBody,
    n_samples: usize,
    seed: RngSeed,
    sampling: Sampling,
) -> Result<DiscreteMap> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch { left: k.dim(), right: l.dim() });
    }
    if n_samples > MAX_ASSIGNMENT_SAMPLES {
        return Err(Error::SampleBudgetExceeded { requested: n_samples, max: MAX_ASSIGNMENT_SAMPLES });
    }
    if n_samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let draw = match sampling {
        Sampling::LowDiscrepancy => quasi_uniform_samples,
        Sampling::Independent => uniform_samples,
    };
    let sources = draw(k, n_samples, seed.derive(0))?;
    let targets = draw(l, n_samples, seed.derive(1))?;
    DiscreteMap::from_samples(k, l, sources, targets)
}

impl DiscreteMap {
    /// Optimal matching of given samples; `sources` are taken to lie in `k`.
    pub fn from_samples(k: &ConvexBody, l: &ConvexBody, sources: Vec<Vector>, targets: Vec<Vector>) -> Result<Self> {
        if sources.len() != targets.len() {
            return Err(Error::InvalidArgument("source and target counts differ".into()));
        }
        if sources.len() > MAX_ASSIGNMENT_SAMPLES {
            return Err(Error::SampleBudgetExceeded { requested: sources.len(), max: MAX_ASSIGNMENT_SAMPLES });
        }
        let dim = k.dim();
        let flat = |pts: &[Vector]| pts.iter().flat_map(|p| p.iter().copied()).collect::<Vec<f64>>();
        let (xs, ys) = (flat(&sources), flat(&targets));
        let assignment = assign_dense(sources.len(), |i, j| dist2(&xs[i * dim..(i + 1) * dim], &ys[j * dim..(j + 1) * dim]));
        let cost = sources
            .iter()
            .zip(&assignment)
            .map(|(s, &j)| dist2(s.as_slice(), targets[j].as_slice()))
            .sum::<f64>()
            / sources.len().max(1) as f64;
        Ok(DiscreteMap { sources, targets, assignment, cost, volume_ratio: l.volume()? / k.volume()?, source_body: k.clone() })
    }

    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.source_body.dim()
    }

    pub fn image(&self, i: usize) -> &Vector {
        &self.targets[self.assignment[i]]
    }

    fn pair_cost(&self, i: usize, j: usize) -> f64 {
        dist2(self.sources[i].as_slice(), self.targets[j].as_slice())
    }

    /// Largest cost decrease available from exchanging the targets of two
    /// sources; nonpositive for an optimal matching.
    pub fn best_swap_gain(&self) -> f64 {
        let n = self.len();
        let mut best = f64::NEG_INFINITY;
        for i in 0..n {
            let (ti, ci) = (self.assignment[i], self.pair_cost(i, self.assignment[i]));
            for j in i + 1..n {
                let tj = self.assignment[j];
                let gain = ci + self.pair_cost(j, tj) - self.pair_cost(i, tj) - self.pair_cost(j, ti);
                best = best.max(gain);
            }
        }
        best
    }

    /// Largest cost decrease among `trials` random cyclic shifts of three
    /// matched pairs, in either direction.
    pub fn best_three_cycle_gain(&self, trials: usize, seed: RngSeed) -> f64 {
        let n = self.len();
        if n < 3 {
            return f64::NEG_INFINITY;
        }
        let mut rng = seed.rng();
        let mut best = f64::NEG_INFINITY;
        for _ in 0..trials {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            let c = rng.random_range(0..n);
            if a == b || b == c || a == c {
                continue;
            }
            let [ta, tb, tc] = [self.assignment[a], self.assignment[b], self.assignment[c]];
            let now = self.pair_cost(a, ta) + self.pair_cost(b, tb) + self.pair_cost(c, tc);
            let forward = self.pair_cost(a, tb) + self.pair_cost(b, tc) + self.pair_cost(c, ta);
            let backward = self.pair_cost(a, tc) + self.pair_cost(b, ta) + self.pair_cost(c, tb);
            best = best.max(now - forward).max(now - backward);
        }
        best
    }

    /// Least-squares affine map from sources to their images.
    pub fn affine_fit(&self) -> Result<AffineMap> {
        let idx: Vec<usize> = (0..self.len()).collect();
        let w = vec![1.0; idx.len()];
        let center = Vector::zeros(self.dim());
        let (matrix, shift) = self.weighted_fit(&idx, &w, &center).ok_or(Error::SingularMatrix)?;
        Ok(AffineMap { matrix, shift })
    }

    /// Weighted fit `y ≈ J (x - center) + b` over `idx`.
    fn weighted_fit(&self, idx: &[usize], w: &[f64], center: &Vector) -> Option<(DMatrix<f64>, Vector)> {
        let n = self.dim();
        let mut xtx = DMatrix::<f64>::zeros(n + 1, n + 1);
        let mut xty = DMatrix::<f64>::zeros(n + 1, n);
        let mut row = vec![0.0; n + 1];
        for (&i, &wi) in idx.iter().zip(w) {
            for t in 0..n {
                row[t] = self.sources[i][t] - center[t];
            }
            row[n] = 1.0;
            let y = self.image(i);
            for a in 0..=n {
                for b in 0..=n {
                    xtx[(a, b)] += wi * row[a] * row[b];
                }
                for b in 0..n {
                    xty[(a, b)] += wi * row[a] * y[b];
                }
            }
        }
        let eig = SymmetricEigen::new(xtx.view((0, 0), (n, n)).into_owned()).eigenvalues;
        let (lo, hi) = eig.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| (lo.min(e), hi.max(e)));
        if !(lo > 1e-10 * hi) {
            return None;
        }
        let beta = xtx.cholesky()?.solve(&xty);
        let matrix = beta.view((0, 0), (n, n)).transpose();
        let shift = Vector::from_iterator(n, (0..n).map(|t| beta[(n, t)]));
        Some((matrix, shift))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalJacobian {
    pub anchor: Vector,
    /// Symmetric part of the fitted linear map.
    pub matrix: DMatrix<f64>,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub nonpositive: bool,
}

impl LocalJacobian {
    pub fn determinant(&self) -> f64 {
        self.eigenvalues.iter().product()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobianReport {
    pub jacobians: Vec<LocalJacobian>,
    /// Anchors within one neighbourhood radius of the boundary.
    pub skipped_boundary: usize,
    pub skipped_ill_conditioned: usize,
    /// Fraction of fitted anchors whose determinant is within 25% of `|L|/|K|`.
    pub quality: f64,
    pub median_determinant: f64,
    /// Empirical stand-ins for the uniform eigenvalue bounds `a <= λ_i <= b`.
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// Default neighbourhood size, `max(2n + 2, 12)`.
pub fn default_neighbors(dim: usize) -> usize {
    (2 * dim + 2).max(12)
}

const MAX_ANCHORS: usize = 256;

/// Symmetrised local affine fits at interior anchors, with tricube weights
/// over the `k_neighbors` nearest sources.
pub fn local_jacobians(map: &DiscreteMap, k_neighbors: usize) -> Result<JacobianReport> {
    let n = map.dim();
    if k_neighbors < 2 * n + 1 {
        return Err(Error::InvalidArgument(format!("need at least {} neighbours, got {k_neighbors}", 2 * n + 1)));
    }
    if k_neighbors > map.len() {
        return Err(Error::InvalidArgument("more neighbours than samples".into()));
    }
    let stride = map.len().div_ceil(MAX_ANCHORS).max(1);
    let mut jacobians = Vec::new();
    let (mut skipped_boundary, mut skipped_ill_conditioned) = (0, 0);
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(map.len());
    for a in (0..map.len()).step_by(stride) {
        let anchor = &map.sources[a];
        order.clear();
        order.extend(map.sources.iter().enumerate().map(|(i, s)| (dist2(s.as_slice(), anchor.as_slice()), i)));
        order.select_nth_unstable_by(k_neighbors - 1, |x, y| x.0.total_cmp(&y.0));
        let radius = order[k_neighbors - 1].0.sqrt();
        if map.source_body.slack(anchor.as_slice())? <= radius {
            skipped_boundary += 1;
            continue;
        }
        let h = radius * 1.0001;
        let idx: Vec<usize> = order[..k_neighbors].iter().map(|&(_, i)| i).collect();
        let w: Vec<f64> = order[..k_neighbors].iter().map(|&(d, _)| (1.0 - (d.sqrt() / h).powi(3)).powi(3)).collect();
        let Some((j, _)) = map.weighted_fit(&idx, &w, anchor) else {
            skipped_ill_conditioned += 1;
            continue;
        };
        let sym = (&j + j.transpose()) * 0.5;
        let mut eigenvalues: Vec<f64> = SymmetricEigen::new(sym.clone()).eigenvalues.iter().copied().collect();
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let nonpositive = eigenvalues.iter().any(|&e| e <= 0.0);
        jacobians.push(LocalJacobian { anchor: anchor.clone(), matrix: sym, eigenvalues, nonpositive });
    }
    let mut dets: Vec<f64> = jacobians.iter().map(LocalJacobian::determinant).collect();
    dets.sort_by(f64::total_cmp);
    let target = map.volume_ratio;
    let good = dets.iter().filter(|&&d| (d - target).abs() <= 0.25 * target).count();
    let median_determinant = if dets.is_empty() { f64::NAN } else { dets[dets.len() / 2] };
    let all = jacobians.iter().flat_map(|j| j.eigenvalues.iter().copied());
    let (min_eigenvalue, max_eigenvalue) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), e| (a.min(e), b.max(e)));
    Ok(JacobianReport {
        quality: if dets.is_empty() { 0.0 } else { good as f64 / dets.len() as f64 },
        median_determinant,
        min_eigenvalue,
        max_eigenvalue,
        skipped_boundary,
        skipped_ill_conditioned,
        jacobians,
    })
}

/// Both sides of the asymmetry bound through the transport Jacobian.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientBoundReport {
    pub asymmetry: f64,
    /// Mean Frobenius norm of `J - μI` over the fitted anchors.
    pub mean_deviation: f64,
    pub mu: f64,
    pub q_upper: f64,
    /// `C_0 n q / μ` times the mean deviation.
    pub bound: f64,
    /// `bound / asymmetry`; infinite when the asymmetry vanishes.
    pub ratio: f64,
    pub holds: bool,
}

/// Compares `A(K,L)` with `(C_0 n q_K / μ) · mean |∇F - μI|`, where the
/// Jacobian is estimated by local fits to the discrete map. With the map
/// scaled by `ε`, both sides are linear in `ε`, so the check runs at `ε = 1`.
pub fn asymmetry_gradient_bound_check(
    k: &ConvexBody,
    l: &ConvexBody,
    map: &DiscreteMap,
    overlap: &OverlapOptions,
) -> Result<GradientBoundReport> {
    let n = k.dim();
    let report = local_jacobians(map, default_neighbors(n))?;
    if report.jacobians.is_empty() {
        return Err(Error::InvalidArgument("no interior anchors were fitted".into()));
    }
    let mu = map.volume_ratio.powf(1.0 / n as f64);
    let mean_deviation = report
        .jacobians
        .iter()
        .map(|j| (&j.matrix - DMatrix::<f64>::identity(n, n) * mu).norm())
        .sum::<f64>()
        / report.jacobians.len() as f64;
    let q_upper = inverse_roundness(k, false)?.q_upper;
    let asymmetry = relative_asymmetry(k, l, overlap)?.value;
    let bound = TRACE_CONSTANT * n as f64 * q_upper / mu * mean_deviation;
    let ratio = if asymmetry > 0.0 { bound / asymmetry } else { f64::INFINITY };
    Ok(GradientBoundReport { asymmetry, mean_deviation, mu, q_upper, bound, ratio, holds: bound >= asymmetry - 1e-9 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignment_matches_brute_force() {
        use rand::Rng;
        let mut rng = RngSeed::new(9, 0).rng();
        for _ in 0..50 {
            let xs: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..1.0)).collect();
            let ys: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..1.0)).collect();
            let total = |a: &[usize]| -> f64 { (0..6).map(|i| dist2(&xs[2 * i..2 * i + 2], &ys[2 * a[i]..2 * a[i] + 2])).sum() };
            let got = total(&assign_dense(6, |i, j| dist2(&xs[2 * i..2 * i + 2], &ys[2 * j..2 * j + 2])));
            let mut perm: Vec<usize> = (0..6).collect();
            let mut best = f64::INFINITY;
            loop {
                best = best.min(total(&perm));
                let Some(i) = (0..5).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
                let j = (i + 1..6).rev().find(|&j| perm[j] > perm[i]).unwrap();
                perm.swap(i, j);
                perm[i + 1..].reverse();
            }
            assert!((got - best).abs() < 1e-12, "{got} vs {best}");
        }
    }

    #[test]
    fn identical_samples_match_identically() {
        let k = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let s = uniform_samples(&k, 200, RngSeed::new(3, 0)).unwrap();
        let map = DiscreteMap::from_samples(&k, &k, s.clone(), s).unwrap();
        assert!(map.assignment.iter().enumerate().all(|(i, &j)| i == j));
        assert_eq!(map.cost, 0.0);
    }

    #[test]
    fn budget_is_enforced() {
        let k = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        assert!(matches!(
            discrete_brenier(&k, &k, 5000, RngSeed::new(1, 0)),
            Err(Error::SampleBudgetExceeded { requested: 5000, max: 4096 })
        ));
    }

    #[test]
    fn box_map_is_locally_optimal_and_nearly_linear() {
        let k = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let l = ConvexBody::axis_box(&[0.0, 0.0], &[2.0, 0.5], "l").unwrap();
        let map = discrete_brenier(&k, &l, 512, RngSeed::new(5, 0)).unwrap();
        assert!(map.best_swap_gain() <= 1e-12);
        assert!(map.best_three_cycle_gain(20000, RngSeed::new(6, 0)) <= 1e-12);
        let fit = map.affine_fit().unwrap();
        assert!((fit.matrix[(0, 0)] - 2.0).abs() < 0.15 && (fit.matrix[(1, 1)] - 0.5).abs() < 0.15);
        assert!(fit.matrix[(0, 1)].abs() < 0.15 && fit.matrix[(1, 0)].abs() < 0.15);
    }

    #[test]
    fn self_map_has_unit_jacobians() {
        let k = ConvexBody::regular_polygon(6, 1.0).unwrap();
        let map = discrete_brenier(&k, &k, 600, RngSeed::new(2, 0)).unwrap();
        let r = local_jacobians(&map, 24).unwrap();
        assert!(!r.jacobians.is_empty());
        assert!((r.median_determinant - 1.0).abs() < 0.1, "{}", r.median_determinant);
        let mut eig: Vec<f64> = r.jacobians.iter().flat_map(|j| j.eigenvalues.clone()).collect();
        eig.sort_by(f64::total_cmp);
        assert!((eig[eig.len() / 2] - 1.0).abs() < 0.1);
    }

    #[test]
    fn too_few_neighbours_rejected() {
        let k = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let map = discrete_brenier(&k, &k, 50, RngSeed::new(2, 0)).unwrap();
        assert!(matches!(local_jacobians(&map, 4), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn gradient_bound_on_box_pair() {
        let k = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let l = ConvexBody::axis_box(&[0.0, 0.0], &[2.0, 0.5], "l").unwrap();
        let map = discrete_brenier(&k, &l, 512, RngSeed::new(8, 0)).unwrap();
        let r = asymmetry_gradient_bound_check(&k, &l, &map, &OverlapOptions::default()).unwrap();
        assert!((r.asymmetry - 1.0).abs() < 1e-6);
        assert!((r.mu - 1.0).abs() < 1e-12);
        assert!(r.holds && r.ratio >= 1.0, "{r:?}");
    }
}
