use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{
    anisotropic_perimeter, bm_quantities, dar_overlap, inverse_roundness, relative_asymmetry, wulff_minimum,
    OverlapOptions,
};
use crate::geom::{minkowski_sum, ConvexBody};

/// Which inequality a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityName {
    /// Stable Wulff inequality with `C = 100 n⁴ q²`.
    QuantitativeIsoperimetric,
    /// Stable Wulff inequality with a dimensional constant, `100n⁶` or `100n⁵`.
    QuantitativeIsoperimetricDimensional,
    /// Stable Brunn-Minkowski with `C = 400n⁶`.
    QuantitativeBrunnMinkowski,
    /// `P_L(K) >= n |K|^{(n-1)/n} |L|^{1/n}`.
    Wulff,
    /// `|K+L|^{1/n} >= |K|^{1/n} + |L|^{1/n}`.
    BrunnMinkowski,
    /// `|K+L|^{1/n} >= M^{1/n} + |K|^{1/n}|L|^{1/n} / M^{1/n}`.
    Dar,
}

/// Constant used by the isoperimetric verifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantMode {
    /// `100 n⁴ q²` with `q` the computed upper bound on the inverse roundness.
    #[default]
    BodySpecific,
    /// `100 n⁶`.
    General,
    /// `100 n⁵`; `K` must be centrally symmetric.
    Symmetric,
}

impl ConstantMode {
    pub fn constant(self, n: usize, q: f64) -> f64 {
        let n = n as f64;
        match self {
            ConstantMode::BodySpecific => 100.0 * n.powi(4) * q * q,
            ConstantMode::General => 100.0 * n.powi(6),
            ConstantMode::Symmetric => 100.0 * n.powi(5),
        }
    }
}

/// Stable Brunn-Minkowski constant `400 n⁶`.
pub fn bm_constant(n: usize) -> f64 {
    400.0 * (n as f64).powi(6)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct ReportInputs {
    pub k: String,
    pub l: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: InequalityName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<ConstantMode>,
    pub lhs: f64,
    pub rhs: f64,
    /// Squared asymmetry over the allowed defect; at most 1 when the
    /// quantitative form holds. Zero for the classical forms.
    pub ratio: f64,
    pub constant_used: f64,
    pub q_used: f64,
    /// `δ` or `β`, whichever the inequality bounds.
    pub deficit: f64,
    pub asymmetry: f64,
    pub sigma: f64,
    pub tolerance: f64,
    pub inputs: ReportInputs,
    pub pass: bool,
}

impl InequalityReport {
    fn new(name: InequalityName, lhs: f64, rhs: f64, k: &ConvexBody, l: &ConvexBody, tolerance: f64) -> Self {
        InequalityReport {
            name,
            mode: None,
            lhs,
            rhs,
            ratio: 0.0,
            constant_used: 0.0,
            q_used: f64::NAN,
            deficit: f64::NAN,
            asymmetry: f64::NAN,
            sigma: f64::NAN,
            tolerance,
            inputs: ReportInputs { k: k.label().to_owned(), l: l.label().to_owned(), ..Default::default() },
            pass: lhs >= rhs - tolerance,
        }
    }

    pub fn with_seed(mut self, seed: u64, index: u64) -> Self {
        self.inputs.seed = Some(seed);
        self.inputs.index = Some(index);
        self
    }
}

/// `x / y` with `0 / 0 = 0`.
fn quotient(x: f64, y: f64) -> f64 {
    if x == 0.0 { 0.0 } else { x / y }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub overlap: OverlapOptions,
    /// Relative tolerance on `lhs >= rhs`.
    pub rel_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { overlap: OverlapOptions::default(), rel_tol: 1e-9 }
    }
}

fn check_dims(k: &ConvexBody, l: &ConvexBody) -> Result<()> {
    if k.dim() == l.dim() { Ok(()) } else { Err(Error::DimensionMismatch { left: k.dim(), right: l.dim() }) }
}

/// Inputs of the stable Wulff inequality that do not depend on the constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsoperimetricParts {
    pub perimeter: f64,
    pub wulff_minimum: f64,
    pub asymmetry: f64,
}

impl IsoperimetricParts {
    pub fn compute(k: &ConvexBody, l: &ConvexBody, opts: &VerifyOptions) -> Result<Self> {
        check_dims(k, l)?;
        Ok(IsoperimetricParts {
            perimeter: anisotropic_perimeter(k, l)?,
            wulff_minimum: wulff_minimum(k, l)?,
            asymmetry: relative_asymmetry(k, l, &opts.overlap)?.value,
        })
    }

    pub fn deficit(&self) -> f64 {
        self.perimeter / self.wulff_minimum - 1.0
    }
}

/// `P_L(K) >= n|K|^{(n-1)/n}|L|^{1/n} (1 + A(K,L)² / C)`.
pub fn verify_isoperimetric(
    k: &ConvexBody,
    l: &ConvexBody,
    mode: ConstantMode,
    opts: &VerifyOptions,
) -> Result<InequalityReport> {
    check_dims(k, l)?;
    let symmetric = k.is_centrally_symmetric();
    if mode == ConstantMode::Symmetric && !symmetric {
        return Err(Error::NotCentrallySymmetric { label: k.label().to_owned() });
    }
    let parts = IsoperimetricParts::compute(k, l, opts)?;
    isoperimetric_report(k, l, mode, &parts, opts)
}

/// As [`verify_isoperimetric`], reusing precomputed perimeter and asymmetry.
pub fn isoperimetric_report(
    k: &ConvexBody,
    l: &ConvexBody,
    mode: ConstantMode,
    parts: &IsoperimetricParts,
    opts: &VerifyOptions,
) -> Result<InequalityReport> {
    let symmetric = k.is_centrally_symmetric();
    if mode == ConstantMode::Symmetric && !symmetric {
        return Err(Error::NotCentrallySymmetric { label: k.label().to_owned() });
    }
    let n = k.dim();
    let q = match mode {
        ConstantMode::BodySpecific => inverse_roundness(k, symmetric)?.q_upper,
        ConstantMode::General => n as f64,
        ConstantMode::Symmetric => (n as f64).sqrt(),
    };
    let c = mode.constant(n, q);
    let a = parts.asymmetry;
    let delta = parts.deficit();
    let rhs = parts.wulff_minimum * (1.0 + a * a / c);
    let name = match mode {
        ConstantMode::BodySpecific => InequalityName::QuantitativeIsoperimetric,
        _ => InequalityName::QuantitativeIsoperimetricDimensional,
    };
    let mut r = InequalityReport::new(name, parts.perimeter, rhs, k, l, opts.rel_tol * rhs.abs().max(parts.perimeter.abs()));
    r.mode = Some(mode);
    r.ratio = quotient(a * a, c * delta.max(0.0));
    r.constant_used = c;
    r.q_used = q;
    r.deficit = delta;
    r.asymmetry = a;
    Ok(r)
}

/// `β(K,L) >= A(K,L)² / (400 n⁶ σ^{1/n})`.
pub fn verify_bm(k: &ConvexBody, l: &ConvexBody, opts: &VerifyOptions) -> Result<InequalityReport> {
    check_dims(k, l)?;
    let a = relative_asymmetry(k, l, &opts.overlap)?.value;
    bm_report(k, l, a, opts)
}

/// As [`verify_bm`] with a known asymmetry.
pub fn bm_report(k: &ConvexBody, l: &ConvexBody, asymmetry: f64, opts: &VerifyOptions) -> Result<InequalityReport> {
    let n = k.dim();
    let bm = bm_quantities(k, l)?;
    let c = bm_constant(n);
    let s = bm.sigma.powf(1.0 / n as f64);
    let rhs = asymmetry * asymmetry / (c * s);
    // β is a difference of order-one terms, so its tolerance is absolute.
    let mut r = InequalityReport::new(InequalityName::QuantitativeBrunnMinkowski, bm.beta, rhs, k, l, opts.rel_tol);
    r.ratio = quotient(rhs, bm.beta.max(0.0));
    r.constant_used = c;
    r.deficit = bm.beta;
    r.asymmetry = asymmetry;
    r.sigma = bm.sigma;
    Ok(r)
}

/// Both classical inequalities: Wulff and Brunn-Minkowski.
pub fn verify_classical(k: &ConvexBody, l: &ConvexBody, opts: &VerifyOptions) -> Result<[InequalityReport; 2]> {
    check_dims(k, l)?;
    let p = anisotropic_perimeter(k, l)?;
    let w = wulff_minimum(k, l)?;
    let mut wulff = InequalityReport::new(InequalityName::Wulff, p, w, k, l, opts.rel_tol * p.max(w));
    wulff.deficit = p / w - 1.0;
    let bm = bm_quantities(k, l)?;
    let n = k.dim() as f64;
    let lhs = bm.volume_sum.powf(1.0 / n);
    let rhs = bm.volume_k.powf(1.0 / n) + bm.volume_l.powf(1.0 / n);
    let mut classic = InequalityReport::new(InequalityName::BrunnMinkowski, lhs, rhs, k, l, opts.rel_tol * lhs.max(rhs));
    classic.deficit = bm.beta;
    classic.sigma = bm.sigma;
    Ok([wulff, classic])
}

/// Absolute tolerance of the overlap-volume inequality.
pub const DAR_TOLERANCE: f64 = 1e-6;

/// `|K+L|^{1/n} >= M^{1/n} + |K|^{1/n}|L|^{1/n} / M^{1/n}` with `M` the largest
/// overlap of `K` with a translate of `L`. Proven in the plane; a conjecture
/// above it.
pub fn verify_dar(k: &ConvexBody, l: &ConvexBody, opts: &VerifyOptions) -> Result<InequalityReport> {
    check_dims(k, l)?;
    let n = k.dim() as f64;
    let m = dar_overlap(k, l, &opts.overlap)?.max_overlap;
    let bm = bm_quantities(k, l)?;
    let lhs = bm.volume_sum.powf(1.0 / n);
    let mr = m.powf(1.0 / n);
    let rhs = mr + (bm.volume_k * bm.volume_l).powf(1.0 / n) / mr;
    let mut r = InequalityReport::new(InequalityName::Dar, lhs, rhs, k, l, DAR_TOLERANCE);
    r.deficit = bm.beta;
    r.sigma = bm.sigma;
    Ok(r)
}

/// The passage from the stable Wulff inequality to stable Brunn-Minkowski,
/// evaluated on a pair with `M = K + L`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivationReport {
    /// `|P_K(M) + P_L(M) - P_M(M)| / P_M(M)`.
    pub additivity_residual: f64,
    /// `|P_M(M) - n|M|| / n|M|`.
    pub self_perimeter_residual: f64,
    /// `|β - (|K|^{1/n} δ_K + |L|^{1/n} δ_L) / (|K|^{1/n} + |L|^{1/n})|`, where
    /// `δ_K, δ_L` are the deficits of `M` against `K` and `L`; an identity.
    pub deficit_identity_residual: f64,
    pub asymmetry_kl: f64,
    pub asymmetry_mk: f64,
    pub asymmetry_ml: f64,
    /// `A(K,L) <= A(M,K) + A(M,L) + tolerance`.
    pub triangle_holds: bool,
    /// `β >= (w_K A(M,K)² + w_L A(M,L)²) / C(n)` with volume-root weights.
    pub weighted_bound: f64,
    pub weighted_holds: bool,
    /// `β >= A(K,L)² / (4 C(n) σ^{1/n})`, `C(n) = 100 n⁶`.
    pub final_bound: InequalityReport,
}

/// Triangle slack allowed for optimiser error in the three asymmetries.
pub const TRIANGLE_TOLERANCE: f64 = 1e-5;

pub fn derive_bm_from_iso(k: &ConvexBody, l: &ConvexBody, opts: &VerifyOptions) -> Result<DerivationReport> {
    check_dims(k, l)?;
    let n = k.dim();
    let nf = n as f64;
    let m = minkowski_sum(k, l)?;
    let (pk, pl, pm) = (anisotropic_perimeter(&m, k)?, anisotropic_perimeter(&m, l)?, anisotropic_perimeter(&m, &m)?);
    let vm = m.volume()?;
    let bm = bm_quantities(k, l)?;
    let (rk, rl) = (bm.volume_k.powf(1.0 / nf), bm.volume_l.powf(1.0 / nf));
    let (dk, dl) = (pk / wulff_minimum(&m, k)? - 1.0, pl / wulff_minimum(&m, l)? - 1.0);
    let a_kl = relative_asymmetry(k, l, &opts.overlap)?.value;
    let a_mk = relative_asymmetry(&m, k, &opts.overlap)?.value;
    let a_ml = relative_asymmetry(&m, l, &opts.overlap)?.value;
    let c = ConstantMode::General.constant(n, nf);
    let weighted_bound = (rk * a_mk * a_mk + rl * a_ml * a_ml) / ((rk + rl) * c);
    let s = bm.sigma.powf(1.0 / nf);
    let rhs = a_kl * a_kl / (4.0 * c * s);
    let mut final_bound = InequalityReport::new(InequalityName::QuantitativeBrunnMinkowski, bm.beta, rhs, k, l, opts.rel_tol);
    final_bound.ratio = quotient(rhs, bm.beta.max(0.0));
    final_bound.constant_used = 4.0 * c;
    final_bound.deficit = bm.beta;
    final_bound.asymmetry = a_kl;
    final_bound.sigma = bm.sigma;
    Ok(DerivationReport {
        additivity_residual: (pk + pl - pm).abs() / pm,
        self_perimeter_residual: (pm - nf * vm).abs() / (nf * vm),
        deficit_identity_residual: (bm.beta - (rk * dk + rl * dl) / (rk + rl)).abs(),
        asymmetry_kl: a_kl,
        asymmetry_mk: a_mk,
        asymmetry_ml: a_ml,
        triangle_holds: a_kl <= a_mk + a_ml + TRIANGLE_TOLERANCE,
        weighted_bound,
        weighted_holds: bm.beta >= weighted_bound - opts.rel_tol,
        final_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homothets_are_equality_cases() {
        let l = ConvexBody::regular_polygon(7, 1.0).unwrap();
        let k = l.scaled(2.5).translated(&[0.3, -1.0]);
        for mode in [ConstantMode::BodySpecific, ConstantMode::General] {
            let r = verify_isoperimetric(&k, &l, mode, &VerifyOptions::default()).unwrap();
            assert!(r.pass && r.deficit.abs() < 1e-12 && r.asymmetry < 1e-6, "{r:?}");
        }
        let r = verify_bm(&l, &l, &VerifyOptions::default()).unwrap();
        assert!(r.pass && r.lhs.abs() < 1e-12);
    }

    #[test]
    fn square_against_disc() {
        let k = ConvexBody::cube(2, -1.0, 1.0).unwrap();
        let l = ConvexBody::regular_polygon(256, 1.0).unwrap();
        let r = verify_isoperimetric(&k, &l, ConstantMode::General, &VerifyOptions::default()).unwrap();
        assert_eq!(r.constant_used, 6400.0);
        assert!((r.deficit - (2.0 / std::f64::consts::PI.sqrt() - 1.0)).abs() < 1e-3, "{}", r.deficit);
        assert!(r.pass && r.ratio < 1e-3);
        let body = verify_isoperimetric(&k, &l, ConstantMode::BodySpecific, &VerifyOptions::default()).unwrap();
        assert!((body.q_used - 2f64.sqrt()).abs() < 1e-5, "{}", body.q_used);
        assert!(body.rhs >= r.rhs);
    }

    #[test]
    fn symmetric_mode_rejects_simplex() {
        let k = ConvexBody::standard_simplex(2).unwrap();
        let l = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let err = verify_isoperimetric(&k, &l, ConstantMode::Symmetric, &VerifyOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NotCentrallySymmetric { .. }));
    }

    #[test]
    fn box_pair_bm() {
        let k = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let l = ConvexBody::axis_box(&[0.0, 0.0], &[1.0, 1.1], "l").unwrap();
        let r = verify_bm(&k, &l, &VerifyOptions::default()).unwrap();
        assert!((r.deficit - 2.83e-4).abs() < 1e-6, "{}", r.deficit);
        assert!((r.asymmetry - 0.0931).abs() < 1e-4);
        assert!(r.pass && (r.ratio * r.constant_used - 29.1).abs() < 0.1, "{r:?}");
    }

    #[test]
    fn planar_overlap_inequality() {
        let k = ConvexBody::standard_simplex(2).unwrap();
        let l = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let r = verify_dar(&k, &l, &VerifyOptions::default()).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn derivation_on_triangle_and_square() {
        let k = ConvexBody::standard_simplex(2).unwrap();
        let l = ConvexBody::cube(2, 0.0, 1.0).unwrap();
        let d = derive_bm_from_iso(&k, &l, &VerifyOptions::default()).unwrap();
        assert!(d.additivity_residual < 1e-9 && d.self_perimeter_residual < 1e-9);
        assert!(d.deficit_identity_residual < 1e-12, "{}", d.deficit_identity_residual);
        assert!(d.triangle_holds && d.weighted_holds && d.final_bound.pass);
        let same = derive_bm_from_iso(&l, &l, &VerifyOptions::default()).unwrap();
        assert!(same.asymmetry_kl < 1e-6 && same.final_bound.lhs.abs() < 1e-12);
    }
}
