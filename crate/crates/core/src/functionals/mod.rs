//! Scalar functionals of bodies and body pairs: anisotropic perimeter and
//! deficit, relative asymmetry, Brunn-Minkowski deficit, volume ratio,
//! inverse roundness and maximal overlap.

mod brunn;
mod overlap;
mod perimeter;
mod roundness;

pub use brunn::{bm_quantities, pair_metrics, BmQuantities, BodyPairMetrics};
pub use overlap::{
    dar_overlap, relative_asymmetry, Asymmetry, OverlapEngine, OverlapOptions, OverlapResult,
};
pub use perimeter::{anisotropic_perimeter, isoperimetric_deficit, wulff_minimum};
pub use roundness::{inverse_roundness, inverse_roundness_with, RoundnessEstimate, RoundnessOptions};
