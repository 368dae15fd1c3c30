//! Convex polytopes: hulls, facets, volumes, radii, Minkowski sums and
//! reproducible random generation.

mod balls;
mod body;
pub(crate) mod hull;
pub(crate) mod intersect;
pub(crate) mod io;
pub(crate) mod linalg;
mod lp;
mod ops;
pub(crate) mod random;
mod rng;
mod volume;

pub use balls::{chebyshev_ball, enclosing_ball, Ball};
pub use body::{ConvexBody, Facet, Vector, DEFAULT_EXACT_DIM_CAP};
pub use io::{body_from_json, body_to_json, read_body, write_body, BodyFile};
pub use ops::{apply_affine, minkowski_sum, AffineMap};
pub use random::{quasi_uniform_samples, random_body, uniform_samples};
pub use rng::RngSeed;
pub use volume::{volume, VolumeEstimate, VolumeMethod};

