//! Numerical laboratory for stable forms of the anisotropic isoperimetric
//! and Brunn-Minkowski inequalities on convex polytopes.
//!
//! * [`geom`]: polytopes stored by vertices, hulls, volumes, Minkowski sums,
//!   inscribed and enclosing balls, reproducible random bodies.
//! * [`functionals`]: anisotropic perimeter, isoperimetric deficit,
//!   Brunn-Minkowski deficit, relative asymmetry, inverse roundness.
//! * [`meanineq`]: stable AM-GM inequalities and their randomised suite.
//! * [`transport`]: discrete Brenier maps, local Jacobians, the chain of mean
//!   inequalities on their eigenvalues, and the planar trace inequality.
//! * [`lab`]: verifiers with explicit constants, the box-family experiment and
//!   the worst-case search.
//! * [`cli`]: the `wulff-lab` command line.
//!
//! ```
//! use wulff_lab::geom::ConvexBody;
//! use wulff_lab::lab::{verify_isoperimetric, ConstantMode, VerifyOptions};
//!
//! let square = ConvexBody::cube(2, -1.0, 1.0).unwrap();
//! let disc = ConvexBody::regular_polygon(64, 1.0).unwrap();
//! let r = verify_isoperimetric(&square, &disc, ConstantMode::General, &VerifyOptions::default()).unwrap();
//! assert!(r.pass && r.ratio < 1.0);
//! ```

pub mod cli;
pub mod error;
pub mod functionals;
pub mod geom;
pub mod lab;
pub mod meanineq;
pub mod transport;

pub use error::{Error, Result};
