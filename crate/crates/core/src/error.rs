use thiserror::Error;

/// Errors raised across the laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point set is not full-dimensional in R^{dim}")]
    DegenerateInput { dim: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what} is unavailable in dimension {dim}")]
    MethodUnavailable { what: &'static str, dim: usize },

    #[error("support function evaluated at the zero direction")]
    ZeroDirection,

    #[error("affine map has a singular linear part")]
    SingularMatrix,

    #[error("minimum-volume ellipsoid did not converge within {iterations} rounds")]
    EllipsoidNotConverged { iterations: usize },

    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },

    #[error("entry {index} = {value} lies outside [0, 1/2]")]
    OutOfRangeEntry { index: usize, value: f64 },

    #[error("requested {requested} samples, the exact assignment supports at most {max}")]
    SampleBudgetExceeded { requested: usize, max: usize },

    #[error("eigenvalue {index} violates the smallness regime: epsilon * lambda = {product} > 1/2")]
    OutOfRegime { index: usize, product: f64 },

    #[error("eigenvalue product {product} does not match mu^n = {expected}")]
    ProductConstraint { product: f64, expected: f64 },

    #[error("check is restricted to the plane, got dimension {dim}")]
    NotTwoDimensional { dim: usize },

    #[error("body `{label}` is not centrally symmetric")]
    NotCentrallySymmetric { label: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed body file: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
