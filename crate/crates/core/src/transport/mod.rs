//! Transport diagnostics: a discrete Brenier map between uniform samples,
//! its local Jacobians, the chain of mean inequalities evaluated on
//! eigenvalue tuples, and the planar trace inequality.

mod brenier;
mod chain;
mod trace;

pub use brenier::{
    asymmetry_gradient_bound_check, default_neighbors, discrete_brenier, discrete_brenier_with, local_jacobians, DiscreteMap,
    GradientBoundReport, JacobianReport, LocalJacobian, Sampling, MAX_ASSIGNMENT_SAMPLES, TRACE_CONSTANT,
};
pub use chain::{
    chain_evaluate, chain_suite, ChainReport, ChainSample, ChainSuiteConfig, ChainSuiteReport, CheckTally,
    Comparison, DISPLAYED,
};
pub use trace::{trace_inequality_check, trace_inequality_for, trace_suite, TraceCheck, TraceSuiteReport, TriangleMesh};
